#include "vfalg/proof_scripts.hpp"

#include "vfalg/closure.hpp"

#include <map>
#include <ostream>
#include <stdexcept>

namespace vfalg {

namespace {

struct Known {
    LieWord word;
    Rational scalar;
    int step;
    bool fallback;       // the certificate itself came from closure membership
    bool uses_fallback;  // some subword did
    std::string origin;
};

class ScriptFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Builder {
public:
    Builder(std::size_t n, unsigned d, std::vector<Generator> gens, const ScriptOptions& options)
        : n_(n), d_(d), gens_(std::move(gens)), options_(options), eval_(generator_bindings(gens_, n)) {}

    std::size_t n() const { return n_; }
    LieWord gen(Generator g) const { return LieWord::generator(std::string(generator_name(g))); }
    const VectorField& value(const LieWord& w) { return eval_(w); }

    MonomialFieldIndex index(std::initializer_list<std::pair<std::size_t, unsigned>> powers, std::size_t k) const {
        ExponentVector e(n_);
        for (auto [i, p] : powers) e[i - 1] += p;
        return {e, Coordinate{k}};
    }

    const Known* find(const MonomialFieldIndex& t) const {
        auto it = known_.find(t);
        return it == known_.end() ? nullptr : &it->second;
    }

    /// Evaluates w and records it as a certificate for t; the scalar is read
    /// off the evaluation. A word that is not a multiple of z^alpha d/dz_k is
    /// a bug in the script.
    const Known& record(const MonomialFieldIndex& t, LieWord w, int step, std::string origin, bool uses_fallback = false,
                        bool fallback = false) {
        if (auto* k = find(t)) return *k;
        auto s = proportionality_scalar(eval_(w), monomial_field(t));
        if (!s) throw std::logic_error("script word for " + to_string(t) + " evaluates to " + to_string(eval_(w)));
        return known_.emplace(t, Known{std::move(w), *s, step, fallback, uses_fallback || fallback, std::move(origin)})
            .first->second;
    }

    const Known& partial(std::size_t k) const {
        auto* p = find(index({}, k));
        if (!p) throw std::logic_error("d/dz" + std::to_string(k) + " not yet derived");
        return *p;
    }

    /// Brackets with partial derivatives, starting from the lowest-degree
    /// known field in the same direction whose exponent dominates t.
    const Known* lowered(const MonomialFieldIndex& t, int step) {
        if (auto* k = find(t)) return k;
        const MonomialFieldIndex* best = nullptr;
        for (const auto& [idx, k] : known_) {
            if (idx.direction != t.direction || !t.exponent.divides(idx.exponent)) continue;
            if (!best || idx.exponent.total_degree() < best->exponent.total_degree()) best = &idx;
        }
        if (!best) return nullptr;
        const Known& src = known_.at(*best);
        LieWord w = src.word;
        bool fb = src.uses_fallback;
        for (std::size_t i = 0; i < n_; ++i) {
            for (unsigned r = t.exponent[i]; r < best->exponent[i]; ++r) {
                const Known& p = partial(i + 1);
                w = bracket(p.word, w);
                fb = fb || p.uses_fallback;
            }
        }
        return &record(t, std::move(w), step, "partials of " + to_string(*best), fb);
    }

    const Known& fallback(const MonomialFieldIndex& t) {
        if (auto* k = find(t)) return *k;
        if (!basis_) {
            auto generators = named_generators(gens_, n_);
            ClosureOptions o;
            o.cap = options_.fallback_cap.value_or(default_cap(generators, d_));
            o.max_rounds = options_.max_rounds;
            basis_.emplace(closure(generators, o).basis);
        }
        if (t.exponent.total_degree() > basis_->cap())
            throw ScriptFailure("degree exceeds fallback cap " + std::to_string(basis_->cap()));
        auto c = basis_->certify(t);
        if (!c) throw ScriptFailure("not in the span at cap " + std::to_string(basis_->cap()));
        return record(t, std::move(c->word), 0, "closure membership at cap " + std::to_string(basis_->cap()), true,
                      true);
    }

private:
    std::size_t n_;
    unsigned d_;
    std::vector<Generator> gens_;
    ScriptOptions options_;
    WordEvaluator eval_;
    std::map<MonomialFieldIndex, Known> known_;
    std::optional<ClosureBasis> basis_;
};

void note(StepReport& r, const MonomialFieldIndex& t, const Known& k) {
    r.targets.push_back({t, k.fallback ? Outcome::fallback : Outcome::scripted,
                         k.origin + "; scalar " + to_string(k.scalar)});
}

ExponentVector without(ExponentVector e, std::size_t i, unsigned by) {
    e[i] -= by;
    return e;
}

// Final pass shared by both scripts: every target gets a certificate that is
// re-verified against fresh bindings with the reference bracket.
template <class Derive>
ScriptResult finish(Builder& b, std::vector<Generator> gens, std::vector<StepReport> steps, unsigned d, bool shear_only,
                    Derive derive) {
    ScriptResult result;
    StepReport& last = steps.back();
    WordEvaluator check(generator_bindings(gens, b.n()), reference_bracket);
    for (const auto& t : monomial_indices(b.n(), d, shear_only)) {
        try {
            const Known& k = derive(t);
            CertifiedMembership cert{t, k.word, k.scalar};
            if (!verify_certificate(cert, check)) throw ScriptFailure("certificate failed re-verification");
            std::string origin = k.step > 0 && k.step < last.step ? "from step " + std::to_string(k.step) : k.origin;
            if (k.uses_fallback && !k.fallback) origin += "; uses a closure-membership subword";
            last.targets.push_back({t, k.fallback ? Outcome::fallback : Outcome::scripted,
                                    origin + "; scalar " + to_string(k.scalar)});
            result.certificates.push_back(std::move(cert));
        } catch (const ScriptFailure& e) {
            last.targets.push_back({t, Outcome::failed, e.what()});
            result.failed.push_back(t);
        }
    }
    result.steps = std::move(steps);
    return result;
}

}  // namespace

ScriptResult theorem1_script(std::size_t n, unsigned d, const ScriptOptions& options) {
    if (n < 2) throw std::invalid_argument("dimension must be at least 2");
    const std::vector<Generator> gens{Generator::U, Generator::V, Generator::W};
    Builder b(n, d, gens, options);
    std::vector<StepReport> steps{{1, 1, {}, {}, {}}, {1, 2, {}, {}, {}}, {1, 3, {}, {}, {}}, {1, 4, {}, {}, {}}};
    auto& s1 = steps[0];
    auto& s2 = steps[1];
    auto& s3 = steps[2];
    const LieWord U = b.gen(Generator::U), V = b.gen(Generator::V), W = b.gen(Generator::W);

    b.record(b.index({}, n), U, 1, "generator U");

    {
        auto t = b.index({{n, 1}}, n - 1);
        const Known& a = b.record(t, bracket(U, bracket(U, V)), 1, "[U, [U, V]]");
        note(s1, t, a);
        auto p = b.index({}, n - 1);
        note(s1, p, b.record(p, bracket(U, a.word), 1, "[U, [U, [U, V]]]"));
    }

    for (std::size_t k = n - 1; k >= 2; --k) {
        ExponentVector e(n);
        for (std::size_t i = k; i <= n; ++i) e[i - 1] = 1;
        MonomialFieldIndex t{e, Coordinate{k - 1}};
        const Known& pk = b.partial(k);
        note(s2, t, b.record(t, bracket(pk.word, bracket(pk.word, V)), 2, "[d/dz" + std::to_string(k) + ", [d/dz" +
                                                                           std::to_string(k) + ", V]]"));
        auto zn = b.index({{n, 1}}, k - 1);
        note(s2, zn, *b.lowered(zn, 2));
        auto p = b.index({}, k - 1);
        note(s2, p, *b.lowered(p, 2));
    }
    if (n > 2)
        s2.discrepancies.push_back("the displayed operator [d/dz(k-1), .] applied twice to V does not give "
                                   "zn...zk d/dz(k-1); [d/dzk, .] applied twice does (scalar 6)");

    for (std::size_t k = 1; k < n; ++k) {
        const Known& z = *b.lowered(b.index({{n, 1}}, k), 3);
        const Known& pk = b.partial(k);
        ExponentVector m(n);
        for (std::size_t i = 1; i < n; ++i) m[i - 1] = 2;
        MonomialFieldIndex mk{m, Coordinate{k}};
        const Known& mf = b.record(
            mk, sum_of({scaled(pk.scalar, bracket(U, bracket(W, z.word))), scaled(2 * z.scalar, bracket(pk.word, W))}),
            3, "[d/dzn, [W, zn d/dzk]] + 2 [d/dzk, W]", z.uses_fallback || pk.uses_fallback);
        note(s3, mk, mf);
        ExponentVector g(n);
        for (std::size_t i = 1; i < n; ++i) g[i - 1] = 1;
        g[k - 1] = 2;
        const Known& gf = *b.lowered({g, Coordinate{k}}, 3);
        ExponentVector all(n);
        for (std::size_t i = 1; i <= n; ++i) all[i - 1] = 1;
        MonomialFieldIndex q{all, Coordinate{k}};
        note(s3, q, b.record(q, bracket(z.word, gf.word), 3, "[zn d/dzk, z1...zk^2...z(n-1) d/dzk]"));
    }
    s3.discrepancies.push_back("[d/dzn, [W, zn d/dzk] + [d/dzk, W]] as displayed is not z1^2...z(n-1)^2 d/dzk; "
                               "[d/dzn, [W, zn d/dzk]] + 2 [d/dzk, W] is");
    {
        ExponentVector wexp(n);
        for (std::size_t i = 1; i < n; ++i) wexp[i - 1] = 2;
        wexp[n - 1] = 1;
        b.record({wexp, Coordinate{n}}, W, 3, "generator W");
        const Known& z1 = *b.find(b.index({{n, 1}}, 1));
        const Known& y = *b.lowered(b.index({{1, 1}, {n, 1}}, n), 3);
        const Known& x = *b.lowered(b.index({{1, 1}, {n, 1}}, 1), 3);
        auto t = b.index({{n, 2}}, n);
        note(s3, t, b.record(t, sum_of({scaled(x.scalar, bracket(z1.word, y.word)), scaled(z1.scalar * y.scalar, x.word)}),
                             3, "[zn d/dz1, z1 zn d/dzn] + z1 zn d/dz1"));
    }

    std::function<const Known&(const MonomialFieldIndex&)> get = [&](const MonomialFieldIndex& t) -> const Known& {
        if (auto* k = b.lowered(t, 4)) return *k;
        const std::size_t k = t.direction.offset();
        const auto& a = t.exponent;
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < n; ++i)
            if (i != k && a[i] > 0) others.push_back(i);
        if (others.empty()) {
            const unsigned q = a[k];
            if (q == 3) return b.fallback(t);
            if (q < 4) throw std::logic_error("low power not reachable by partials: " + to_string(t));
            const Known& sq = get({ExponentVector::unit(n, t.direction, 2), t.direction});
            const Known& lo = get({ExponentVector::unit(n, t.direction, q - 1), t.direction});
            return b.record(t, bracket(sq.word, lo.word), 4, "[zk^2 d/dzk, zk^" + std::to_string(q - 1) + " d/dzk]",
                            sq.uses_fallback || lo.uses_fallback);
        }
        if (others.size() == 1 && a[k] == 0) {
            const std::size_t l = others[0];
            const Coordinate cl{l + 1};
            const Known& pl = get({ExponentVector::unit(n, cl, a[l]), cl});
            const Known& lin = get({ExponentVector::unit(n, cl, 1), t.direction});
            return b.record(t, bracket(pl.word, lin.word), 4, "[zl^p d/dzl, zl d/dzk]",
                            pl.uses_fallback || lin.uses_fallback);
        }
        const std::size_t l = others.back();
        ExponentVector rest = without(a, l, a[l]);
        rest[k] += 1;
        const Known& lp = get({ExponentVector::unit(n, Coordinate{l + 1}, a[l]), t.direction});
        const Known& f = get({rest, t.direction});
        return b.record(t, bracket(lp.word, f.word), 4, "[zl^p d/dzk, f zk d/dzk]", lp.uses_fallback || f.uses_fallback);
    };
    if (d >= 3)
        steps[3].discrepancies.push_back("[zk^2 d/dzk, zk^p d/dzk] = (p-2) zk^(p+1) d/dzk, not (2+p); it vanishes at "
                                         "p = 2, so zk^3 d/dzk comes from closure membership");
    return finish(b, gens, std::move(steps), d, false, get);
}

ScriptResult theorem2_script(std::size_t n, unsigned d, const ScriptOptions& options) {
    if (n < 2) throw std::invalid_argument("dimension must be at least 2");
    const std::vector<Generator> gens{Generator::U, Generator::Vprime, Generator::Vdoubleprime};
    Builder b(n, d, gens, options);
    std::vector<StepReport> steps{{2, 1, {}, {}, {}}, {2, 2, {}, {}, {}}, {2, 3, {}, {}, {}}, {2, 4, {}, {}, {}}};
    const LieWord U = b.gen(Generator::U), Vp = b.gen(Generator::Vprime), Vpp = b.gen(Generator::Vdoubleprime);
    auto cube = [](const LieWord& p, LieWord w) { return bracket(p, bracket(p, bracket(p, std::move(w)))); };

    b.record(b.index({}, n), U, 1, "generator U");
    {
        auto t = b.index({{n, 2}}, n - 1);
        const Known& a = b.record(t, cube(U, Vp), 1, "[U, .]^3 V'");
        note(steps[0], t, a);
        auto p = b.index({}, n - 1);
        note(steps[0], p, b.record(p, bracket(U, bracket(U, a.word)), 1, "[U, .]^5 V'"));
    }
    for (std::size_t k = n - 1; k >= 2; --k) {
        ExponentVector e(n);
        for (std::size_t i = k; i <= n; ++i) e[i - 1] = 2;
        MonomialFieldIndex t{e, Coordinate{k - 1}};
        note(steps[1], t, b.record(t, cube(b.partial(k).word, Vp), 2, "[d/dz" + std::to_string(k) + ", .]^3 V'"));
        auto p = b.index({}, k - 1);
        note(steps[1], p, *b.lowered(p, 2));
    }
    if (n > 2)
        steps[1].discrepancies.push_back("the displayed operator [d/dz(k-1), .] applied three times to V' does not "
                                         "give zn^2...zk^2 d/dz(k-1); [d/dzk, .] applied three times does (scalar 60)");
    for (std::size_t k = 2; k <= n; ++k) {
        ExponentVector e(n);
        for (std::size_t i = 1; i < k; ++i) e[i - 1] = 2;
        MonomialFieldIndex t{e, Coordinate{k}};
        note(steps[2], t,
             b.record(t, cube(b.partial(k - 1).word, Vpp), 3, "[d/dz" + std::to_string(k - 1) + ", .]^3 V''"));
    }

    steps[3].identities.push_back(audit_shear_raising_identity(n, 0, d, d));

    std::function<const Known&(const MonomialFieldIndex&)> get = [&](const MonomialFieldIndex& t) -> const Known& {
        if (auto* k = b.lowered(t, 4)) return *k;
        const std::size_t l = t.direction.offset();
        std::size_t k = 0;
        while (k < n && t.exponent[k] == 0) ++k;
        if (k == n || k == l) throw std::logic_error("not a reachable shear target: " + to_string(t));
        const Coordinate ck{k + 1};
        const Known& inner = get({without(t.exponent, k, 1), t.direction});
        const Known* a = b.lowered({ExponentVector::unit(n, ck, 2), t.direction}, 4);
        const Known* c = b.lowered({ExponentVector::unit(n, t.direction, 2), ck}, 4);
        if (!a || !c) throw std::logic_error("quadratic shear fields missing for " + to_string(t));
        const Known& pl = b.partial(l + 1);
        return b.record(t, bracket(pl.word, bracket(a->word, bracket(c->word, inner.word))), 4,
                        "[d/dzl, [zk^2 d/dzl, [zl^2 d/dzk, .]]]", inner.uses_fallback);
    };
    ScriptResult result = finish(b, gens, std::move(steps), d, true, get);

    IdentityCheck div{"every certified field is divergence-free", true, IdentityVerdict::exact, {}, {}, "0", "0", {}, 0, 0};
    WordEvaluator ev(generator_bindings(gens, n));
    for (const auto& c : result.certificates) {
        ++div.instances;
        const VectorField& value = ev(c.word);
        if (!divergence(value).is_zero()) {
            if (div.mismatches++ == 0) {
                div.verdict = IdentityVerdict::structural_mismatch;
                div.computed = to_string(divergence(value));
            }
        }
    }
    result.steps.back().identities.push_back(std::move(div));
    return result;
}

std::string to_string(Outcome outcome) {
    switch (outcome) {
    case Outcome::scripted: return "scripted";
    case Outcome::fallback: return "fallback";
    case Outcome::failed: return "failed";
    }
    return "?";
}

std::string to_string(IdentityVerdict verdict) {
    switch (verdict) {
    case IdentityVerdict::exact: return "exact";
    case IdentityVerdict::scalar_mismatch: return "scalar-mismatch";
    case IdentityVerdict::structural_mismatch: return "structural-mismatch";
    }
    return "?";
}

void write_step_reports(std::ostream& out, std::span<const StepReport> reports) {
    for (const auto& r : reports) {
        out << "theorem " << r.theorem << " step " << r.step << "\n";
        for (const auto& t : r.targets)
            out << "  target " << to_string(t.target) << " : " << to_string(t.outcome) << " (" << t.note << ")\n";
        for (const auto& c : r.identities) {
            out << "  identity " << (c.displayed ? "[displayed] " : "[variant] ") << c.label << " : "
                << to_string(c.verdict) << " (" << c.instances - c.mismatches << "/" << c.instances << " instances";
            if (c.displayed_scalar) out << "; displayed scalar " << to_string(*c.displayed_scalar);
            if (c.computed_scalar) out << "; computed scalar " << to_string(*c.computed_scalar);
            out << ")\n";
            if (c.verdict != IdentityVerdict::exact)
                out << "    expected " << c.expected << "\n    computed " << c.computed << "\n";
            if (!c.note.empty()) out << "    note: " << c.note << "\n";
        }
        for (const auto& d : r.discrepancies) out << "  discrepancy: " << d << "\n";
    }
}

}  // namespace vfalg
