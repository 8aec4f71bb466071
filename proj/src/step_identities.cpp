#include "vfalg/proof_scripts.hpp"

namespace vfalg {

namespace {

VectorField mono(std::size_t n, std::initializer_list<std::pair<std::size_t, unsigned>> powers, std::size_t k) {
    ExponentVector e(n);
    for (auto [i, p] : powers) e[i - 1] += p;
    return monomial_field({e, Coordinate{k}});
}

IdentityCheck family(std::string label, bool displayed) {
    IdentityCheck c;
    c.label = std::move(label);
    c.displayed = displayed;
    c.instances = 0;
    return c;
}

/// Adds one instance lhs =? ds * z^alpha d/dz_k; no ds means "some nonzero multiple".
void add(IdentityCheck& fam, const VectorField& lhs, const MonomialFieldIndex& rhs, std::optional<Rational> ds) {
    const VectorField target = monomial_field(rhs);
    auto s = proportionality_scalar(lhs, target);
    IdentityVerdict v = !s ? IdentityVerdict::structural_mismatch
                        : (ds && *s != *ds) ? IdentityVerdict::scalar_mismatch
                                            : IdentityVerdict::exact;
    const bool first = fam.instances++ == 0;
    const bool first_mismatch = v != IdentityVerdict::exact && fam.mismatches++ == 0;
    if (first || first_mismatch) {
        fam.verdict = v;
        fam.displayed_scalar = ds;
        fam.computed_scalar = s;
        fam.expected = to_string(ds ? *ds * target : target);
        fam.computed = to_string(lhs);
    }
}

IdentityCheck single(std::string label, bool displayed, const VectorField& lhs, const MonomialFieldIndex& rhs,
                     std::optional<Rational> ds) {
    auto c = family(std::move(label), displayed);
    add(c, lhs, rhs, ds);
    return c;
}

MonomialFieldIndex idx_of(const VectorField& monomial) {
    for (std::size_t k = 0; k < monomial.dimension(); ++k) {
        const auto& c = monomial.components()[k];
        if (!c.is_zero()) return {c.leading_term().exponent, Coordinate{k + 1}};
    }
    throw std::logic_error("zero field has no monomial index");
}

/// Exponent vectors of degree <= max_degree supported on the allowed variables.
std::vector<ExponentVector> monomials_in(std::size_t n, const std::vector<bool>& allowed, unsigned max_degree) {
    std::vector<ExponentVector> out{ExponentVector(n)};
    for (std::size_t i = 0; i < n; ++i) {
        if (!allowed[i]) continue;
        std::vector<ExponentVector> next;
        for (const auto& e : out) {
            for (unsigned p = 0; e.total_degree() + p <= max_degree; ++p) {
                ExponentVector f = e;
                f[i] = p;
                next.push_back(f);
            }
        }
        out = std::move(next);
    }
    return out;
}

VectorField iterate(const VectorField& op, unsigned times, VectorField x) {
    for (unsigned i = 0; i < times; ++i) x = lie_bracket(op, x);
    return x;
}

void collect_discrepancies(StepReport& r) {
    for (const auto& c : r.identities) {
        if (!c.displayed || c.verdict == IdentityVerdict::exact) continue;
        std::string line = c.label + ": " + to_string(c.verdict) + "; expected " + c.expected + ", computed " + c.computed;
        r.discrepancies.push_back(std::move(line));
    }
}

}  // namespace

IdentityCheck audit_shear_raising_identity(std::size_t n, unsigned min_p, unsigned max_p, unsigned max_f_degree) {
    auto c = family("[d/dzl, [zk^2 d/dzl, [zl^2 d/dzk, zk^p f d/dzl]]] = 2(p+2) zk^(p+1) f d/dzl, p = " +
                        std::to_string(min_p) + ".." + std::to_string(max_p),
                    min_p > 0);
    for (std::size_t l = 1; l <= n; ++l) {
        const VectorField pl = partial_field(n, Coordinate{l});
        for (std::size_t k = 1; k <= n; ++k) {
            if (k == l) continue;
            const VectorField a = mono(n, {{k, 2}}, l);
            const VectorField b = mono(n, {{l, 2}}, k);
            std::vector<bool> allowed(n, true);
            allowed[k - 1] = allowed[l - 1] = false;
            for (const auto& f : monomials_in(n, allowed, max_f_degree)) {
                for (unsigned p = min_p; p <= max_p; ++p) {
                    ExponentVector e = f;
                    e[k - 1] = p;
                    VectorField lhs = lie_bracket(pl, lie_bracket(a, lie_bracket(b, monomial_field({e, Coordinate{l}}))));
                    e[k - 1] = p + 1;
                    add(c, lhs, {e, Coordinate{l}}, Rational(2 * (p + 2)));
                }
            }
        }
    }
    return c;
}

std::vector<StepReport> check_step_identities(std::size_t n, const IdentityOptions& options) {
    if (n < 2) throw std::invalid_argument("dimension must be at least 2");
    std::vector<StepReport> reports;
    const VectorField U = make_generator(Generator::U, n);
    auto P = [n](std::size_t k) { return partial_field(n, Coordinate{k}); };
    ExponentVector m(n);
    for (std::size_t i = 1; i < n; ++i) m[i - 1] = 2;

    {
        const VectorField V = make_generator(Generator::V, n);
        const VectorField W = make_generator(Generator::W, n);

        StepReport s1{1, 1, {}, {}, {}};
        VectorField a = iterate(U, 2, V);
        s1.identities.push_back(single("[U, [U, V]] ~ zn d/dz(n-1)", true, a, idx_of(mono(n, {{n, 1}}, n - 1)), {}));
        s1.identities.push_back(
            single("[U, [U, [U, V]]] ~ d/dz(n-1)", true, lie_bracket(U, a), idx_of(mono(n, {}, n - 1)), {}));
        reports.push_back(std::move(s1));

        StepReport s2{1, 2, {}, {}, {}};
        if (n > 2) {
            auto shown = family("[d/dz(k-1), [d/dz(k-1), V]] ~ zn...zk d/dz(k-1), k = n-1..2", true);
            auto used = family("[d/dzk, [d/dzk, V]] ~ zn...zk d/dz(k-1), k = n-1..2", false);
            for (std::size_t k = n - 1; k >= 2; --k) {
                ExponentVector e(n);
                for (std::size_t i = k; i <= n; ++i) e[i - 1] = 1;
                MonomialFieldIndex t{e, Coordinate{k - 1}};
                add(shown, iterate(P(k - 1), 2, V), t, {});
                add(used, iterate(P(k), 2, V), t, {});
            }
            s2.identities.push_back(std::move(shown));
            s2.identities.push_back(std::move(used));
        }
        reports.push_back(std::move(s2));

        StepReport s3{1, 3, {}, {}, {}};
        auto shown = family("[d/dzn, [W, zn d/dzk] + [d/dzk, W]] = z1^2...z(n-1)^2 d/dzk", true);
        auto fixed = family("[d/dzn, [W, zn d/dzk]] + 2 [d/dzk, W] = z1^2...z(n-1)^2 d/dzk", false);
        auto second = family("[zn d/dzk, z1...zk^2...z(n-1) d/dzk] = 2 z1...zn d/dzk", true);
        auto third = family("[zn d/dzk, zk zn d/dzn] + zk zn d/dzk = zn^2 d/dzn", true);
        for (std::size_t k = 1; k < n; ++k) {
            const VectorField znk = mono(n, {{n, 1}}, k);
            const MonomialFieldIndex mk{m, Coordinate{k}};
            add(shown, lie_bracket(U, lie_bracket(W, znk) + lie_bracket(P(k), W)), mk, Rational(1));
            add(fixed, lie_bracket(U, lie_bracket(W, znk)) + Rational(2) * lie_bracket(P(k), W), mk, Rational(1));
            ExponentVector g(n), all(n);
            for (std::size_t i = 1; i < n; ++i) g[i - 1] = 1;
            g[k - 1] = 2;
            for (std::size_t i = 1; i <= n; ++i) all[i - 1] = 1;
            add(second, lie_bracket(znk, monomial_field({g, Coordinate{k}})), {all, Coordinate{k}}, Rational(2));
            add(third, lie_bracket(znk, mono(n, {{k, 1}, {n, 1}}, n)) + mono(n, {{k, 1}, {n, 1}}, k),
                idx_of(mono(n, {{n, 2}}, n)), Rational(1));
        }
        s3.identities.push_back(std::move(shown));
        s3.identities.push_back(std::move(fixed));
        s3.identities.push_back(std::move(second));
        s3.identities.push_back(std::move(third));
        reports.push_back(std::move(s3));

        StepReport s4{1, 4, {}, {}, {}};
        for (unsigned p = 1; p <= options.max_p; ++p) {
            auto c = family("[zk^2 d/dzk, zk^p d/dzk] = (2+p) zk^(p+1) d/dzk, p = " + std::to_string(p), true);
            std::optional<Rational> swapped;
            for (std::size_t k = 1; k <= n; ++k) {
                const VectorField sq = mono(n, {{k, 2}}, k), zp = mono(n, {{k, p}}, k);
                add(c, lie_bracket(sq, zp), idx_of(mono(n, {{k, p + 1}}, k)), Rational(2 + p));
                if (k == 1) swapped = proportionality_scalar(lie_bracket(zp, sq), mono(n, {{k, p + 1}}, k));
            }
            c.note = "arguments swapped: " + (swapped ? "scalar " + to_string(*swapped) : std::string("zero"));
            s4.identities.push_back(std::move(c));
        }
        auto lift = family("[zl^p d/dzl, zl d/dzk] = zl^p d/dzk", true);
        auto spread = family("[zl^p d/dzk, f zk d/dzk] = (pk+1) zl^p f d/dzk", true);
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t l = 1; l <= n; ++l) {
                if (k == l) continue;
                std::vector<bool> allowed(n, true);
                allowed[l - 1] = false;
                const auto fs = monomials_in(n, allowed, options.max_f_degree);
                for (unsigned p = 1; p <= options.max_p; ++p) {
                    add(lift, lie_bracket(mono(n, {{l, p}}, l), mono(n, {{l, 1}}, k)), idx_of(mono(n, {{l, p}}, k)),
                        Rational(1));
                    for (const auto& f : fs) {
                        ExponentVector fz = f;
                        fz[k - 1] += 1;
                        ExponentVector target = f;
                        target[l - 1] = p;
                        add(spread, lie_bracket(mono(n, {{l, p}}, k), monomial_field({fz, Coordinate{k}})),
                            {target, Coordinate{k}}, Rational(f[k - 1] + 1));
                    }
                }
            }
        }
        s4.identities.push_back(std::move(lift));
        s4.identities.push_back(std::move(spread));
        reports.push_back(std::move(s4));
    }

    {
        const VectorField Vp = make_generator(Generator::Vprime, n);
        const VectorField Vpp = make_generator(Generator::Vdoubleprime, n);

        StepReport s1{2, 1, {}, {}, {}};
        VectorField a = iterate(U, 3, Vp);
        s1.identities.push_back(single("[U, .]^3 V' ~ zn^2 d/dz(n-1)", true, a, idx_of(mono(n, {{n, 2}}, n - 1)), {}));
        s1.identities.push_back(
            single("[U, .]^5 V' ~ d/dz(n-1)", true, iterate(U, 2, a), idx_of(mono(n, {}, n - 1)), {}));
        reports.push_back(std::move(s1));

        StepReport s2{2, 2, {}, {}, {}};
        if (n > 2) {
            auto shown = family("[d/dz(k-1), .]^3 V' ~ zn^2...zk^2 d/dz(k-1), k = n-1..2", true);
            auto used = family("[d/dzk, .]^3 V' ~ zn^2...zk^2 d/dz(k-1), k = n-1..2", false);
            for (std::size_t k = n - 1; k >= 2; --k) {
                ExponentVector e(n);
                for (std::size_t i = k; i <= n; ++i) e[i - 1] = 2;
                MonomialFieldIndex t{e, Coordinate{k - 1}};
                add(shown, iterate(P(k - 1), 3, Vp), t, {});
                add(used, iterate(P(k), 3, Vp), t, {});
            }
            s2.identities.push_back(std::move(shown));
            s2.identities.push_back(std::move(used));
        }
        reports.push_back(std::move(s2));

        StepReport s3{2, 3, {}, {}, {}};
        auto c = family("[d/dz(k-1), .]^3 V'' ~ z1^2...z(k-1)^2 d/dzk, k = 2..n", true);
        for (std::size_t k = 2; k <= n; ++k) {
            ExponentVector e(n);
            for (std::size_t i = 1; i < k; ++i) e[i - 1] = 2;
            add(c, iterate(P(k - 1), 3, Vpp), {e, Coordinate{k}}, {});
        }
        s3.identities.push_back(std::move(c));
        reports.push_back(std::move(s3));

        StepReport s4{2, 4, {}, {}, {}};
        s4.identities.push_back(audit_shear_raising_identity(n, 1, options.max_p, options.max_f_degree));
        s4.identities.push_back(audit_shear_raising_identity(n, 0, 0, options.max_f_degree));
        reports.push_back(std::move(s4));
    }

    for (auto& r : reports) collect_discrepancies(r);
    return reports;
}

}  // namespace vfalg
