// One line per acceptance criterion; exit status 1 if any criterion fails.

#include "support/random_fields.hpp"
#include "vfalg/cli.hpp"
#include "vfalg/closure.hpp"
#include "vfalg/flows.hpp"
#include "vfalg/proof_scripts.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace vfalg;

namespace {

// Exact arithmetic everywhere: equality of rationals, no tolerance.
constexpr double kMaxSecondsPerPair = 120.0;
constexpr int kPropertyCases = 200;
constexpr std::uint64_t kSeed = 0x5eed2024;
constexpr unsigned kAuditMaxP = 5;
constexpr unsigned kAuditMaxFDegree = 3;

const std::vector<Generator> kUVW{Generator::U, Generator::V, Generator::W};
const std::vector<Generator> kShear{Generator::U, Generator::Vprime, Generator::Vdoubleprime};

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << detail << std::endl;
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CoverageRun {
    bool complete = false;
    bool verified = false;
    bool divergence_free = true;
    bool negative_control = true;
    double seconds = 0;
    std::size_t covered = 0, total = 0, basis = 0;
};

CoverageRun coverage_run(const std::vector<Generator>& set, std::size_t n, unsigned d, unsigned cap, bool shear) {
    CoverageRun out;
    const auto t0 = std::chrono::steady_clock::now();
    ClosureOptions o;
    o.cap = cap;
    auto result = closure(named_generators(set, n), o);
    auto cov = monomial_coverage(result.basis, d, shear);
    // independent check: fresh bindings, the reference bracket, and a bundle round trip
    std::stringstream bundle;
    std::vector<std::string> names;
    for (auto g : set) names.emplace_back(generator_name(g));
    write_bundle(bundle, {n, names, cov.certificates});
    auto v = verify_bundle(bundle);
    out.seconds = seconds_since(t0);
    out.complete = cov.complete();
    out.verified = v.ok() && v.passed == cov.certificates.size();
    out.covered = cov.covered.size();
    out.total = cov.covered.size() + cov.missing.size();
    out.basis = result.basis.size();
    if (shear) {
        for (const auto* e : result.basis.entries())
            out.divergence_free = out.divergence_free && divergence(result.basis.field(*e)).is_zero();
        for (std::size_t k = 1; k <= n; ++k)
            for (unsigned m = 1; m <= d; ++m)
                if (result.basis.certify({ExponentVector::unit(n, Coordinate{k}, m), Coordinate{k}}))
                    out.negative_control = false;
    }
    return out;
}

void criterion1() {
    struct Case { std::size_t n; unsigned d, extra; };
    const Case cases[] = {{2, 2, 3}, {2, 3, 3}, {2, 4, 3}, {3, 2, 5}, {3, 3, 5}};
    bool ok = true;
    std::ostringstream detail;
    for (auto c : cases) {
        auto r = coverage_run(kUVW, c.n, c.d, c.d + c.extra, false);
        const bool pass = r.complete && r.verified && r.seconds <= kMaxSecondsPerPair;
        ok = ok && pass;
        detail << " n=" << c.n << ",d=" << c.d << ",D=" << c.d + c.extra << ":" << r.covered << "/" << r.total
               << (r.verified ? " verified" : " UNVERIFIED") << " " << std::fixed << std::setprecision(2) << r.seconds
               << "s;";
    }
    report(1, ok, "U,V,W closure covers all monomial fields" + detail.str());
}

void criterion2() {
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t n : {2u, 3u}) {
        for (unsigned d : {2u, 3u, 4u}) {
            const unsigned cap = default_cap(named_generators(kShear, n), d);
            auto r = coverage_run(kShear, n, d, cap, true);
            const bool pass = r.complete && r.verified && r.divergence_free && r.negative_control &&
                              r.seconds <= kMaxSecondsPerPair;
            ok = ok && pass;
            detail << " n=" << n << ",d=" << d << ",D=" << cap << ":" << r.covered << "/" << r.total
                   << (r.divergence_free ? " div-free" : " DIVERGENT") << (r.negative_control ? "" : " NEGATIVE-CONTROL-HIT")
                   << " " << std::fixed << std::setprecision(2) << r.seconds << "s;";
        }
    }
    report(2, ok, "U,V',V'' closure covers all shear fields, basis divergence-free, zk^m d/dzk never covered" +
                      detail.str());
}

const IdentityCheck* find_check(const std::vector<StepReport>& rs, int theorem, int step, std::string_view prefix) {
    for (const auto& r : rs)
        if (r.theorem == theorem && r.step == step)
            for (const auto& c : r.identities)
                if (c.label.starts_with(prefix)) return &c;
    return nullptr;
}

void criterion3() {
    bool ok = true;
    std::ostringstream detail;
    std::size_t shear_instances = 0;
    for (std::size_t n = 2; n <= 4; ++n) {
        auto rs = check_step_identities(n, {kAuditMaxP, kAuditMaxFDegree});
        auto exact = [&](int t, int s, std::string_view prefix) {
            const auto* c = find_check(rs, t, s, prefix);
            const bool pass = c && c->verdict == IdentityVerdict::exact && c->mismatches == 0 && c->instances > 0;
            if (!pass) detail << " n=" << n << " not exact: " << prefix << ";";
            return pass;
        };
        ok = exact(1, 3, "[d/dzn, [W, zn d/dzk]] + 2 [d/dzk, W] = z1^2...z(n-1)^2 d/dzk") && ok;
        ok = exact(1, 3, "[zn d/dzk, z1...zk^2...z(n-1) d/dzk] = 2 z1...zn d/dzk") && ok;
        ok = exact(1, 3, "[zn d/dzk, zk zn d/dzn] + zk zn d/dzk = zn^2 d/dzn") && ok;
        ok = exact(2, 4, "[d/dzl, [zk^2 d/dzl, [zl^2 d/dzk, zk^p f d/dzl]]] = 2(p+2) zk^(p+1) f d/dzl, p = 1..5") && ok;
        if (const auto* c = find_check(rs, 2, 4, "[d/dzl, [zk^2 d/dzl")) shear_instances += c->instances;

        // the printed first display of step 3 is reported, not silently fixed
        const auto* printed = find_check(rs, 1, 3, "[d/dzn, [W, zn d/dzk] + [d/dzk, W]]");
        if (!printed || printed->verdict == IdentityVerdict::exact) {
            ok = false;
            detail << " n=" << n << " printed step-3 display not flagged;";
        }
        for (unsigned p = 1; p <= kAuditMaxP; ++p) {
            const auto* c = find_check(rs, 1, 4, "[zk^2 d/dzk, zk^p d/dzk] = (2+p) zk^(p+1) d/dzk, p = " + std::to_string(p));
            bool detected = c && c->displayed_scalar == Rational(2 + p);
            if (detected && p == 2) detected = c->verdict == IdentityVerdict::structural_mismatch;
            if (detected && p != 2)
                detected = c->verdict == IdentityVerdict::scalar_mismatch && c->computed_scalar == Rational(int(p) - 2);
            if (!detected) {
                ok = false;
                detail << " n=" << n << " (2+p) discrepancy at p=" << p << " not reported;";
            }
        }
    }
    report(3, ok,
           "step-3 displays (corrected first display) and 2(p+2) for p=1..5 exact over " +
               std::to_string(shear_instances) + " shear instances, n=2..4; (2+p) display reported as (p-2)" +
               detail.str());
}

// Supplementary evidence for flows too large to expand exactly. Never counts
// towards a PASS.
namespace modp {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;
constexpr int kPoints = 20;

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}
std::uint64_t add(std::uint64_t a, std::uint64_t b) { return (a + b) % kPrime; }
std::uint64_t pow(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mul(a, a)) {
        if (e & 1) r = mul(r, a);
    }
    return r;
}
std::uint64_t reduce(const Rational& q) {
    mpz_class num = q.get_num() % mpz_class(static_cast<unsigned long>(kPrime));
    if (num < 0) num += static_cast<unsigned long>(kPrime);
    const std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
    return mul(num.get_ui(), pow(den, kPrime - 2));
}

struct Reduced {
    std::vector<std::pair<ExponentVector, std::uint64_t>> terms;
    explicit Reduced(const Polynomial& p) {
        for (const auto& t : p.terms()) terms.emplace_back(t.exponent, reduce(t.coeff));
    }
    std::uint64_t operator()(const std::vector<std::uint64_t>& point) const {
        std::vector<std::vector<std::uint64_t>> powers(point.size(), std::vector<std::uint64_t>{1});
        std::uint64_t sum = 0;
        for (const auto& [e, c] : terms) {
            std::uint64_t v = c;
            for (std::size_t i = 0; i < point.size(); ++i) {
                auto& table = powers[i];
                while (table.size() <= e[i]) table.push_back(mul(table.back(), point[i]));
                v = mul(v, table[e[i]]);
            }
            sum = add(sum, v);
        }
        return sum;
    }
};

// ODE and group law at seeded random points of F_p^(n+2).
bool spot_checks(const FlowMap& f, const VectorField& x, std::mt19937_64& rng) {
    const std::size_t n = f.dimension();
    std::vector<Reduced> phi, velocity, field;
    for (const auto& c : f.components()) {
        phi.emplace_back(c.poly);
        velocity.emplace_back(partial_derivative(c.poly, Coordinate{n + 1}));
    }
    for (const auto& c : x.components()) field.emplace_back(c);
    std::uniform_int_distribution<std::uint64_t> pick(0, kPrime - 1);
    for (int k = 0; k < kPoints; ++k) {
        std::vector<std::uint64_t> z(n + 1);
        for (auto& v : z) v = pick(rng);
        const std::uint64_t s = pick(rng), t = z[n];
        std::vector<std::uint64_t> w, w_at;
        for (const auto& c : phi) w.push_back(c(z));
        for (std::size_t i = 0; i < n; ++i) {
            if (velocity[i](z) != field[i](w)) return false;
        }
        w_at = w;
        w_at.push_back(s);
        auto z_sum = z;
        z_sum[n] = add(s, t);
        for (std::size_t i = 0; i < n; ++i) {
            if (phi[i](w_at) != phi[i](z_sum)) return false;
        }
    }
    return true;
}

}  // namespace modp

// d/dt phi = (D_z phi) X, exact and cheap: half of the differential form of
// the group law.
bool backward_identity(const FlowMap& f, const VectorField& x) {
    const std::size_t n = f.dimension();
    std::vector<Polynomial> lifted;
    for (const auto& c : x.components()) lifted.push_back(extend_dimension(c, n + 1));
    lifted.emplace_back(n + 1);
    const VectorField lx(std::move(lifted));
    for (const auto& c : f.components()) {
        if (partial_derivative(c.poly, Coordinate{n + 1}) != apply_derivation(lx, c.poly)) return false;
    }
    return true;
}

void criterion4() {
    bool ok = true;
    std::ostringstream detail, blocked;
    std::mt19937_64 rng(kSeed);
    for (std::size_t n = 2; n <= 5; ++n) {
        for (auto g : {Generator::U, Generator::V, Generator::Vprime, Generator::Vdoubleprime}) {
            const auto x = make_generator(g, n);
            const auto rep = is_locally_nilpotent(x, kGeneratorFlowCap);
            bool finite = rep.is_lnd;
            for (const auto& i : rep.index) finite = finite && i.has_value();
            if (!finite) {
                detail << " " << generator_name(g) << " n=" << n << " not nilpotent within " << kGeneratorFlowCap << ";";
                ok = false;
                continue;
            }
            const auto f = lnd_flow(x, kGeneratorFlowCap);
            try {
                const bool pass = verify_flow_ode(f, x) && flow_group_law_check(f);
                if (!pass) detail << " " << generator_name(g) << " n=" << n << " failed;";
                ok = ok && pass;
            } catch (const ExpansionBudgetExceeded& e) {
                ok = false;
                std::size_t largest = 0;
                for (const auto& c : f.components()) largest = std::max(largest, c.poly.term_count());
                blocked << " " << generator_name(g) << " n=" << n << " (max index " << rep.max_index() << ", largest component "
                        << largest << " terms): exact check not completed, "
                        << e.what() << "; supplementary: backward identity "
                        << (backward_identity(f, x) ? "exact" : "FAILS") << ", ODE and group law at " << modp::kPoints
                        << " random points mod 2^61-1 " << (modp::spot_checks(f, x, rng) ? "hold" : "FAIL") << ";";
            }
        }
        const bool w = verify_flow_ode(w_flow(n), make_generator(Generator::W, n)) && flow_group_law_check(w_flow(n));
        if (!w) detail << " W flow n=" << n << " failed;";
        ok = ok && w;
    }
    const auto v2 = is_locally_nilpotent(make_generator(Generator::V, 2));
    const bool five = v2.index[0] == 5u;
    ok = ok && five;
    std::ostringstream idx;
    for (std::size_t n = 2; n <= 5; ++n) {
        idx << " V(n=" << n << ") max index "
            << is_locally_nilpotent(make_generator(Generator::V, n), kGeneratorFlowCap).max_index() << ";";
    }
    report(4, ok,
           "U,V,V',V'' locally nilpotent for n=2..5; flow ODE and group law exact incl. W flow" +
               std::string(blocked.str().empty() ? "" : " except:") + blocked.str() + " index of V on z1 at n=2 is " +
               (v2.index[0] ? std::to_string(*v2.index[0]) : std::string("none")) + ";" + idx.str() + detail.str());
}

void criterion5() {
    std::mt19937_64 rng(kSeed);
    int jacobi = 0, div = 0, oracle = 0, trip = 0, witness = 0;
    int bad = 0;
    for (int i = 0; i < kPropertyCases; ++i) {
        const std::size_t n = 2 + i % 3;
        auto x = testing::random_field(rng, n, 3, 3), y = testing::random_field(rng, n, 3, 3),
             z = testing::random_field(rng, n, 2, 3);
        const bool anti = lie_bracket(x, y) == -lie_bracket(y, x);
        const bool jac =
            (lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y))).is_zero();
        anti && jac ? ++jacobi : ++bad;
        const bool dv = divergence(lie_bracket(x, y)) == apply_derivation(x, divergence(y)) - apply_derivation(y, divergence(x));
        dv ? ++div : ++bad;
        auto p = testing::random_point(rng, n);
        auto expected = testing::bracket_by_jacobians(x, y, p);
        auto b = lie_bracket(x, y);
        bool agree = true;
        for (std::size_t k = 0; k < n; ++k) agree = agree && evaluate(b.components()[k], p) == expected[k];
        agree ? ++oracle : ++bad;
    }

    // round trips of certificate records with random words and scalars
    const char* names[] = {"U", "V", "W", "V'", "V''"};
    std::function<LieWord(int)> word = [&](int depth) -> LieWord {
        std::uniform_int_distribution<int> pick(0, 5), nm(0, 4);
        if (depth == 0) return LieWord::generator(names[nm(rng)]);
        switch (pick(rng)) {
        case 0: return LieWord::generator(names[nm(rng)]);
        case 1: {
            Rational c = testing::random_rational(rng);
            return LieWord::scale(c == 0 ? Rational(-7, 3) : c, word(depth - 1));
        }
        case 2: return LieWord::sum({word(depth - 1), word(depth - 1), word(depth - 1)});
        default: return bracket(word(depth - 1), word(depth - 1));
        }
    };
    for (int i = 0; i < kPropertyCases; ++i) {
        const std::size_t n = 2 + i % 3;
        ExponentVector e(n);
        for (std::size_t j = 0; j < n; ++j) e[j] = static_cast<unsigned>(rng() % 4);
        Rational s = testing::random_rational(rng);
        CertifiedMembership c{{e, Coordinate{1 + rng() % n}}, word(4), s == 0 ? Rational(1) : s};
        const std::string line = format_record(c);
        auto back = parse_record(line, n);
        const bool same = back.target == c.target && back.word == c.word && back.scalar == c.scalar &&
                          format_record(back) == line && parse_word(serialize_word(c.word)) == c.word;
        same ? ++trip : ++bad;
    }

    // every basis witness re-evaluates to its field, across several closures
    struct Run { const std::vector<Generator>* set; std::size_t n; unsigned cap; };
    const Run runs[] = {{&kUVW, 2, 6}, {&kUVW, 3, 7}, {&kShear, 2, 9}, {&kShear, 3, 9}};
    for (auto r : runs) {
        ClosureOptions o;
        o.cap = r.cap;
        auto res = closure(named_generators(*r.set, r.n), o);
        WordEvaluator fresh(generator_bindings(*r.set, r.n), reference_bracket);
        for (const auto* e : res.basis.entries()) fresh(res.basis.witness(*e)) == res.basis.field(*e) ? ++witness : ++bad;
        if (res.basis.check_invariants()) ++bad;
    }
    const bool ok = bad == 0 && jacobi >= kPropertyCases && div >= kPropertyCases && oracle >= kPropertyCases &&
                    trip >= kPropertyCases && witness >= kPropertyCases;
    report(5, ok,
           "antisymmetry+Jacobi " + std::to_string(jacobi) + ", divergence formula " + std::to_string(div) +
               ", Jacobian oracle " + std::to_string(oracle) + ", record round trip " + std::to_string(trip) +
               ", witness audit " + std::to_string(witness) + " cases, " + std::to_string(bad) + " failures (seed " +
               std::to_string(kSeed) + ")");
}

int cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    return run_cli(args, out, err);
}

void criterion6() {
    const auto dir = std::filesystem::temp_directory_path() / "vfalg_acceptance_e2e";
    std::filesystem::remove_all(dir);
    const int proved = cli({"prove", "--n", "2", "--set", "UVW", "--d", "3", "--out", dir.string()});
    const auto bundle = dir / "certificates.cert";
    const int verified = cli({"verify", bundle.string()});

    std::vector<std::string> lines;
    {
        std::ifstream in(bundle);
        for (std::string l; std::getline(in, l);) lines.push_back(l);
    }
    // three corruptions per record line: scalar, target exponent, word
    auto corruptions = [](const std::string& line) {
        std::vector<std::string> out;
        auto s = line.find("scalar: ");
        auto semi = line.find(" ;", s);
        out.push_back(line.substr(0, s + 8) + "(" + line.substr(s + 8, semi - s - 8) + ")+1" + line.substr(semi));
        std::string t = line;
        t[t.find("z^(") + 3] = t[t.find("z^(") + 3] == '0' ? '1' : '0';
        out.push_back(t);
        std::string w = line;
        auto pos = w.find("word: ") + 6;
        auto v = w.find('V', pos);
        if (v != std::string::npos) w[v] = 'W';
        else w.insert(pos, "2*");
        out.push_back(w);
        return out;
    };
    std::size_t tried = 0, caught = 0;
    const auto corrupt = dir / "corrupt.cert";
    for (std::size_t i = 1; i < lines.size(); ++i) {
        for (const auto& bad : corruptions(lines[i])) {
            std::ofstream out(corrupt);
            for (std::size_t j = 0; j < lines.size(); ++j) out << (j == i ? bad : lines[j]) << '\n';
            out.close();
            ++tried;
            if (cli({"verify", corrupt.string()}) == kExitFailure) ++caught;
        }
    }
    std::filesystem::remove_all(dir);
    const bool ok = proved == 0 && verified == 0 && lines.size() == 21 && tried > 0 && caught == tried;
    report(6, ok,
           "prove --n 2 --set UVW --d 3 exit " + std::to_string(proved) + ", verify exit " + std::to_string(verified) +
               ", " + std::to_string(lines.size() - 1) + " records; " + std::to_string(caught) + "/" +
               std::to_string(tried) + " single-line corruptions rejected with exit 1");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
