#include "vfalg/closure.hpp"

#include <doctest.h>

#include <sstream>

using namespace vfalg;

namespace {

ClosureResult run(std::vector<Generator> set, std::size_t n, unsigned cap, unsigned threads = 0, bool debug = false) {
    ClosureOptions o;
    o.cap = cap;
    o.threads = threads;
    o.debug_checks = debug;
    return closure(named_generators(set, n), o);
}

const std::vector<Generator> kUVW{Generator::U, Generator::V, Generator::W};
const std::vector<Generator> kShear{Generator::U, Generator::Vprime, Generator::Vdoubleprime};

bool member(const ClosureBasis& b, const VectorField& x) {
    return b.membership(x).verdict == ClosureBasis::Membership::Verdict::member;
}

}  // namespace

TEST_CASE("coordinate vectors") {
    MonomialColumns cols(2, 3);
    auto v = coordinate_vector(make_generator(Generator::V, 2), cols);
    REQUIRE(v.size() == 2);
    std::vector<MonomialFieldIndex> at;
    for (const auto& e : v) {
        CHECK(e.coeff == 1);
        at.push_back(cols.index(e.column));
    }
    CHECK(std::find(at.begin(), at.end(), MonomialFieldIndex{{0, 0}, Coordinate{2}}) != at.end());
    CHECK(std::find(at.begin(), at.end(), MonomialFieldIndex{{0, 3}, Coordinate{1}}) != at.end());
    CHECK(coordinate_vector(VectorField(2), cols).empty());
    auto uv = coordinate_vector(parse_field("(3*z2^2) d/dz1", 2), cols);
    REQUIRE(uv.size() == 1);
    CHECK(uv[0].coeff == 3);
    CHECK(cols.index(uv[0].column) == MonomialFieldIndex{{0, 2}, Coordinate{1}});
    CHECK_THROWS_AS(coordinate_vector(parse_field("(z1^4) d/dz1", 2), cols), DegreeCapExceeded);
    CHECK(field_from_coordinates(v, cols) == make_generator(Generator::V, 2));
    // higher monomials get smaller columns
    CHECK(cols.column({0, 3}, Coordinate{1}) < cols.column({0, 0}, Coordinate{1}));
}

TEST_CASE("abelian closure") {
    std::vector<NamedField> u{{"U", make_generator(Generator::U, 2)}};
    for (unsigned cap : {0u, 3u, 7u}) {
        ClosureOptions o;
        o.cap = cap;
        auto r = closure(u, o);
        CHECK(r.basis.size() == 1);
        CHECK(r.report.saturated);
        auto cov = monomial_coverage(r.basis, 0, false);
        CHECK(cov.covered == std::vector<MonomialFieldIndex>{{ExponentVector{0, 0}, Coordinate{2}}});
        CHECK(cov.missing == std::vector<MonomialFieldIndex>{{ExponentVector{0, 0}, Coordinate{1}}});
    }
}

TEST_CASE("first brackets of U and V") {
    auto r = run({Generator::U, Generator::V}, 2, 3);
    CHECK(r.report.saturated);
    for (const char* f : {"1 d/dz1", "(z2) d/dz1", "(z2^2) d/dz1", "(z2^3) d/dz1", "1 d/dz2"})
        CHECK(member(r.basis, parse_field(f, 2)));
    CHECK(!member(r.basis, parse_field("(z1) d/dz1", 2)));
    CHECK(r.basis.size() == 5);
}

TEST_CASE("cap below generator degree") {
    CHECK_THROWS_AS(run(kUVW, 2, 2), CapBelowGeneratorDegree);
}

TEST_CASE("membership") {
    auto r = run(kUVW, 2, 6);
    auto z2d1 = r.basis.certify({{0, 1}, Coordinate{1}});
    REQUIRE(z2d1);
    CHECK(verify_certificate(*z2d1, generator_bindings(kUVW, 2)));
    auto zero = r.basis.membership(VectorField(2));
    CHECK(zero.verdict == ClosureBasis::Membership::Verdict::zero_field);
    CHECK(!zero.word);
    CHECK_THROWS_AS(r.basis.membership(parse_field("(z1^7) d/dz1", 2)), DegreeCapExceeded);
    auto small = run(kUVW, 2, 3);
    CHECK_THROWS_AS(small.basis.membership(parse_field("(z1^7) d/dz1", 2)), DegreeCapExceeded);
}

TEST_CASE("coverage for the first generating set") {
    auto r = run(kUVW, 2, 6);
    auto cov = monomial_coverage(r.basis, 3, false);
    CHECK(cov.covered.size() == 20);
    CHECK(cov.complete());
    auto b = generator_bindings(kUVW, 2);
    for (const auto& c : cov.certificates) REQUIRE(verify_certificate(c, b));
    auto four = monomial_coverage(r.basis, 4, false);
    CHECK(four.covered.size() + four.missing.size() == 30);
    MESSAGE("degree 4 at cap 6: " << four.covered.size() << "/30");
    CHECK_THROWS_AS(monomial_coverage(r.basis, 7, false), DegreeCapExceeded);
}

TEST_CASE("shear coverage and divergence") {
    auto r = run(kShear, 2, 9);
    auto cov = monomial_coverage(r.basis, 4, true);
    CHECK(cov.complete());
    for (unsigned j = 0; j <= 4; ++j) {
        CHECK(std::find(cov.covered.begin(), cov.covered.end(), MonomialFieldIndex{{0, j}, Coordinate{1}}) != cov.covered.end());
        CHECK(std::find(cov.covered.begin(), cov.covered.end(), MonomialFieldIndex{{j, 0}, Coordinate{2}}) != cov.covered.end());
    }
    for (const auto* e : r.basis.entries()) REQUIRE(divergence(r.basis.field(*e)).is_zero());
    for (unsigned m = 1; m <= 4; ++m) {
        CHECK(!r.basis.certify({ExponentVector::unit(2, Coordinate{1}, m), Coordinate{1}}));
        CHECK(!r.basis.certify({ExponentVector::unit(2, Coordinate{2}, m), Coordinate{2}}));
    }
}

TEST_CASE("witnesses, invariants and determinism") {
    auto a = run(kUVW, 3, 7, 1, true);
    auto b = run(kUVW, 3, 7, 4, false);
    CHECK(!a.basis.check_invariants());
    CHECK(a.basis.size() == b.basis.size());
    CHECK(a.report.rounds == b.report.rounds);
    WordEvaluator eval(generator_bindings(kUVW, 3));
    auto ea = a.basis.entries(), eb = b.basis.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        REQUIRE(serialize_word(a.basis.witness(*ea[i])) == serialize_word(b.basis.witness(*eb[i])));
        REQUIRE(eval(a.basis.witness(*ea[i])) == a.basis.field(*ea[i]));
    }
    for (const auto& atom : a.basis.atoms()) REQUIRE(eval(atom.word) == atom.field);
    std::ostringstream ra, rb;
    write_closure_report(ra, a, {});
    write_closure_report(rb, b, {});
    CHECK(ra.str() == rb.str());
}

TEST_CASE("closure reports") {
    auto r = run(kUVW, 2, 6);
    auto cov = monomial_coverage(r.basis, 3, false);
    std::ostringstream text, kv;
    write_closure_report(text, r, std::span(&cov, 1));
    write_closure_record(kv, r, std::span(&cov, 1));
    CHECK(text.str().find("cap: 6") != std::string::npos);
    CHECK(text.str().find("covered: 20/20") != std::string::npos);
    CHECK(text.str().find("saturated: yes") != std::string::npos);
    CHECK(kv.str().find("cap=6") != std::string::npos);
}

TEST_CASE("helpers") {
    CHECK(generator_set("UVW") == kUVW);
    CHECK(generator_set("UVpVpp") == kShear);
    CHECK_THROWS(generator_set("XYZ"));
    auto g = named_generators(kUVW, 3);
    CHECK(default_cap(g, 2) == 2 + 5);
    CHECK(monomial_indices(2, 3, false).size() == 20);
    CHECK(monomial_indices(2, 3, true).size() == 8);
    CHECK(monomial_indices(3, 2, false).size() == 30);
}
