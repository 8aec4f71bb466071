#include "support/random_fields.hpp"
#include "vfalg/vector_field.hpp"

#include <doctest.h>

using namespace vfalg;

namespace {

VectorField F(std::string_view s, std::size_t n) { return parse_field(s, n); }

MonomialFieldIndex idx(ExponentVector e, std::size_t k) { return {std::move(e), Coordinate{k}}; }

}  // namespace

TEST_CASE("generators") {
    CHECK(make_generator(Generator::V, 2) == F("(z2^3) d/dz1 + 1 d/dz2", 2));
    CHECK(make_generator(Generator::W, 3) == F("(z1^2*z2^2*z3) d/dz3", 3));
    CHECK(make_generator(Generator::Vdoubleprime, 3) == F("1 d/dz1 + (z1^5) d/dz2 + (z1^2*z2^5) d/dz3", 3));
    CHECK(make_generator(Generator::Vprime, 3) == F("(z2^5*z3^2) d/dz1 + (z3^5) d/dz2 + 1 d/dz3", 3));
    CHECK(make_generator(Generator::V, 4) ==
          F("(z4*z3*z2^3) d/dz1 + (z4*z3^3) d/dz2 + (z4^3) d/dz3 + 1 d/dz4", 4));
    CHECK(to_string(make_generator(Generator::W, 2)) == "(z1^2*z2) d/dz2");
    CHECK(to_string(make_generator(Generator::Vdoubleprime, 3)) == "1 d/dz1 + (z1^5) d/dz2 + (z1^2*z2^5) d/dz3");
    CHECK_THROWS_AS(make_generator(Generator::U, 1), std::invalid_argument);
    CHECK(generator_from_name("V''") == Generator::Vdoubleprime);
    CHECK(!generator_from_name("X"));
}

TEST_CASE("bracket examples") {
    const auto U = make_generator(Generator::U, 2), V = make_generator(Generator::V, 2);
    CHECK(lie_bracket(U, V) == F("(3*z2^2) d/dz1", 2));
    CHECK(to_string(lie_bracket(U, V)) == "(3*z2^2) d/dz1");
    CHECK(lie_bracket(U, lie_bracket(U, lie_bracket(U, V))) == Rational(6) * partial_field(2, Coordinate{1}));
    CHECK(lie_bracket(V, V).is_zero());
    CHECK(to_string(lie_bracket(V, V)) == "0");
    // convention: [z1 d/dz1, z1^2 d/dz1] = z1 * 2 z1 - z1^2 = z1^2
    CHECK(lie_bracket(F("(z1) d/dz1", 1), F("(z1^2) d/dz1", 1)) == F("(z1^2) d/dz1", 1));
    CHECK_THROWS_AS(lie_bracket(U, make_generator(Generator::U, 3)), DimensionMismatch);
}

TEST_CASE("divergence") {
    for (std::size_t n = 2; n <= 5; ++n) {
        CHECK(divergence(make_generator(Generator::Vprime, n)).is_zero());
        CHECK(divergence(make_generator(Generator::Vdoubleprime, n)).is_zero());
        CHECK(divergence(make_generator(Generator::U, n)).is_zero());
        ExponentVector m(n);
        for (std::size_t i = 0; i + 1 < n; ++i) m[i] = 2;
        CHECK(divergence(make_generator(Generator::W, n)) == Polynomial::monomial(m));
    }
}

TEST_CASE("monomial fields") {
    CHECK(monomial_field(idx({0, 1}, 1)) == F("(z2) d/dz1", 2));
    CHECK(monomial_field(idx({0, 0, 0}, 3)) == make_generator(Generator::U, 3));
    CHECK(monomial_field(idx({2, 2, 1}, 3)) == make_generator(Generator::W, 3));
    CHECK(is_shear_monomial(idx({0, 5}, 1)));
    CHECK(!is_shear_monomial(idx({1, 0}, 1)));
    CHECK(is_shear_monomial(idx({0, 0}, 2)));
    CHECK(to_string(idx({0, 1}, 1)) == "z^(0,1) d/dz1");
}

TEST_CASE("derivations") {
    const auto V = make_generator(Generator::V, 2);
    CHECK(apply_derivation(V, Polynomial::variable(2, Coordinate{1})) == parse_polynomial("z2^3", 2));
    CHECK(apply_derivation(make_generator(Generator::U, 3), Polynomial::variable(3, Coordinate{3})) ==
          Polynomial::constant(3, 1));
    CHECK(apply_derivation(V, Polynomial::constant(2, 7)).is_zero());
}

TEST_CASE("proportionality") {
    auto x = F("(z2) d/dz1 + (2*z1) d/dz2", 2);
    CHECK(proportionality_scalar(Rational(-3, 2) * x, x) == Rational(-3, 2));
    CHECK(!proportionality_scalar(x, F("(z2) d/dz1", 2)));
    CHECK(!proportionality_scalar(VectorField(2), VectorField(2)));
    CHECK(!proportionality_scalar(VectorField(2), x));
}

TEST_CASE("field rendering round-trips") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
        auto x = testing::random_field(rng, 3, 4, 3);
        REQUIRE(parse_field(to_string(x), 3) == x);
    }
}

TEST_CASE("bracket properties on random fields") {
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 2 + i % 2;
        auto x = testing::random_field(rng, n, 3, 3);
        auto y = testing::random_field(rng, n, 3, 3);
        auto z = testing::random_field(rng, n, 2, 3);
        const Rational c = testing::random_rational(rng);
        REQUIRE(lie_bracket(x, y) == -lie_bracket(y, x));
        REQUIRE((lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y)))
                    .is_zero());
        REQUIRE(lie_bracket(c * x + y, z) == c * lie_bracket(x, z) + lie_bracket(y, z));
        REQUIRE(divergence(lie_bracket(x, y)) ==
                apply_derivation(x, divergence(y)) - apply_derivation(y, divergence(x)));
        auto p = testing::random_point(rng, n);
        auto expected = testing::bracket_by_jacobians(x, y, p);
        auto b = lie_bracket(x, y);
        for (std::size_t k = 0; k < n; ++k) REQUIRE(evaluate(b.components()[k], p) == expected[k]);
    }
}
