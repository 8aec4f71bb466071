#pragma once

#include "vfalg/errors.hpp"
#include "vfalg/rational.hpp"

#include <boost/container/small_vector.hpp>

#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vfalg {

/// 1-based coordinate index: Coordinate{1} is z1.
struct Coordinate {
    std::size_t index = 1;

    constexpr std::size_t offset() const { return index - 1; }
    friend constexpr auto operator<=>(Coordinate, Coordinate) = default;
};

/// Exponents of a monomial z1^a1 ... zn^an, stored 0-based (entry 0 is a1).
class ExponentVector {
public:
    using value_type = std::uint32_t;

    ExponentVector() = default;
    explicit ExponentVector(std::size_t n) : e_(n, 0) {}
    ExponentVector(std::initializer_list<value_type> values) : e_(values.begin(), values.end()) {}
    explicit ExponentVector(std::span<const value_type> values) : e_(values.begin(), values.end()) {}

    static ExponentVector unit(std::size_t n, Coordinate k, value_type power = 1);

    std::size_t size() const { return e_.size(); }
    value_type operator[](std::size_t i) const { return e_[i]; }
    value_type& operator[](std::size_t i) { return e_[i]; }
    value_type at(Coordinate k) const { return e_.at(k.offset()); }
    auto begin() const { return e_.begin(); }
    auto end() const { return e_.end(); }

    unsigned total_degree() const;
    bool is_zero() const { return total_degree() == 0; }

    /// Componentwise a <= b.
    bool divides(const ExponentVector& other) const;

    ExponentVector operator+(const ExponentVector& other) const;

    friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
    /// Plain lexicographic order; see graded_lex_compare for the term order.
    friend auto operator<=>(const ExponentVector& a, const ExponentVector& b) {
        return std::lexicographical_compare_three_way(a.e_.begin(), a.e_.end(), b.e_.begin(), b.e_.end());
    }

private:
    boost::container::small_vector<value_type, 8> e_;
};

/// Graded lexicographic order: total degree first, then a larger exponent of
/// z1 wins, then z2, and so on.
std::strong_ordering graded_lex_compare(const ExponentVector& a, const ExponentVector& b);

/// Sparse polynomial over Q in a fixed number of variables. Terms are kept
/// sorted in descending graded-lex order with no zero coefficients.
class Polynomial {
public:
    struct Term {
        ExponentVector exponent;
        Rational coeff;

        friend bool operator==(const Term&, const Term&) = default;
    };

    explicit Polynomial(std::size_t dimension = 0) : dim_(dimension) {}
    /// Builds from arbitrary terms: sorts, merges duplicates and drops zeros.
    Polynomial(std::size_t dimension, std::vector<Term> terms);

    static Polynomial constant(std::size_t dimension, const Rational& c);
    static Polynomial variable(std::size_t dimension, Coordinate k);
    static Polynomial monomial(ExponentVector exponent, const Rational& coeff = 1);

    std::size_t dimension() const { return dim_; }
    std::span<const Term> terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Total degree, -1 for the zero polynomial.
    int degree() const;
    /// Largest exponent of z_k over all terms, -1 for the zero polynomial.
    int degree_in(Coordinate k) const;
    Rational coefficient(const ExponentVector& exponent) const;
    const Term& leading_term() const { return terms_.front(); }

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Rational& c);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(Polynomial a) { return a *= -1; }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void combine(const Polynomial& other, const Rational& sign);

    std::size_t dim_ = 0;
    std::vector<Term> terms_;
};

Polynomial partial_derivative(const Polynomial& p, Coordinate k);

/// Replaces z_i by images[i-1]. All images share one dimension, which becomes
/// the dimension of the result.
Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images);
/// Same, but throws ExpansionBudgetExceeded before any single multiplication
/// that would form more than max_products term products.
Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images, std::size_t max_products);

/// Embeds p into `dimension >= p.dimension()` variables; the new variables
/// come after the old ones.
Polynomial extend_dimension(const Polynomial& p, std::size_t dimension);

Polynomial power(const Polynomial& p, unsigned exponent);

Rational evaluate(const Polynomial& p, std::span<const Rational> point);
std::complex<double> evaluate(const Polynomial& p, std::span<const std::complex<double>> point);

/// Variable names z1..zn.
std::vector<std::string> default_variable_names(std::size_t n);

/// Canonical rendering, e.g. `3*z2^2 - 1/2*z1`; `0` for the zero polynomial.
std::string to_string(const Polynomial& p);
std::string to_string(const Polynomial& p, std::span<const std::string> names);
std::string monomial_to_string(const ExponentVector& e, std::span<const std::string> names);

/// Parses the canonical rendering (whitespace tolerant). Throws
/// std::invalid_argument with a column number on malformed input.
Polynomial parse_polynomial(std::string_view text, std::size_t dimension);
Polynomial parse_polynomial(std::string_view text, std::span<const std::string> names);

}  // namespace vfalg
