#pragma once

#include "vfalg/polynomial.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vfalg {

/// Polynomial vector field sum_k X_k d/dz_k on C^n. Component k (1-based) is
/// the coefficient of d/dz_k.
class VectorField {
public:
    explicit VectorField(std::size_t dimension = 0);
    explicit VectorField(std::vector<Polynomial> components);

    std::size_t dimension() const { return components_.size(); }
    const Polynomial& component(Coordinate k) const;
    std::span<const Polynomial> components() const { return components_; }

    bool is_zero() const;
    /// Max component degree, -1 for the zero field.
    int degree() const;

    VectorField& operator+=(const VectorField& other);
    VectorField& operator-=(const VectorField& other);
    VectorField& operator*=(const Rational& c);

    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    friend VectorField operator*(const Rational& c, VectorField a) { return a *= c; }
    friend VectorField operator*(VectorField a, const Rational& c) { return a *= c; }
    friend VectorField operator-(VectorField a) { return a *= -1; }

    friend bool operator==(const VectorField&, const VectorField&) = default;

private:
    std::vector<Polynomial> components_;
};

/// The five generator families: U, V, W generate all polynomial fields,
/// U, V', V'' generate the shear (volume-preserving) part.
enum class Generator { U, V, W, Vprime, Vdoubleprime };

std::string_view generator_name(Generator g);
std::optional<Generator> generator_from_name(std::string_view name);

/// Throws std::invalid_argument for n < 2.
VectorField make_generator(Generator family, std::size_t n);

/// The field d/dz_k in dimension n.
VectorField partial_field(std::size_t n, Coordinate k);

/// [X, Y] with component j equal to X(Y_j) - Y(X_j): X differentiates Y's
/// coefficients first. Every sign in the proof scripts depends on this.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Sum_i X_i * dp/dz_i.
Polynomial apply_derivation(const VectorField& x, const Polynomial& p);

Polynomial divergence(const VectorField& x);

/// z^alpha d/dz_k.
struct MonomialFieldIndex {
    ExponentVector exponent;
    Coordinate direction;

    std::size_t dimension() const { return exponent.size(); }
    friend bool operator==(const MonomialFieldIndex&, const MonomialFieldIndex&) = default;
    friend auto operator<=>(const MonomialFieldIndex&, const MonomialFieldIndex&) = default;
};

VectorField monomial_field(const MonomialFieldIndex& idx);

/// True iff the coefficient omits its own direction's variable.
bool is_shear_monomial(const MonomialFieldIndex& idx);

/// Returns c != 0 with x == c * y, if it exists. Two zero fields are not
/// considered proportional.
std::optional<Rational> proportionality_scalar(const VectorField& x, const VectorField& y);

/// `(p1) d/dz1 + ... + (pn) d/dzn`, zero components omitted, constant
/// coefficients unparenthesised; `0` for the zero field.
std::string to_string(const VectorField& x);
std::string to_string(const MonomialFieldIndex& idx);

/// Inverse of to_string(VectorField).
VectorField parse_field(std::string_view text, std::size_t dimension);

}  // namespace vfalg
