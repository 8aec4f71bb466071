#include "vfalg/vector_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace vfalg {

VectorField::VectorField(std::size_t dimension) {
    components_.reserve(dimension);
    for (std::size_t i = 0; i < dimension; ++i) components_.emplace_back(dimension);
}

VectorField::VectorField(std::vector<Polynomial> components) : components_(std::move(components)) {
    for (const auto& c : components_) {
        if (c.dimension() != components_.size()) throw DimensionMismatch(components_.size(), c.dimension());
    }
}

const Polynomial& VectorField::component(Coordinate k) const {
    if (k.index < 1 || k.index > dimension()) throw CoordinateOutOfRange(k.index, dimension());
    return components_[k.offset()];
}

bool VectorField::is_zero() const {
    return std::all_of(components_.begin(), components_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

int VectorField::degree() const {
    int d = -1;
    for (const auto& c : components_) d = std::max(d, c.degree());
    return d;
}

VectorField& VectorField::operator+=(const VectorField& other) {
    if (dimension() != other.dimension()) throw DimensionMismatch(dimension(), other.dimension());
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += other.components_[i];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
    if (dimension() != other.dimension()) throw DimensionMismatch(dimension(), other.dimension());
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= other.components_[i];
    return *this;
}

VectorField& VectorField::operator*=(const Rational& c) {
    for (auto& p : components_) p *= c;
    return *this;
}

std::string_view generator_name(Generator g) {
    switch (g) {
        case Generator::U: return "U";
        case Generator::V: return "V";
        case Generator::W: return "W";
        case Generator::Vprime: return "V'";
        case Generator::Vdoubleprime: return "V''";
    }
    return "?";
}

std::optional<Generator> generator_from_name(std::string_view name) {
    for (auto g : {Generator::U, Generator::V, Generator::W, Generator::Vprime, Generator::Vdoubleprime}) {
        if (generator_name(g) == name) return g;
    }
    return std::nullopt;
}

VectorField partial_field(std::size_t n, Coordinate k) {
    return monomial_field({ExponentVector(n), k});
}

VectorField make_generator(Generator family, std::size_t n) {
    if (n < 2) throw std::invalid_argument("generators need n >= 2, got n = " + std::to_string(n));
    std::vector<Polynomial> comps(n, Polynomial(n));
    auto mono = [n](auto&& fill) {
        ExponentVector e(n);
        fill(e);
        return Polynomial::monomial(std::move(e));
    };
    // Indices below are 0-based offsets into comps / exponent vectors.
    switch (family) {
        case Generator::U:
            comps[n - 1] = Polynomial::constant(n, 1);
            break;
        case Generator::V:
            // d/dz_n + sum over k = 2..n of z_n ... z_{k+1} z_k^3 d/dz_{k-1}
            comps[n - 1] = Polynomial::constant(n, 1);
            for (std::size_t k = 1; k < n; ++k) {
                comps[k - 1] = mono([&](ExponentVector& e) {
                    for (std::size_t i = k + 1; i < n; ++i) e[i] = 1;
                    e[k] = 3;
                });
            }
            break;
        case Generator::W:
            comps[n - 1] = mono([&](ExponentVector& e) {
                for (std::size_t i = 0; i + 1 < n; ++i) e[i] = 2;
                e[n - 1] = 1;
            });
            break;
        case Generator::Vprime:
            comps[n - 1] = Polynomial::constant(n, 1);
            for (std::size_t k = 1; k < n; ++k) {
                comps[k - 1] = mono([&](ExponentVector& e) {
                    for (std::size_t i = k + 1; i < n; ++i) e[i] = 2;
                    e[k] = 5;
                });
            }
            break;
        case Generator::Vdoubleprime:
            comps[0] = Polynomial::constant(n, 1);
            for (std::size_t k = 0; k + 1 < n; ++k) {
                comps[k + 1] = mono([&](ExponentVector& e) {
                    for (std::size_t i = 0; i < k; ++i) e[i] = 2;
                    e[k] = 5;
                });
            }
            break;
    }
    return VectorField(std::move(comps));
}

Polynomial apply_derivation(const VectorField& x, const Polynomial& p) {
    const std::size_t n = x.dimension();
    if (p.dimension() != n) throw DimensionMismatch(n, p.dimension());
    std::vector<Polynomial::Term> terms;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& xi = x.components()[i];
        if (xi.is_zero()) continue;
        for (const auto& pt : p.terms()) {
            auto power = pt.exponent[i];
            if (power == 0) continue;
            ExponentVector reduced = pt.exponent;
            reduced[i] = power - 1;
            Rational scaled = pt.coeff * power;
            for (const auto& xt : xi.terms()) terms.push_back({reduced + xt.exponent, scaled * xt.coeff});
        }
    }
    return Polynomial(n, std::move(terms));
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
    if (x.dimension() != y.dimension()) throw DimensionMismatch(x.dimension(), y.dimension());
    std::vector<Polynomial> comps;
    comps.reserve(x.dimension());
    for (std::size_t j = 0; j < x.dimension(); ++j) {
        comps.push_back(apply_derivation(x, y.components()[j]) - apply_derivation(y, x.components()[j]));
    }
    return VectorField(std::move(comps));
}

Polynomial divergence(const VectorField& x) {
    Polynomial sum(x.dimension());
    for (std::size_t i = 0; i < x.dimension(); ++i) sum += partial_derivative(x.components()[i], Coordinate{i + 1});
    return sum;
}

VectorField monomial_field(const MonomialFieldIndex& idx) {
    const std::size_t n = idx.dimension();
    if (idx.direction.index < 1 || idx.direction.index > n) throw CoordinateOutOfRange(idx.direction.index, n);
    std::vector<Polynomial> comps(n, Polynomial(n));
    comps[idx.direction.offset()] = Polynomial::monomial(idx.exponent);
    return VectorField(std::move(comps));
}

bool is_shear_monomial(const MonomialFieldIndex& idx) {
    return idx.exponent.at(idx.direction) == 0;
}

std::optional<Rational> proportionality_scalar(const VectorField& x, const VectorField& y) {
    if (x.dimension() != y.dimension()) throw DimensionMismatch(x.dimension(), y.dimension());
    std::optional<Rational> scalar;
    for (std::size_t i = 0; i < x.dimension(); ++i) {
        const auto& a = x.components()[i];
        const auto& b = y.components()[i];
        if (a.term_count() != b.term_count()) return std::nullopt;
        if (a.is_zero()) continue;
        if (!scalar) scalar = a.leading_term().coeff / b.leading_term().coeff;
        if (a != b * *scalar) return std::nullopt;
    }
    return scalar;
}

std::string to_string(const VectorField& x) {
    std::string out;
    for (std::size_t k = 0; k < x.dimension(); ++k) {
        const auto& p = x.components()[k];
        if (p.is_zero()) continue;
        if (!out.empty()) out += " + ";
        if (p.is_constant()) {
            out += to_string(p);
        } else {
            out += '(' + to_string(p) + ')';
        }
        out += " d/dz" + std::to_string(k + 1);
    }
    return out.empty() ? "0" : out;
}

std::string to_string(const MonomialFieldIndex& idx) {
    std::string out = "z^(";
    for (std::size_t i = 0; i < idx.exponent.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(idx.exponent[i]);
    }
    return out + ") d/dz" + std::to_string(idx.direction.index);
}

VectorField parse_field(std::string_view text, std::size_t dimension) {
    std::vector<Polynomial> comps(dimension, Polynomial(dimension));
    auto trim = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text == "0") return VectorField(std::move(comps));
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto marker = text.find(" d/dz", pos);
        if (marker == std::string_view::npos) throw std::invalid_argument("field parse error: missing ' d/dz<k>'");
        std::string_view coeff = trim(text.substr(pos, marker - pos));
        if (coeff.size() >= 2 && coeff.front() == '(' && coeff.back() == ')') coeff = coeff.substr(1, coeff.size() - 2);
        std::size_t digits_start = marker + 5;
        std::size_t digits_end = digits_start;
        while (digits_end < text.size() && std::isdigit(static_cast<unsigned char>(text[digits_end]))) ++digits_end;
        if (digits_end == digits_start) throw std::invalid_argument("field parse error: missing direction index");
        std::size_t k = std::stoul(std::string(text.substr(digits_start, digits_end - digits_start)));
        if (k < 1 || k > dimension) throw CoordinateOutOfRange(k, dimension);
        comps[k - 1] += parse_polynomial(coeff, dimension);
        pos = digits_end;
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (pos < text.size()) {
            if (text[pos] != '+') throw std::invalid_argument("field parse error: expected '+' between components");
            ++pos;
        }
    }
    return VectorField(std::move(comps));
}

}  // namespace vfalg
