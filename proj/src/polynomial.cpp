#include "vfalg/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace vfalg {

ExponentVector ExponentVector::unit(std::size_t n, Coordinate k, value_type power) {
    if (k.index < 1 || k.index > n) throw CoordinateOutOfRange(k.index, n);
    ExponentVector e(n);
    e[k.offset()] = power;
    return e;
}

unsigned ExponentVector::total_degree() const {
    return std::accumulate(e_.begin(), e_.end(), 0u);
}

bool ExponentVector::divides(const ExponentVector& other) const {
    if (size() != other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
        if (e_[i] > other.e_[i]) return false;
    }
    return true;
}

ExponentVector ExponentVector::operator+(const ExponentVector& other) const {
    if (size() != other.size()) throw DimensionMismatch(size(), other.size());
    ExponentVector r = *this;
    for (std::size_t i = 0; i < size(); ++i) r.e_[i] += other.e_[i];
    return r;
}

std::strong_ordering graded_lex_compare(const ExponentVector& a, const ExponentVector& b) {
    if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
    return a <=> b;
}

namespace {

bool descending(const Polynomial::Term& a, const Polynomial::Term& b) {
    return graded_lex_compare(a.exponent, b.exponent) > 0;
}

void check_same_dimension(std::size_t a, std::size_t b) {
    if (a != b) throw DimensionMismatch(a, b);
}

}  // namespace

Polynomial::Polynomial(std::size_t dimension, std::vector<Term> terms) : dim_(dimension) {
    for (const auto& t : terms) check_same_dimension(dim_, t.exponent.size());
    std::sort(terms.begin(), terms.end(), descending);
    terms_.reserve(terms.size());
    for (auto& t : terms) {
        if (!terms_.empty() && terms_.back().exponent == t.exponent) {
            terms_.back().coeff += t.coeff;
        } else {
            if (!terms_.empty() && terms_.back().coeff == 0) terms_.pop_back();
            terms_.push_back(std::move(t));
        }
    }
    if (!terms_.empty() && terms_.back().coeff == 0) terms_.pop_back();
}

Polynomial Polynomial::constant(std::size_t dimension, const Rational& c) {
    Polynomial p(dimension);
    if (c != 0) p.terms_.push_back({ExponentVector(dimension), c});
    return p;
}

Polynomial Polynomial::variable(std::size_t dimension, Coordinate k) {
    return monomial(ExponentVector::unit(dimension, k));
}

Polynomial Polynomial::monomial(ExponentVector exponent, const Rational& coeff) {
    Polynomial p(exponent.size());
    if (coeff != 0) p.terms_.push_back({std::move(exponent), coeff});
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.front().exponent.is_zero());
}

int Polynomial::degree() const {
    return terms_.empty() ? -1 : static_cast<int>(terms_.front().exponent.total_degree());
}

int Polynomial::degree_in(Coordinate k) const {
    if (k.index < 1 || k.index > dim_) throw CoordinateOutOfRange(k.index, dim_);
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.exponent[k.offset()]));
    return d;
}

Rational Polynomial::coefficient(const ExponentVector& exponent) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent, [](const Term& t, const ExponentVector& e) {
        return graded_lex_compare(t.exponent, e) > 0;
    });
    if (it != terms_.end() && it->exponent == exponent) return it->coeff;
    return 0;
}

void Polynomial::combine(const Polynomial& other, const Rational& sign) {
    check_same_dimension(dim_, other.dim_);
    std::vector<Term> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
        if (b == other.terms_.end() || (a != terms_.end() && descending(*a, *b))) {
            merged.push_back(std::move(*a++));
        } else if (a == terms_.end() || descending(*b, *a)) {
            merged.push_back({b->exponent, sign * b->coeff});
            ++b;
        } else {
            Rational c = a->coeff + sign * b->coeff;
            if (c != 0) merged.push_back({std::move(a->exponent), std::move(c)});
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    combine(other, 1);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    combine(other, -1);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
    } else {
        for (auto& t : terms_) t.coeff *= c;
    }
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_same_dimension(a.dim_, b.dim_);
    std::vector<Polynomial::Term> products;
    products.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) products.push_back({x.exponent + y.exponent, x.coeff * y.coeff});
    }
    return Polynomial(a.dim_, std::move(products));
}

Polynomial partial_derivative(const Polynomial& p, Coordinate k) {
    if (k.index < 1 || k.index > p.dimension()) throw CoordinateOutOfRange(k.index, p.dimension());
    std::vector<Polynomial::Term> terms;
    for (const auto& t : p.terms()) {
        auto power = t.exponent[k.offset()];
        if (power == 0) continue;
        Polynomial::Term d{t.exponent, t.coeff * power};
        d.exponent[k.offset()] = power - 1;
        terms.push_back(std::move(d));
    }
    return Polynomial(p.dimension(), std::move(terms));
}

Polynomial power(const Polynomial& p, unsigned exponent) {
    Polynomial result = Polynomial::constant(p.dimension(), 1);
    Polynomial base = p;
    while (exponent > 0) {
        if (exponent & 1u) result = result * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images) {
    return substitute(p, images, std::numeric_limits<std::size_t>::max());
}

Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images, std::size_t max_products) {
    if (images.size() != p.dimension()) throw DimensionMismatch(p.dimension(), images.size());
    std::size_t target = images.empty() ? 0 : images.front().dimension();
    for (const auto& im : images) check_same_dimension(target, im.dimension());

    // powers[i][e] = images[i]^e, filled lazily.
    auto times = [max_products](const Polynomial& a, const Polynomial& b) {
        const std::size_t na = a.term_count(), nb = b.term_count();
        if (nb != 0 && na > max_products / nb) throw ExpansionBudgetExceeded(na * nb, max_products);
        return a * b;
    };
    std::vector<std::vector<Polynomial>> powers(images.size());
    auto image_power = [&](std::size_t i, unsigned e) -> const Polynomial& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(Polynomial::constant(target, 1));
        while (cache.size() <= e) cache.push_back(times(cache.back(), images[i]));
        return cache[e];
    };

    // Products are buffered and merged in batches; merging one term at a time
    // is quadratic in the result size.
    Polynomial result(target);
    std::vector<Polynomial::Term> pending;
    for (const auto& t : p.terms()) {
        Polynomial term = Polynomial::constant(target, t.coeff);
        for (std::size_t i = 0; i < t.exponent.size(); ++i) {
            if (t.exponent[i] > 0) term = times(term, image_power(i, t.exponent[i]));
        }
        pending.insert(pending.end(), term.terms().begin(), term.terms().end());
        if (pending.size() > 2 * result.term_count() + 65536) {
            result += Polynomial(target, std::move(pending));
            pending.clear();
        }
    }
    result += Polynomial(target, std::move(pending));
    return result;
}

Polynomial extend_dimension(const Polynomial& p, std::size_t dimension) {
    if (dimension < p.dimension()) throw DimensionMismatch(p.dimension(), dimension);
    std::vector<Polynomial::Term> terms;
    terms.reserve(p.term_count());
    for (const auto& t : p.terms()) {
        ExponentVector e(dimension);
        for (std::size_t i = 0; i < t.exponent.size(); ++i) e[i] = t.exponent[i];
        terms.push_back({std::move(e), t.coeff});
    }
    return Polynomial(dimension, std::move(terms));
}

Rational evaluate(const Polynomial& p, std::span<const Rational> point) {
    if (point.size() != p.dimension()) throw DimensionMismatch(p.dimension(), point.size());
    Rational sum = 0;
    for (const auto& t : p.terms()) {
        Rational term = t.coeff;
        for (std::size_t i = 0; i < point.size(); ++i) {
            for (unsigned e = 0; e < t.exponent[i]; ++e) term *= point[i];
        }
        sum += term;
    }
    return sum;
}

std::complex<double> evaluate(const Polynomial& p, std::span<const std::complex<double>> point) {
    if (point.size() != p.dimension()) throw DimensionMismatch(p.dimension(), point.size());
    std::complex<double> sum = 0;
    for (const auto& t : p.terms()) {
        std::complex<double> term = t.coeff.get_d();
        for (std::size_t i = 0; i < point.size(); ++i) {
            if (t.exponent[i] > 0) term *= std::pow(point[i], static_cast<int>(t.exponent[i]));
        }
        sum += term;
    }
    return sum;
}

std::vector<std::string> default_variable_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) names.push_back("z" + std::to_string(i));
    return names;
}

std::string monomial_to_string(const ExponentVector& e, std::span<const std::string> names) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += names[i];
        if (e[i] > 1) out += '^' + std::to_string(e[i]);
    }
    return out.empty() ? "1" : out;
}

std::string to_string(const Polynomial& p, std::span<const std::string> names) {
    if (names.size() != p.dimension()) throw DimensionMismatch(p.dimension(), names.size());
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        Rational magnitude = abs(t.coeff);
        if (first) {
            if (t.coeff < 0) out += '-';
        } else {
            out += t.coeff < 0 ? " - " : " + ";
        }
        first = false;
        if (t.exponent.is_zero()) {
            out += to_string(magnitude);
        } else {
            if (magnitude != 1) out += to_string(magnitude) + '*';
            out += monomial_to_string(t.exponent, names);
        }
    }
    return out;
}

std::string to_string(const Polynomial& p) {
    auto names = default_variable_names(p.dimension());
    return to_string(p, names);
}

namespace {

class PolynomialParser {
public:
    PolynomialParser(std::string_view text, std::span<const std::string> names) : text_(text), names_(names) {}

    Polynomial parse() {
        std::vector<Polynomial::Term> terms;
        skip_space();
        bool negative = accept('-');
        terms.push_back(term(negative));
        while (true) {
            skip_space();
            if (at_end()) break;
            if (accept('+')) {
                terms.push_back(term(false));
            } else if (accept('-')) {
                terms.push_back(term(true));
            } else {
                fail("expected '+', '-' or end of input");
            }
        }
        return Polynomial(names_.size(), std::move(terms));
    }

private:
    Polynomial::Term term(bool negative) {
        skip_space();
        Polynomial::Term t{ExponentVector(names_.size()), 1};
        bool have_factor = false;
        if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            t.coeff = rational();
            have_factor = true;
            skip_space();
            if (!accept('*')) {
                if (negative) t.coeff = -t.coeff;
                return t;
            }
        }
        do {
            skip_space();
            if (!have_factor && !at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
                t.coeff *= rational();
            } else {
                std::size_t var = variable();
                std::uint32_t e = 1;
                skip_space();
                if (accept('^')) {
                    skip_space();
                    e = static_cast<std::uint32_t>(std::stoul(digits()));
                }
                t.exponent[var] += e;
            }
            have_factor = true;
            skip_space();
        } while (accept('*'));
        if (negative) t.coeff = -t.coeff;
        return t;
    }

    Rational rational() {
        std::string s = digits();
        if (!at_end() && peek() == '/') {
            ++pos_;
            s += '/' + digits();
        }
        try {
            return parse_rational(s);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    std::string digits() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail("expected digits");
        return std::string(text_.substr(start, pos_ - start));
    }

    std::size_t variable() {
        std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i] == name) return i;
        }
        pos_ = start;
        fail(name.empty() ? "expected a coefficient or variable" : "unknown variable '" + std::string(name) + "'");
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    bool accept(char c) {
        if (!at_end() && peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& message) const {
        throw std::invalid_argument("polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + message);
    }

    std::string_view text_;
    std::span<const std::string> names_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::span<const std::string> names) {
    return PolynomialParser(text, names).parse();
}

Polynomial parse_polynomial(std::string_view text, std::size_t dimension) {
    auto names = default_variable_names(dimension);
    return parse_polynomial(text, names);
}

}  // namespace vfalg
