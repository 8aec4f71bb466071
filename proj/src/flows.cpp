#include "vfalg/flows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace vfalg {

unsigned NilpotencyReport::max_index() const {
    unsigned m = 0;
    for (const auto& i : index) {
        if (i) m = std::max(m, *i);
    }
    return m;
}

NilpotencyReport is_locally_nilpotent(const VectorField& x, unsigned cap) {
    if (cap < 1) throw std::invalid_argument("nilpotency cap must be >= 1");
    const std::size_t n = x.dimension();
    NilpotencyReport report;
    report.cap = cap;
    report.is_lnd = true;
    for (std::size_t i = 1; i <= n; ++i) {
        Polynomial p = Polynomial::variable(n, Coordinate{i});
        std::optional<unsigned> index;
        for (unsigned m = 1; m <= cap; ++m) {
            p = apply_derivation(x, p);
            if (p.is_zero()) {
                index = m;
                break;
            }
        }
        report.is_lnd = report.is_lnd && index.has_value();
        report.index.push_back(index);
    }
    return report;
}

FlowMap::FlowMap(std::size_t n, std::vector<FlowComponent> components, std::optional<Polynomial> exponent_rate)
    : n_(n), components_(std::move(components)), rate_(std::move(exponent_rate)) {
    if (components_.size() != n_) throw DimensionMismatch(n_, components_.size());
    bool any_exponential = false;
    for (const auto& c : components_) {
        if (c.poly.dimension() != n_ + 1) throw DimensionMismatch(n_ + 1, c.poly.dimension());
        any_exponential = any_exponential || c.exponential;
    }
    if (any_exponential && !rate_) throw std::invalid_argument("exponential component without an exponent rate");
    if (rate_ && rate_->dimension() != n_) throw DimensionMismatch(n_, rate_->dimension());
}

Polynomial FlowMap::expanded(std::size_t i) const {
    const auto& c = components_.at(i);
    Polynomial p = extend_dimension(c.poly, n_ + 2);
    if (c.exponential) p = p * Polynomial::variable(n_ + 2, Coordinate{n_ + 2});
    return p;
}

FlowMap lnd_flow(const VectorField& x, unsigned cap) {
    if (cap < 1) throw std::invalid_argument("nilpotency cap must be >= 1");
    const std::size_t n = x.dimension();
    std::vector<FlowComponent> comps;
    for (std::size_t i = 1; i <= n; ++i) {
        Polynomial iterate = Polynomial::variable(n, Coordinate{i});
        std::vector<Polynomial::Term> terms;
        Rational inverse_factorial = 1;
        unsigned m = 0;
        while (!iterate.is_zero()) {
            if (m == cap) throw NotLocallyNilpotent("field is not locally nilpotent within cap " + std::to_string(cap));
            for (const auto& term : iterate.terms()) {
                ExponentVector e(n + 1);
                for (std::size_t j = 0; j < n; ++j) e[j] = term.exponent[j];
                e[n] = m;
                terms.push_back({std::move(e), term.coeff * inverse_factorial});
            }
            iterate = apply_derivation(x, iterate);
            ++m;
            inverse_factorial /= m;
        }
        comps.push_back({Polynomial(n + 1, std::move(terms)), false});
    }
    return FlowMap(n, std::move(comps));
}

FlowMap w_flow(std::size_t n) {
    if (n < 2) throw std::invalid_argument("w_flow needs n >= 2, got n = " + std::to_string(n));
    std::vector<FlowComponent> comps;
    for (std::size_t i = 1; i <= n; ++i) {
        comps.push_back({Polynomial::variable(n + 1, Coordinate{i}), i == n});
    }
    ExponentVector rate(n);
    for (std::size_t i = 0; i + 1 < n; ++i) rate[i] = 2;
    return FlowMap(n, std::move(comps), Polynomial::monomial(std::move(rate)));
}

namespace {

// Variables of the expanded representation: z1..zn, t, E.
struct Expanded {
    std::size_t n;
    std::vector<Polynomial> phi;  // dimension n + 2
    Polynomial rate;              // c(z), dimension n + 2 (zero when absent)
};

Expanded expand(const FlowMap& flow) {
    const std::size_t n = flow.dimension();
    Expanded e{n, {}, Polynomial(n + 2)};
    for (std::size_t i = 0; i < n; ++i) e.phi.push_back(flow.expanded(i));
    if (flow.exponent_rate()) e.rate = extend_dimension(*flow.exponent_rate(), n + 2);
    return e;
}

// d/dt acting on (z, t, E) with dE/dt = c(z) E.
Polynomial time_derivative(const Polynomial& p, const Expanded& e) {
    const std::size_t n = e.n;
    Polynomial d = partial_derivative(p, Coordinate{n + 1});
    if (!e.rate.is_zero()) {
        Polynomial big_e = Polynomial::variable(n + 2, Coordinate{n + 2});
        d += e.rate * big_e * partial_derivative(p, Coordinate{n + 2});
    }
    return d;
}

}  // namespace

bool verify_flow_ode(const FlowMap& flow, const VectorField& x, std::size_t max_products) {
    const std::size_t n = flow.dimension();
    if (x.dimension() != n) return false;
    Expanded e = expand(flow);

    // phi_0 = id: t -> 0, E -> 1.
    std::vector<Polynomial> at_zero;
    for (std::size_t i = 1; i <= n; ++i) at_zero.push_back(Polynomial::variable(n, Coordinate{i}));
    at_zero.push_back(Polynomial(n));
    at_zero.push_back(Polynomial::constant(n, 1));
    for (std::size_t i = 0; i < n; ++i) {
        if (substitute(e.phi[i], at_zero, max_products) != Polynomial::variable(n, Coordinate{i + 1})) return false;
    }

    for (std::size_t i = 0; i < n; ++i) {
        Polynomial lhs = time_derivative(e.phi[i], e);
        Polynomial rhs = substitute(x.components()[i], e.phi, max_products);
        if (lhs != rhs) return false;
    }
    return true;
}

namespace {

bool starts_at_identity(const FlowMap& flow) {
    const std::size_t n = flow.dimension();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Polynomial::Term> at_zero;
        for (const auto& term : flow.components()[i].poly.terms()) {
            if (term.exponent[n] == 0) at_zero.push_back(term);
        }
        if (Polynomial(n + 1, std::move(at_zero)) != Polynomial::variable(n + 1, Coordinate{i + 1})) return false;
    }
    return true;
}

// For a polynomial flow with phi_0 = id and X = d/dt phi at t = 0, the group
// law holds iff d/dt phi = X(phi) and d/dt phi = (D_z phi) X. Given the first,
// (d/ds - d/dt) phi_s(phi_t(z)) is the second evaluated at phi_t(z); a
// polynomial killed by d/ds - d/dt depends on s + t only. Conversely both
// follow by differentiating the group law at s = 0 and at t = 0.
bool polynomial_group_law(const FlowMap& flow, std::size_t max_products) {
    const std::size_t n = flow.dimension();
    const Coordinate time{n + 1};
    std::vector<Polynomial> generator;
    std::vector<Polynomial> lifted;
    for (const auto& c : flow.components()) {
        std::vector<Polynomial::Term> linear;
        for (const auto& term : c.poly.terms()) {
            if (term.exponent[n] != 1) continue;
            ExponentVector e(n);
            for (std::size_t j = 0; j < n; ++j) e[j] = term.exponent[j];
            linear.push_back({std::move(e), term.coeff});
        }
        generator.emplace_back(n, std::move(linear));
        lifted.push_back(extend_dimension(generator.back(), n + 1));
    }
    lifted.emplace_back(n + 1);
    const VectorField x(std::move(lifted));
    std::vector<Polynomial> phi;
    for (const auto& c : flow.components()) phi.push_back(c.poly);
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial velocity = partial_derivative(phi[i], time);
        if (velocity != apply_derivation(x, phi[i])) return false;
        if (velocity != substitute(generator[i], phi, max_products)) return false;
    }
    return true;
}

}  // namespace

bool flow_group_law_check(const FlowMap& flow, std::size_t max_products) {
    const std::size_t n = flow.dimension();
    if (!flow.exponent_rate() && starts_at_identity(flow)) return polynomial_group_law(flow, max_products);
    Expanded e = expand(flow);
    // Variables: z1..zn, s, t, E_s, E_t.
    const std::size_t dim = n + 4;
    auto var = [dim](std::size_t i) { return Polynomial::variable(dim, Coordinate{i}); };
    const Polynomial s = var(n + 1), t = var(n + 2), es = var(n + 3), et = var(n + 4);

    std::vector<Polynomial> inner_images;  // phi_t(z)
    for (std::size_t i = 1; i <= n; ++i) inner_images.push_back(var(i));
    inner_images.push_back(t);
    inner_images.push_back(et);
    std::vector<Polynomial> phi_t;
    for (const auto& p : e.phi) phi_t.push_back(substitute(p, inner_images, max_products));

    // E_s at the point phi_t(z) equals E_s(z) only when the rate is a first
    // integral of the flow.
    if (!e.rate.is_zero()) {
        Polynomial rate_base = extend_dimension(*flow.exponent_rate(), dim);
        std::vector<Polynomial> z_images(phi_t.begin(), phi_t.end());
        if (substitute(*flow.exponent_rate(), z_images, max_products) != rate_base) return false;
    }

    std::vector<Polynomial> outer_images = phi_t;
    outer_images.push_back(s);
    outer_images.push_back(es);
    std::vector<Polynomial> sum_images;
    for (std::size_t i = 1; i <= n; ++i) sum_images.push_back(var(i));
    sum_images.push_back(s + t);
    sum_images.push_back(es * et);

    for (const auto& p : e.phi) {
        if (substitute(p, outer_images, max_products) != substitute(p, sum_images, max_products)) return false;
    }
    return true;
}

std::vector<std::complex<double>> apply_flow_numeric(const FlowMap& flow, std::complex<double> t,
                                                     std::span<const std::complex<double>> point) {
    const std::size_t n = flow.dimension();
    if (point.size() != n) throw DimensionMismatch(n, point.size());
    std::vector<std::complex<double>> zt(point.begin(), point.end());
    zt.push_back(t);
    std::complex<double> factor = 1;
    if (flow.exponent_rate()) factor = std::exp(t * evaluate(*flow.exponent_rate(), point));
    std::vector<std::complex<double>> out;
    out.reserve(n);
    for (const auto& c : flow.components()) {
        auto v = evaluate(c.poly, std::span<const std::complex<double>>(zt));
        out.push_back(c.exponential ? v * factor : v);
    }
    return out;
}

FlowMap generator_flow(Generator g, std::size_t n) {
    if (g == Generator::W) return w_flow(n);
    return lnd_flow(make_generator(g, n), kGeneratorFlowCap);
}

std::vector<std::complex<double>> compose_flows_numeric(std::span<const FlowStep> steps,
                                                        std::span<const std::complex<double>> point) {
    const std::size_t n = point.size();
    std::map<Generator, FlowMap> flows;
    std::vector<std::complex<double>> z(point.begin(), point.end());
    for (const auto& step : steps) {
        auto it = flows.find(step.generator);
        if (it == flows.end()) it = flows.emplace(step.generator, generator_flow(step.generator, n)).first;
        z = apply_flow_numeric(it->second, step.time, z);
    }
    return z;
}

std::string to_string(const FlowMap& flow) {
    const std::size_t n = flow.dimension();
    auto names = default_variable_names(n);
    auto names_t = names;
    names_t.push_back("t");
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = flow.components()[i];
        out += names[i] + " -> ";
        if (c.exponential) {
            out += "exp(t*(" + to_string(*flow.exponent_rate(), names) + "))*(" + to_string(c.poly, names_t) + ")";
        } else {
            out += to_string(c.poly, names_t);
        }
        out += '\n';
    }
    return out;
}

std::string to_string(std::complex<double> value) {
    char buf[96];
    double im = value.imag();
    std::snprintf(buf, sizeof buf, "%.15g%c%.15g i", value.real(), std::signbit(im) ? '-' : '+', std::fabs(im));
    return buf;
}

}  // namespace vfalg
