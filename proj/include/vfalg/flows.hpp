#pragma once

#include "vfalg/vector_field.hpp"

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vfalg {

inline constexpr unsigned kDefaultNilpotencyCap = 64;
/// Largest single multiplication the exact flow checks will expand, about
/// 1.5 GB of terms before merging.
inline constexpr std::size_t kDefaultExpansionBudget = 20'000'000;
/// Enough for every generator up to n = 5 (V' and V'' reach 982 on z1).
inline constexpr unsigned kGeneratorFlowCap = 1024;

/// Result of iterating a derivation on each coordinate function.
struct NilpotencyReport {
    bool is_lnd = false;
    /// index[i]: smallest m with X^m(z_{i+1}) = 0, or nullopt when the cap ran out.
    std::vector<std::optional<unsigned>> index;
    unsigned cap = 0;

    unsigned max_index() const;
};

NilpotencyReport is_locally_nilpotent(const VectorField& x, unsigned cap = kDefaultNilpotencyCap);

class NotLocallyNilpotent : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// One flow component: a polynomial in (z1..zn, t), optionally multiplied by
/// the formal factor E = exp(t * c(z)).
struct FlowComponent {
    Polynomial poly;
    bool exponential = false;

    friend bool operator==(const FlowComponent&, const FlowComponent&) = default;
};

/// Symbolic flow phi_t of a vector field. At most one exponential rate c is
/// shared by all components that carry the formal factor.
class FlowMap {
public:
    FlowMap(std::size_t n, std::vector<FlowComponent> components, std::optional<Polynomial> exponent_rate = {});

    std::size_t dimension() const { return n_; }
    std::span<const FlowComponent> components() const { return components_; }
    const std::optional<Polynomial>& exponent_rate() const { return rate_; }

    /// Component i as a polynomial in (z1..zn, t, E); E occurs to degree <= 1.
    Polynomial expanded(std::size_t i) const;

    friend bool operator==(const FlowMap&, const FlowMap&) = default;

private:
    std::size_t n_;
    std::vector<FlowComponent> components_;
    std::optional<Polynomial> rate_;
};

/// phi_t(z)_i = sum_m t^m/m! X^m(z_i). Throws NotLocallyNilpotent when some
/// coordinate does not vanish within the cap.
FlowMap lnd_flow(const VectorField& x, unsigned cap = kDefaultNilpotencyCap);

/// (z1, ..., z_{n-1}, exp(t * z1^2 ... z_{n-1}^2) z_n).
FlowMap w_flow(std::size_t n);

/// Checks d/dt phi = X(phi) symbolically, with d/dt E = c E, plus phi_0 = id.
bool verify_flow_ode(const FlowMap& flow, const VectorField& x, std::size_t max_products = kDefaultExpansionBudget);

/// Checks phi_s(phi_t(z)) = phi_{s+t}(z) exactly. Polynomial flows with
/// phi_0 = id go through the equivalent pair of differential identities,
/// everything else through direct substitution. Both checks throw
/// ExpansionBudgetExceeded rather than expand past max_products.
bool flow_group_law_check(const FlowMap& flow, std::size_t max_products = kDefaultExpansionBudget);

std::vector<std::complex<double>> apply_flow_numeric(const FlowMap& flow, std::complex<double> t,
                                                     std::span<const std::complex<double>> point);

struct FlowStep {
    Generator generator;
    std::complex<double> time;
};

/// Applies the flows left to right; the dimension is taken from the point.
std::vector<std::complex<double>> compose_flows_numeric(std::span<const FlowStep> steps,
                                                        std::span<const std::complex<double>> point);

/// The flow of one of the five generators (lnd_flow at kGeneratorFlowCap, or w_flow for W).
FlowMap generator_flow(Generator g, std::size_t n);

/// One line per coordinate, e.g. `z2 -> exp(t*(z1^2))*(z2)`.
std::string to_string(const FlowMap& flow);
/// `re+im i` with 15 significant digits.
std::string to_string(std::complex<double> value);

}  // namespace vfalg
