#pragma once

#include "vfalg/certificate.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vfalg {

enum class Outcome { scripted, fallback, failed };

struct TargetResult {
    MonomialFieldIndex target;
    Outcome outcome;
    std::string note;
};

enum class IdentityVerdict { exact, scalar_mismatch, structural_mismatch };

/// One displayed identity (or a family of instances of it) evaluated on both
/// sides. `displayed` distinguishes the identity as printed from the variant
/// the scripts actually use.
struct IdentityCheck {
    std::string label;
    bool displayed = true;
    IdentityVerdict verdict = IdentityVerdict::exact;
    std::optional<Rational> displayed_scalar;
    std::optional<Rational> computed_scalar;
    /// Right-hand side as displayed and left-hand side as computed; for
    /// families, the first instance that did not match exactly.
    std::string expected;
    std::string computed;
    std::string note;
    std::size_t instances = 1;
    std::size_t mismatches = 0;
};

struct StepReport {
    int theorem = 0;
    int step = 0;
    std::vector<TargetResult> targets;
    std::vector<IdentityCheck> identities;
    std::vector<std::string> discrepancies;
};

struct ScriptOptions {
    /// Closure cap for fallback targets; defaults to d + max generator degree.
    std::optional<unsigned> fallback_cap;
    unsigned max_rounds = 64;
};

struct ScriptResult {
    std::vector<CertifiedMembership> certificates;
    std::vector<StepReport> steps;
    std::vector<MonomialFieldIndex> failed;

    bool ok() const { return failed.empty(); }
};

/// Certificates over {U, V, W} for every monomial field of degree <= d,
/// built along the four-step construction; targets the construction cannot
/// reach come from closure membership.
ScriptResult theorem1_script(std::size_t n, unsigned d, const ScriptOptions& options = {});

/// Certificates over {U, V', V''} for every monomial shear field of degree <= d.
ScriptResult theorem2_script(std::size_t n, unsigned d, const ScriptOptions& options = {});

struct IdentityOptions {
    unsigned max_p = 5;
    unsigned max_f_degree = 3;
};

/// Evaluates every displayed identity of both constructions in dimension n.
std::vector<StepReport> check_step_identities(std::size_t n, const IdentityOptions& options = {});

/// [d/dz_l, [z_k^2 d/dz_l, [z_l^2 d/dz_k, z_k^p f d/dz_l]]] = 2(p+2) z_k^(p+1) f d/dz_l
/// over all k != l, min_p <= p <= max_p and monomials f of degree <= max_f_degree
/// in the remaining variables.
IdentityCheck audit_shear_raising_identity(std::size_t n, unsigned min_p, unsigned max_p, unsigned max_f_degree);

std::string to_string(Outcome outcome);
std::string to_string(IdentityVerdict verdict);
void write_step_reports(std::ostream& out, std::span<const StepReport> reports);

}  // namespace vfalg
