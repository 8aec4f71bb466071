#pragma once

#include "vfalg/certificate.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace vfalg {

/// Coordinates of a field in the basis of monomial fields z^alpha d/dz_k with
/// |alpha| <= cap. Column 0 is the greatest monomial field in pivot order:
/// exponents in descending graded-lex order, ties broken by direction
/// (d/dz1 first).
class MonomialColumns {
public:
    MonomialColumns(std::size_t n, unsigned cap);

    std::size_t dimension() const { return n_; }
    unsigned cap() const { return cap_; }
    std::size_t size() const { return exponents_.size() * n_; }

    /// Throws DegreeCapExceeded if |alpha| > cap.
    std::uint32_t column(const ExponentVector& exponent, Coordinate direction) const;
    MonomialFieldIndex index(std::uint32_t column) const;

private:
    struct Hash {
        std::size_t operator()(const ExponentVector& e) const;
    };

    std::size_t n_;
    unsigned cap_;
    std::vector<ExponentVector> exponents_;
    std::unordered_map<ExponentVector, std::uint32_t, Hash> lookup_;
};

struct SparseEntry {
    std::uint32_t column;
    Rational coeff;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};
using SparseVector = std::vector<SparseEntry>;  // sorted by column, no zeros

/// Throws DegreeCapExceeded when deg x > cap.
SparseVector coordinate_vector(const VectorField& x, const MonomialColumns& columns);
VectorField field_from_coordinates(const SparseVector& v, const MonomialColumns& columns);

struct NamedField {
    std::string name;
    VectorField field;
};

struct ClosureOptions {
    unsigned cap = 0;
    unsigned max_rounds = 64;
    /// Serialized size limit for any single witness or certificate.
    std::uint64_t witness_node_limit = 1'000'000;
    /// Re-check the echelon invariants after every insertion.
    bool debug_checks = false;
    /// Worker threads for bracket evaluation; 0 picks hardware concurrency.
    unsigned threads = 0;
};

class WitnessTooLarge : public std::runtime_error {
public:
    WitnessTooLarge(std::uint64_t nodes, std::uint64_t limit)
        : std::runtime_error("witness has " + std::to_string(nodes) + " nodes, limit is " + std::to_string(limit)) {}
};

class CapBelowGeneratorDegree : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A field together with a word over the generators that evaluates to it.
struct WitnessedField {
    VectorField field;
    LieWord word;
};

/// Reduced row echelon basis of the degree-capped Lie algebra generated by a
/// set of fields. Every basis vector is a rational combination of "atoms":
/// the generators and the brackets that enlarged the span when they were
/// found. Atom words are pure bracket trees, so witnesses are flat sums.
class ClosureBasis {
public:
    struct Entry {
        std::uint32_t pivot;
        SparseVector vector;
        SparseVector combination;  // over atom indices
    };

    ClosureBasis(std::size_t n, unsigned cap, std::vector<std::string> generator_names, std::uint64_t witness_limit);

    std::size_t dimension() const { return columns_.dimension(); }
    unsigned cap() const { return columns_.cap(); }
    const MonomialColumns& columns() const { return columns_; }
    const std::vector<std::string>& generator_names() const { return generator_names_; }
    std::size_t size() const { return rows_.size(); }

    /// Entries in increasing pivot column order.
    std::vector<const Entry*> entries() const;
    MonomialFieldIndex pivot(const Entry& e) const { return columns_.index(e.pivot); }
    VectorField field(const Entry& e) const { return field_from_coordinates(e.vector, columns_); }
    LieWord witness(const Entry& e) const;

    std::span<const WitnessedField> atoms() const { return atoms_; }

    /// Result of reducing a field against the basis.
    struct Membership {
        enum class Verdict { member, zero_field, not_in_span };
        Verdict verdict;
        /// For members: evaluate(word) == scalar * x.
        std::optional<LieWord> word;
        Rational scalar;
    };

    /// Throws DegreeCapExceeded if deg x > cap, WitnessTooLarge if the
    /// certificate would exceed the witness limit.
    Membership membership(const VectorField& x) const;
    std::optional<CertifiedMembership> certify(const MonomialFieldIndex& target) const;

    /// Checks ordering, unit pivots and full reduction. Returns a description
    /// of the first violation.
    std::optional<std::string> check_invariants() const;

    /// Reduces v in place against the basis; combination (if given) tracks the
    /// atom coefficients of the subtracted rows.
    void reduce(SparseVector& v, SparseVector* combination) const;

    /// Adds a nonzero remainder as a new row and an atom; returns false (and
    /// changes nothing) if the remainder is zero.
    bool insert(WitnessedField atom, SparseVector reduced, SparseVector combination);

private:
    LieWord combination_word(const SparseVector& combination, Rational& scalar) const;

    MonomialColumns columns_;
    std::vector<std::string> generator_names_;
    std::uint64_t witness_limit_;
    std::vector<WitnessedField> atoms_;
    std::map<std::uint32_t, Entry> rows_;  // keyed by pivot column
};

struct ClosureReport {
    std::vector<std::string> generator_names;
    std::size_t dimension = 0;
    unsigned cap = 0;
    std::size_t basis_size = 0;
    unsigned rounds = 0;
    bool saturated = false;
    std::uint64_t brackets_computed = 0;
    std::uint64_t brackets_skipped_by_degree = 0;
};

struct ClosureResult {
    ClosureBasis basis;
    ClosureReport report;
};

/// Degree-capped closure: brackets every pair (new atom, earlier atom) whose a
/// priori degree bound deg A + deg B - 1 is within the cap, round by round,
/// until a round adds nothing or max_rounds is reached. Deterministic for any
/// thread count.
ClosureResult closure(std::span<const NamedField> generators, const ClosureOptions& options);

/// U, V, W (`UVW`) or U, V', V'' (`UVpVpp`) in dimension n.
std::vector<Generator> generator_set(std::string_view name);
std::vector<NamedField> named_generators(std::span<const Generator> set, std::size_t n);
/// d + max generator degree.
unsigned default_cap(std::span<const NamedField> generators, unsigned d);

/// All monomial field indices with |alpha| <= d (alpha_k = 0 when
/// shear_only), by degree, then descending lex exponent, then direction.
std::vector<MonomialFieldIndex> monomial_indices(std::size_t n, unsigned d, bool shear_only);

struct CoverageReport {
    unsigned degree = 0;
    bool shear_only = false;
    std::vector<MonomialFieldIndex> covered;
    std::vector<MonomialFieldIndex> missing;
    std::vector<CertifiedMembership> certificates;

    bool complete() const { return missing.empty(); }
};

/// Throws DegreeCapExceeded if d > basis cap.
CoverageReport monomial_coverage(const ClosureBasis& basis, unsigned d, bool shear_only);

/// Structured text report: header, basis entries, coverage sections.
void write_closure_report(std::ostream& out, const ClosureResult& result, std::span<const CoverageReport> coverage);
/// The same content as flat `key=value` lines.
void write_closure_record(std::ostream& out, const ClosureResult& result, std::span<const CoverageReport> coverage);

}  // namespace vfalg
