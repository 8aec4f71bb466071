#pragma once

#include "vfalg/lie_word.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vfalg {

/// Claim: evaluate(word) == scalar * monomial_field(target).
struct CertifiedMembership {
    MonomialFieldIndex target;
    LieWord word;
    Rational scalar;
};

bool verify_certificate(const CertifiedMembership& cert, const Bindings& bindings);
bool verify_certificate(const CertifiedMembership& cert, WordEvaluator& evaluator);

/// The bracket computed a second way: term by term in ascending order as
/// -(Y(X) - X(Y)), with no shared code path with lie_bracket beyond the
/// polynomial containers. Used to re-verify certificates.
VectorField reference_bracket(const VectorField& x, const VectorField& y);

/// `target: z^(a1,...,an) d/dz<k> ; scalar: <rational> ; word: <word>`
std::string format_record(const CertifiedMembership& cert);

class RecordParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

CertifiedMembership parse_record(std::string_view line, std::size_t dimension);

/// A header line `dim: <n> ; generators: <names>` followed by one record per line.
struct CertificateBundle {
    std::size_t dimension = 0;
    std::vector<std::string> generators;
    std::vector<CertifiedMembership> records;
};

void write_bundle(std::ostream& out, const CertificateBundle& bundle);

struct BundleHeader {
    std::size_t dimension = 0;
    std::vector<std::string> generators;
};

BundleHeader parse_bundle_header(std::string_view line);

struct BundleVerification {
    BundleHeader header;
    std::size_t records = 0;
    std::size_t passed = 0;
    /// `line <k>: <reason>` for every record that did not verify.
    std::vector<std::string> failures;

    bool ok() const { return records > 0 && failures.empty(); }
};

/// Re-reads and re-verifies a bundle with freshly built generator bindings and
/// the reference bracket. Malformed records count as failures; a malformed or
/// missing header throws RecordParseError.
BundleVerification verify_bundle(std::istream& in);

}  // namespace vfalg
