#include "vfalg/closure.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <thread>

namespace vfalg {

namespace {

void enumerate_exponents(std::size_t n, unsigned max_degree, std::vector<ExponentVector>& out) {
    ExponentVector e(n);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned remaining) {
        if (i == n) {
            out.push_back(e);
            return;
        }
        for (unsigned p = 0; p <= remaining; ++p) {
            e[i] = p;
            rec(i + 1, remaining - p);
        }
        e[i] = 0;
    };
    rec(0, max_degree);
}

// Sorts by column and merges duplicates, dropping zeros.
void normalize(SparseVector& v) {
    std::sort(v.begin(), v.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.column < b.column; });
    SparseVector out;
    out.reserve(v.size());
    for (auto& e : v) {
        if (!out.empty() && out.back().column == e.column) {
            out.back().coeff += e.coeff;
        } else {
            if (!out.empty() && out.back().coeff == 0) out.pop_back();
            out.push_back(std::move(e));
        }
    }
    if (!out.empty() && out.back().coeff == 0) out.pop_back();
    v = std::move(out);
}

const Rational* find_coeff(const SparseVector& v, std::uint32_t column) {
    auto it = std::lower_bound(v.begin(), v.end(), column,
                               [](const SparseEntry& e, std::uint32_t c) { return e.column < c; });
    return it != v.end() && it->column == column ? &it->coeff : nullptr;
}

// v -= c * w
void subtract_scaled(SparseVector& v, const Rational& c, const SparseVector& w) {
    v.reserve(v.size() + w.size());
    for (const auto& e : w) v.push_back({e.column, -c * e.coeff});
    normalize(v);
}

}  // namespace

std::size_t MonomialColumns::Hash::operator()(const ExponentVector& e) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : e) h = (h ^ x) * 1099511628211ull;
    return h;
}

MonomialColumns::MonomialColumns(std::size_t n, unsigned cap) : n_(n), cap_(cap) {
    enumerate_exponents(n, cap, exponents_);
    std::sort(exponents_.begin(), exponents_.end(),
              [](const ExponentVector& a, const ExponentVector& b) { return graded_lex_compare(a, b) > 0; });
    for (std::uint32_t i = 0; i < exponents_.size(); ++i) lookup_.emplace(exponents_[i], i);
}

std::uint32_t MonomialColumns::column(const ExponentVector& exponent, Coordinate direction) const {
    if (exponent.size() != n_) throw DimensionMismatch(n_, exponent.size());
    if (direction.index < 1 || direction.index > n_) throw CoordinateOutOfRange(direction.index, n_);
    auto it = lookup_.find(exponent);
    if (it == lookup_.end()) throw DegreeCapExceeded(static_cast<int>(exponent.total_degree()), cap_);
    return static_cast<std::uint32_t>(it->second * n_ + direction.offset());
}

MonomialFieldIndex MonomialColumns::index(std::uint32_t column) const {
    return {exponents_.at(column / n_), Coordinate{column % n_ + 1}};
}

SparseVector coordinate_vector(const VectorField& x, const MonomialColumns& columns) {
    if (x.dimension() != columns.dimension()) throw DimensionMismatch(columns.dimension(), x.dimension());
    if (x.degree() > static_cast<int>(columns.cap())) throw DegreeCapExceeded(x.degree(), columns.cap());
    SparseVector v;
    for (std::size_t k = 0; k < x.dimension(); ++k) {
        for (const auto& t : x.components()[k].terms()) v.push_back({columns.column(t.exponent, Coordinate{k + 1}), t.coeff});
    }
    std::sort(v.begin(), v.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.column < b.column; });
    return v;
}

VectorField field_from_coordinates(const SparseVector& v, const MonomialColumns& columns) {
    const std::size_t n = columns.dimension();
    std::vector<std::vector<Polynomial::Term>> terms(n);
    for (const auto& e : v) {
        auto idx = columns.index(e.column);
        terms[idx.direction.offset()].push_back({idx.exponent, e.coeff});
    }
    std::vector<Polynomial> comps;
    for (auto& t : terms) comps.emplace_back(n, std::move(t));
    return VectorField(std::move(comps));
}

ClosureBasis::ClosureBasis(std::size_t n, unsigned cap, std::vector<std::string> generator_names,
                           std::uint64_t witness_limit)
    : columns_(n, cap), generator_names_(std::move(generator_names)), witness_limit_(witness_limit) {}

std::vector<const ClosureBasis::Entry*> ClosureBasis::entries() const {
    std::vector<const Entry*> out;
    out.reserve(rows_.size());
    for (const auto& [pivot, row] : rows_) out.push_back(&row);
    return out;
}

LieWord ClosureBasis::witness(const Entry& e) const {
    std::vector<LieWord> terms;
    for (const auto& c : e.combination) terms.push_back(scaled(c.coeff, atoms_.at(c.column).word));
    LieWord w = sum_of(std::move(terms));
    if (w.node_count() > witness_limit_) throw WitnessTooLarge(w.node_count(), witness_limit_);
    return w;
}

LieWord ClosureBasis::combination_word(const SparseVector& combination, Rational& scalar) const {
    const Rational& lead = combination.front().coeff;
    std::vector<LieWord> terms;
    terms.reserve(combination.size());
    for (const auto& c : combination) terms.push_back(scaled(c.coeff / lead, atoms_.at(c.column).word));
    scalar = 1 / lead;
    LieWord w = sum_of(std::move(terms));
    if (w.node_count() > witness_limit_) throw WitnessTooLarge(w.node_count(), witness_limit_);
    return w;
}

void ClosureBasis::reduce(SparseVector& v, SparseVector* combination) const {
    std::vector<std::pair<const Entry*, Rational>> hits;
    for (const auto& e : v) {
        if (auto it = rows_.find(e.column); it != rows_.end()) hits.emplace_back(&it->second, e.coeff);
    }
    if (hits.empty()) return;
    // Rows are fully reduced, so subtracting them never creates a new pivot
    // entry: one pass over the pivots present in v suffices.
    for (const auto& [row, c] : hits) {
        v.reserve(v.size() + row->vector.size());
        for (const auto& e : row->vector) v.push_back({e.column, -c * e.coeff});
        if (combination) {
            for (const auto& e : row->combination) combination->push_back({e.column, -c * e.coeff});
        }
    }
    normalize(v);
    if (combination) normalize(*combination);
}

bool ClosureBasis::insert(WitnessedField atom, SparseVector reduced, SparseVector combination) {
    if (reduced.empty()) return false;
    if (atom.word.node_count() > witness_limit_) throw WitnessTooLarge(atom.word.node_count(), witness_limit_);
    const std::uint32_t pivot = reduced.front().column;
    const Rational inverse = 1 / reduced.front().coeff;
    for (auto& e : reduced) e.coeff *= inverse;
    for (auto& e : combination) e.coeff *= inverse;
    for (auto& [p, row] : rows_) {
        if (const Rational* c = find_coeff(row.vector, pivot)) {
            Rational factor = *c;
            subtract_scaled(row.vector, factor, reduced);
            subtract_scaled(row.combination, factor, combination);
        }
    }
    rows_.emplace(pivot, Entry{pivot, std::move(reduced), std::move(combination)});
    atoms_.push_back(std::move(atom));
    return true;
}

ClosureBasis::Membership ClosureBasis::membership(const VectorField& x) const {
    if (x.is_zero()) return {Membership::Verdict::zero_field, std::nullopt, 0};
    SparseVector v = coordinate_vector(x, columns_);
    SparseVector combination;
    reduce(v, &combination);
    if (!v.empty()) return {Membership::Verdict::not_in_span, std::nullopt, 0};
    // x = sum of the subtracted rows, and the combination tracked their
    // negated atom coefficients.
    for (auto& e : combination) e.coeff = -e.coeff;
    Rational scalar;
    LieWord w = combination_word(combination, scalar);
    return {Membership::Verdict::member, std::move(w), std::move(scalar)};
}

std::optional<CertifiedMembership> ClosureBasis::certify(const MonomialFieldIndex& target) const {
    auto m = membership(monomial_field(target));
    if (m.verdict != Membership::Verdict::member) return std::nullopt;
    return CertifiedMembership{target, std::move(*m.word), std::move(m.scalar)};
}

std::optional<std::string> ClosureBasis::check_invariants() const {
    std::optional<std::uint32_t> previous;
    for (const auto& [pivot, row] : rows_) {
        if (row.vector.empty() || row.vector.front().column != pivot) return "row pivot is not its leading column";
        if (row.vector.front().coeff != 1) return "pivot coefficient is not 1";
        if (previous && *previous >= pivot) return "pivots not strictly increasing";
        previous = pivot;
        for (std::size_t i = 1; i < row.vector.size(); ++i) {
            if (row.vector[i].column <= row.vector[i - 1].column) return "row entries not sorted";
            if (row.vector[i].coeff == 0) return "stored zero coefficient";
            if (rows_.count(row.vector[i].column)) return "row not reduced at another pivot";
        }
    }
    if (rows_.size() != atoms_.size()) return "atom count differs from basis size";
    return std::nullopt;
}

std::vector<Generator> generator_set(std::string_view name) {
    if (name == "UVW") return {Generator::U, Generator::V, Generator::W};
    if (name == "UVpVpp") return {Generator::U, Generator::Vprime, Generator::Vdoubleprime};
    throw std::invalid_argument("unknown generator set '" + std::string(name) + "' (expected UVW or UVpVpp)");
}

std::vector<NamedField> named_generators(std::span<const Generator> set, std::size_t n) {
    std::vector<NamedField> out;
    for (auto g : set) out.push_back({std::string(generator_name(g)), make_generator(g, n)});
    return out;
}

unsigned default_cap(std::span<const NamedField> generators, unsigned d) {
    int max_degree = 0;
    for (const auto& g : generators) max_degree = std::max(max_degree, g.field.degree());
    return d + static_cast<unsigned>(max_degree);
}

ClosureResult closure(std::span<const NamedField> generators, const ClosureOptions& options) {
    if (generators.empty()) throw std::invalid_argument("closure needs at least one generator");
    const std::size_t n = generators.front().field.dimension();
    std::vector<std::string> names;
    for (const auto& g : generators) {
        if (g.field.dimension() != n) throw DimensionMismatch(n, g.field.dimension());
        if (g.field.degree() > static_cast<int>(options.cap)) {
            throw CapBelowGeneratorDegree("cap " + std::to_string(options.cap) + " is below the degree " +
                                          std::to_string(g.field.degree()) + " of generator " + g.name);
        }
        names.push_back(g.name);
    }

    ClosureResult result{ClosureBasis(n, options.cap, names, options.witness_node_limit), {}};
    ClosureBasis& basis = result.basis;
    ClosureReport& report = result.report;
    report.generator_names = names;
    report.dimension = n;
    report.cap = options.cap;

    auto try_insert = [&](WitnessedField atom) {
        SparseVector v = coordinate_vector(atom.field, basis.columns());
        basis.reduce(v, nullptr);
        if (v.empty()) return false;
        // Redo with combination tracking only for the rare useful results.
        v = coordinate_vector(atom.field, basis.columns());
        SparseVector combination{{static_cast<std::uint32_t>(basis.atoms().size()), Rational(1)}};
        basis.reduce(v, &combination);
        basis.insert(std::move(atom), std::move(v), std::move(combination));
        if (options.debug_checks) {
            if (auto violation = basis.check_invariants()) throw std::logic_error("closure invariant: " + *violation);
        }
        return true;
    };

    std::vector<std::size_t> frontier;
    for (const auto& g : generators) {
        if (try_insert({g.field, LieWord::generator(g.name)})) frontier.push_back(basis.atoms().size() - 1);
    }

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    constexpr std::size_t kChunk = 256;

    while (!frontier.empty() && report.rounds < options.max_rounds) {
        ++report.rounds;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t a : frontier) {
            const int deg_a = basis.atoms()[a].field.degree();
            for (std::size_t b = 0; b < a; ++b) {
                const int deg_b = basis.atoms()[b].field.degree();
                if (deg_a + deg_b - 1 <= static_cast<int>(options.cap)) {
                    pairs.emplace_back(a, b);
                } else {
                    ++report.brackets_skipped_by_degree;
                }
            }
        }

        std::vector<std::size_t> next;
        std::vector<VectorField> brackets;
        for (std::size_t start = 0; start < pairs.size(); start += kChunk) {
            const std::size_t count = std::min(kChunk, pairs.size() - start);
            brackets.assign(count, VectorField(n));
            // Atoms are only appended after the chunk is evaluated, so the
            // workers read a stable prefix.
            auto work = [&](std::size_t first, std::size_t stride) {
                for (std::size_t i = first; i < count; i += stride) {
                    const auto& [a, b] = pairs[start + i];
                    brackets[i] = lie_bracket(basis.atoms()[a].field, basis.atoms()[b].field);
                }
            };
            if (threads > 1 && count > 1) {
                std::vector<std::jthread> pool;
                for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
            } else {
                work(0, 1);
            }
            report.brackets_computed += count;
            for (std::size_t i = 0; i < count; ++i) {
                if (brackets[i].is_zero()) continue;
                const auto& [a, b] = pairs[start + i];
                LieWord w = LieWord::bracket(basis.atoms()[a].word, basis.atoms()[b].word);
                if (try_insert({std::move(brackets[i]), std::move(w)})) next.push_back(basis.atoms().size() - 1);
            }
        }
        frontier = std::move(next);
    }
    report.saturated = frontier.empty();
    report.basis_size = basis.size();
    return result;
}

std::vector<MonomialFieldIndex> monomial_indices(std::size_t n, unsigned d, bool shear_only) {
    std::vector<ExponentVector> exps;
    enumerate_exponents(n, d, exps);
    std::sort(exps.begin(), exps.end(), [](const ExponentVector& a, const ExponentVector& b) {
        if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
        return a > b;
    });
    std::vector<MonomialFieldIndex> out;
    for (const auto& e : exps) {
        for (std::size_t k = 1; k <= n; ++k) {
            MonomialFieldIndex idx{e, Coordinate{k}};
            if (!shear_only || is_shear_monomial(idx)) out.push_back(std::move(idx));
        }
    }
    return out;
}

CoverageReport monomial_coverage(const ClosureBasis& basis, unsigned d, bool shear_only) {
    if (d > basis.cap()) throw DegreeCapExceeded(static_cast<int>(d), basis.cap());
    CoverageReport report;
    report.degree = d;
    report.shear_only = shear_only;
    for (auto& idx : monomial_indices(basis.dimension(), d, shear_only)) {
        std::optional<CertifiedMembership> cert;
        try {
            cert = basis.certify(idx);
        } catch (const WitnessTooLarge&) {
        }
        if (cert) {
            report.covered.push_back(idx);
            report.certificates.push_back(std::move(*cert));
        } else {
            report.missing.push_back(std::move(idx));
        }
    }
    return report;
}

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

std::string index_list(const std::vector<MonomialFieldIndex>& items) {
    std::vector<std::string> parts;
    for (const auto& i : items) parts.push_back(to_string(i));
    return join(parts, "; ");
}

}  // namespace

void write_closure_report(std::ostream& out, const ClosureResult& result, std::span<const CoverageReport> coverage) {
    const auto& r = result.report;
    out << "# closure report\n";
    out << "generators: " << join(r.generator_names, ", ") << '\n';
    out << "dimension: " << r.dimension << '\n';
    out << "cap: " << r.cap << '\n';
    out << "rounds: " << r.rounds << '\n';
    out << "saturated: " << (r.saturated ? "yes" : "no") << '\n';
    out << "basis_size: " << r.basis_size << '\n';
    out << "brackets_computed: " << r.brackets_computed << '\n';
    out << "brackets_skipped_by_degree: " << r.brackets_skipped_by_degree << '\n';
    out << "\n## basis\n";
    std::size_t i = 0;
    for (const auto* e : result.basis.entries()) {
        out << '[' << i++ << "] pivot: " << to_string(result.basis.pivot(*e)) << '\n';
        out << "    field: " << to_string(result.basis.field(*e)) << '\n';
        out << "    witness: " << serialize_word(result.basis.witness(*e)) << '\n';
    }
    for (const auto& c : coverage) {
        out << "\n## coverage degree=" << c.degree << " shear_only=" << (c.shear_only ? "yes" : "no") << '\n';
        out << "covered: " << c.covered.size() << '/' << c.covered.size() + c.missing.size() << '\n';
        out << "missing: " << (c.missing.empty() ? "(none)" : index_list(c.missing)) << '\n';
    }
}

void write_closure_record(std::ostream& out, const ClosureResult& result, std::span<const CoverageReport> coverage) {
    const auto& r = result.report;
    out << "generators=" << join(r.generator_names, ",") << '\n';
    out << "dimension=" << r.dimension << '\n';
    out << "cap=" << r.cap << '\n';
    out << "rounds=" << r.rounds << '\n';
    out << "saturated=" << (r.saturated ? "true" : "false") << '\n';
    out << "basis_size=" << r.basis_size << '\n';
    out << "brackets_computed=" << r.brackets_computed << '\n';
    out << "brackets_skipped_by_degree=" << r.brackets_skipped_by_degree << '\n';
    std::size_t i = 0;
    for (const auto* e : result.basis.entries()) {
        out << "basis." << i << ".pivot=" << to_string(result.basis.pivot(*e)) << '\n';
        out << "basis." << i << ".field=" << to_string(result.basis.field(*e)) << '\n';
        out << "basis." << i << ".witness=" << serialize_word(result.basis.witness(*e)) << '\n';
        ++i;
    }
    for (std::size_t c = 0; c < coverage.size(); ++c) {
        const auto& cov = coverage[c];
        out << "coverage." << c << ".degree=" << cov.degree << '\n';
        out << "coverage." << c << ".shear_only=" << (cov.shear_only ? "true" : "false") << '\n';
        out << "coverage." << c << ".covered=" << cov.covered.size() << '\n';
        out << "coverage." << c << ".total=" << cov.covered.size() + cov.missing.size() << '\n';
        out << "coverage." << c << ".missing=" << index_list(cov.missing) << '\n';
    }
}

}  // namespace vfalg
