#include "vfalg/certificate.hpp"

#include <cctype>
#include <istream>
#include <map>
#include <ostream>

namespace vfalg {

bool verify_certificate(const CertifiedMembership& cert, WordEvaluator& evaluator) {
    if (cert.scalar == 0) return false;
    if (cert.target.dimension() != evaluator.dimension()) return false;
    try {
        return evaluator(cert.word) == cert.scalar * monomial_field(cert.target);
    } catch (const UnboundName&) {
        return false;
    } catch (const std::out_of_range&) {
        return false;
    }
}

bool verify_certificate(const CertifiedMembership& cert, const Bindings& bindings) {
    WordEvaluator ev(bindings);
    return verify_certificate(cert, ev);
}

VectorField reference_bracket(const VectorField& x, const VectorField& y) {
    const std::size_t n = x.dimension();
    if (y.dimension() != n) throw DimensionMismatch(n, y.dimension());
    std::vector<std::map<ExponentVector, Rational>> acc(n);
    // Adds sign * a * d/dz_i(b) into component j, walking terms from the back.
    auto accumulate = [&](const VectorField& a, const VectorField& b, int sign) {
        for (std::size_t j = 0; j < n; ++j) {
            auto b_terms = b.components()[j].terms();
            for (auto bt = b_terms.rbegin(); bt != b_terms.rend(); ++bt) {
                for (std::size_t i = 0; i < n; ++i) {
                    auto power = bt->exponent[i];
                    if (power == 0) continue;
                    auto a_terms = a.components()[i].terms();
                    for (auto at = a_terms.rbegin(); at != a_terms.rend(); ++at) {
                        ExponentVector e = at->exponent + bt->exponent;
                        e[i] -= 1;
                        Rational term = at->coeff * bt->coeff * power;
                        if (sign < 0) {
                            acc[j][e] -= term;
                        } else {
                            acc[j][e] += term;
                        }
                    }
                }
            }
        }
    };
    accumulate(y, x, 1);
    accumulate(x, y, -1);
    std::vector<Polynomial> comps;
    for (auto& m : acc) {
        std::vector<Polynomial::Term> terms;
        for (auto& [e, c] : m) terms.push_back({e, -c});
        comps.emplace_back(n, std::move(terms));
    }
    return VectorField(std::move(comps));
}

std::string format_record(const CertifiedMembership& cert) {
    return "target: " + to_string(cert.target) + " ; scalar: " + to_string(cert.scalar) +
           " ; word: " + serialize_word(cert.word);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Splits "key: value" and checks the key.
std::string_view field_value(std::string_view part, std::string_view key) {
    part = trim(part);
    if (part.substr(0, key.size()) != key || part.size() <= key.size() || part[key.size()] != ':') {
        throw RecordParseError("expected field '" + std::string(key) + ":'");
    }
    return trim(part.substr(key.size() + 1));
}

MonomialFieldIndex parse_target(std::string_view text, std::size_t dimension) {
    // z^(a1,...,an) d/dz<k>
    if (text.substr(0, 3) != "z^(") throw RecordParseError("target must start with 'z^('");
    auto close = text.find(')');
    if (close == std::string_view::npos) throw RecordParseError("unterminated exponent list");
    std::vector<ExponentVector::value_type> exps;
    std::string_view list = text.substr(3, close - 3);
    while (true) {
        auto comma = list.find(',');
        std::string_view item = trim(list.substr(0, comma));
        if (item.empty() || item.find_first_not_of("0123456789") != std::string_view::npos) {
            throw RecordParseError("malformed exponent '" + std::string(item) + "'");
        }
        exps.push_back(static_cast<ExponentVector::value_type>(std::stoul(std::string(item))));
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    if (exps.size() != dimension) throw RecordParseError("exponent list has wrong length");
    std::string_view rest = trim(text.substr(close + 1));
    if (rest.substr(0, 4) != "d/dz") throw RecordParseError("expected 'd/dz<k>'");
    std::string_view digits = rest.substr(4);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
        throw RecordParseError("malformed direction");
    }
    std::size_t k = std::stoul(std::string(digits));
    if (k < 1 || k > dimension) throw RecordParseError("direction out of range");
    return {ExponentVector(std::span<const ExponentVector::value_type>(exps)), Coordinate{k}};
}

}  // namespace

CertifiedMembership parse_record(std::string_view line, std::size_t dimension) {
    auto first = line.find(" ; ");
    auto second = first == std::string_view::npos ? first : line.find(" ; ", first + 3);
    if (second == std::string_view::npos) throw RecordParseError("record needs three ' ; '-separated fields");
    auto target = parse_target(field_value(line.substr(0, first), "target"), dimension);
    Rational scalar;
    try {
        scalar = parse_rational(field_value(line.substr(first + 3, second - first - 3), "scalar"));
    } catch (const std::invalid_argument& e) {
        throw RecordParseError(e.what());
    }
    try {
        LieWord word = parse_word(field_value(line.substr(second + 3), "word"));
        return {std::move(target), std::move(word), std::move(scalar)};
    } catch (const WordParseError& e) {
        throw RecordParseError(std::string("word: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw RecordParseError(std::string("word: ") + e.what());
    }
}

void write_bundle(std::ostream& out, const CertificateBundle& bundle) {
    out << "dim: " << bundle.dimension << " ; generators: ";
    for (std::size_t i = 0; i < bundle.generators.size(); ++i) out << (i ? ", " : "") << bundle.generators[i];
    out << '\n';
    for (const auto& r : bundle.records) out << format_record(r) << '\n';
}

BundleHeader parse_bundle_header(std::string_view line) {
    auto sep = line.find(" ; ");
    if (sep == std::string_view::npos) throw RecordParseError("header must be 'dim: <n> ; generators: <names>'");
    BundleHeader h;
    std::string_view dim = field_value(line.substr(0, sep), "dim");
    if (dim.empty() || dim.find_first_not_of("0123456789") != std::string_view::npos) {
        throw RecordParseError("malformed dimension");
    }
    h.dimension = std::stoul(std::string(dim));
    std::string_view names = field_value(line.substr(sep + 3), "generators");
    while (!names.empty()) {
        auto comma = names.find(',');
        std::string_view name = trim(names.substr(0, comma));
        if (name.empty()) throw RecordParseError("empty generator name");
        h.generators.emplace_back(name);
        if (comma == std::string_view::npos) break;
        names.remove_prefix(comma + 1);
    }
    return h;
}

BundleVerification verify_bundle(std::istream& in) {
    BundleVerification result;
    std::string line;
    if (!std::getline(in, line)) throw RecordParseError("empty bundle");
    result.header = parse_bundle_header(line);

    std::vector<Generator> gens;
    for (const auto& name : result.header.generators) {
        auto g = generator_from_name(name);
        if (!g) throw RecordParseError("unknown generator '" + name + "'");
        gens.push_back(*g);
    }
    WordEvaluator evaluator(generator_bindings(gens, result.header.dimension), reference_bracket);

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++result.records;
        try {
            auto cert = parse_record(line, result.header.dimension);
            if (verify_certificate(cert, evaluator)) {
                ++result.passed;
            } else {
                result.failures.push_back("line " + std::to_string(line_no) + ": word does not evaluate to scalar * target");
            }
        } catch (const RecordParseError& e) {
            result.failures.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return result;
}

}  // namespace vfalg
