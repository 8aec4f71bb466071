#include "vfalg/lie_word.hpp"

#include <cctype>
#include <limits>
#include <set>

namespace vfalg {

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

}  // namespace

LieWord LieWord::generator(std::string name) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::generator;
    node->name = std::move(name);
    return LieWord(std::move(node));
}

LieWord LieWord::bracket(LieWord left, LieWord right) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::bracket;
    node->size = saturating_add(1, saturating_add(left.node_count(), right.node_count()));
    node->children = {std::move(left), std::move(right)};
    return LieWord(std::move(node));
}

LieWord LieWord::scale(Rational coeff, LieWord word) {
    if (coeff == 0) throw std::invalid_argument("Scale node with zero coefficient");
    auto node = std::make_shared<Node>();
    node->kind = Kind::scale;
    node->coeff = std::move(coeff);
    node->size = saturating_add(1, word.node_count());
    node->children = {std::move(word)};
    return LieWord(std::move(node));
}

LieWord LieWord::sum(std::vector<LieWord> terms) {
    if (terms.size() < 2) throw std::invalid_argument("Sum node needs at least two terms");
    auto node = std::make_shared<Node>();
    node->kind = Kind::sum;
    for (const auto& t : terms) node->size = saturating_add(node->size, t.node_count());
    node->children = std::move(terms);
    return LieWord(std::move(node));
}

bool operator==(const LieWord& a, const LieWord& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.node_count() != b.node_count()) return false;
    switch (a.kind()) {
        case LieWord::Kind::generator: return a.name() == b.name();
        case LieWord::Kind::scale:
            if (a.coefficient() != b.coefficient()) return false;
            break;
        default: break;
    }
    if (a.children().size() != b.children().size()) return false;
    for (std::size_t i = 0; i < a.children().size(); ++i) {
        if (!(a.children()[i] == b.children()[i])) return false;
    }
    return true;
}

LieWord scaled(const Rational& c, LieWord w) {
    if (c == 1) return w;
    return LieWord::scale(c, std::move(w));
}

LieWord sum_of(std::vector<LieWord> terms) {
    if (terms.size() == 1) return std::move(terms.front());
    return LieWord::sum(std::move(terms));
}

Bindings generator_bindings(std::span<const Generator> generators, std::size_t n) {
    Bindings b;
    for (auto g : generators) b.emplace(std::string(generator_name(g)), make_generator(g, n));
    return b;
}

WordEvaluator::WordEvaluator(Bindings bindings, BracketFn bracket_fn)
    : bindings_(std::move(bindings)), bracket_(std::move(bracket_fn)) {
    if (!bindings_.empty()) dimension_ = bindings_.begin()->second.dimension();
    for (const auto& [name, field] : bindings_) {
        if (field.dimension() != dimension_) throw DimensionMismatch(dimension_, field.dimension());
    }
}

const VectorField& WordEvaluator::operator()(const LieWord& word) {
    if (auto it = memo_.find(word.id()); it != memo_.end()) return it->second.second;
    VectorField value(dimension_);
    switch (word.kind()) {
        case LieWord::Kind::generator: {
            auto it = bindings_.find(word.name());
            if (it == bindings_.end()) throw UnboundName(word.name());
            value = it->second;
            break;
        }
        case LieWord::Kind::bracket: {
            const VectorField& left = (*this)(word.left());
            value = bracket_(left, (*this)(word.right()));
            break;
        }
        case LieWord::Kind::scale:
            value = word.coefficient() * (*this)(word.children()[0]);
            break;
        case LieWord::Kind::sum:
            for (const auto& child : word.children()) value += (*this)(child);
            break;
    }
    auto [it, inserted] = memo_.emplace(word.id(), std::make_pair(word, std::move(value)));
    return it->second.second;
}

VectorField evaluate_word(const LieWord& word, const Bindings& bindings) {
    WordEvaluator ev(bindings);
    return ev(word);
}

namespace {

void serialize_into(const LieWord& w, std::string& out) {
    switch (w.kind()) {
        case LieWord::Kind::generator:
            out += w.name();
            break;
        case LieWord::Kind::bracket:
            out += '[';
            serialize_into(w.left(), out);
            out += ", ";
            serialize_into(w.right(), out);
            out += ']';
            break;
        case LieWord::Kind::scale: {
            out += to_string(w.coefficient());
            out += '*';
            const auto& child = w.children()[0];
            bool wrap = child.kind() == LieWord::Kind::scale;
            if (wrap) out += '(';
            serialize_into(child, out);
            if (wrap) out += ')';
            break;
        }
        case LieWord::Kind::sum: {
            out += '(';
            bool first = true;
            for (const auto& child : w.children()) {
                if (!first) out += " + ";
                first = false;
                serialize_into(child, out);
            }
            out += ')';
            break;
        }
    }
}

class WordParser {
public:
    explicit WordParser(std::string_view text) : text_(text) {}

    LieWord parse() {
        LieWord w = word();
        skip_space();
        if (!at_end()) fail("'+' or end of input");
        return w;
    }

private:
    LieWord word() {
        std::vector<LieWord> terms;
        terms.push_back(term());
        while (true) {
            skip_space();
            if (!accept('+')) break;
            terms.push_back(term());
        }
        return sum_of(std::move(terms));
    }

    LieWord term() {
        skip_space();
        if (!at_end() && (peek() == '-' || std::isdigit(static_cast<unsigned char>(peek())))) {
            std::size_t start = pos_;
            Rational c = rational();
            skip_space();
            if (!accept('*')) fail("'*'");
            if (c == 0) {
                pos_ = start;
                fail("a nonzero coefficient");
            }
            return LieWord::scale(std::move(c), atom());
        }
        return atom();
    }

    LieWord atom() {
        skip_space();
        if (accept('[')) {
            LieWord left = word();
            skip_space();
            if (!accept(',')) fail("','");
            LieWord right = word();
            skip_space();
            if (!accept(']')) fail("']'");
            return LieWord::bracket(std::move(left), std::move(right));
        }
        if (accept('(')) {
            LieWord inner = word();
            skip_space();
            if (!accept(')')) fail("')'");
            return inner;
        }
        if (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) {
            std::size_t start = pos_;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '\'')) ++pos_;
            return LieWord::generator(std::string(text_.substr(start, pos_ - start)));
        }
        fail("a generator name, '[', '(' or a rational");
    }

    Rational rational() {
        std::size_t start = pos_;
        accept('-');
        digits();
        if (accept('/')) digits();
        std::string_view token = text_.substr(start, pos_ - start);
        try {
            return parse_rational(token);
        } catch (const std::invalid_argument&) {
            pos_ = start;
            fail("a rational with positive denominator");
        }
    }

    void digits() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (pos_ == start) fail("a digit");
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
    [[noreturn]] void fail(const std::string& expected) const {
        throw WordParseError(pos_ + 1, expected, at_end() ? "end of input" : std::string("'") + peek() + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void collect_generators(const LieWord& w, std::set<std::string>& names, std::set<const void*>& seen) {
    if (!seen.insert(w.id()).second) return;
    if (w.kind() == LieWord::Kind::generator) {
        names.insert(w.name());
        return;
    }
    for (const auto& c : w.children()) collect_generators(c, names, seen);
}

}  // namespace

std::string serialize_word(const LieWord& word) {
    std::string out;
    serialize_into(word, out);
    return out;
}

WordParseError::WordParseError(std::size_t column, std::string expected, std::string found)
    : std::runtime_error("parse error at column " + std::to_string(column) + ": expected " + expected + ", found " +
                         found),
      column_(column),
      expected_(std::move(expected)) {}

LieWord parse_word(std::string_view text) { return WordParser(text).parse(); }

std::vector<std::string> word_generators(const LieWord& word) {
    std::set<std::string> names;
    std::set<const void*> seen;
    collect_generators(word, names, seen);
    return {names.begin(), names.end()};
}

}  // namespace vfalg
