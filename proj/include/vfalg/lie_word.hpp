#pragma once

#include "vfalg/vector_field.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vfalg {

/// Expression tree over named generators: the certificate language.
///
/// Nodes are immutable and shared, so a word built from other words costs
/// O(1) memory. Serialization always writes the full tree.
class LieWord {
public:
    enum class Kind { generator, bracket, scale, sum };

    static LieWord generator(std::string name);
    static LieWord bracket(LieWord left, LieWord right);
    /// Throws std::invalid_argument for a zero coefficient.
    static LieWord scale(Rational coeff, LieWord word);
    /// Throws std::invalid_argument for fewer than two terms.
    static LieWord sum(std::vector<LieWord> terms);

    Kind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    const Rational& coefficient() const { return node_->coeff; }
    std::span<const LieWord> children() const { return node_->children; }
    const LieWord& left() const { return node_->children.at(0); }
    const LieWord& right() const { return node_->children.at(1); }

    /// Size of the fully expanded tree (saturates at UINT64_MAX).
    std::uint64_t node_count() const { return node_->size; }
    /// Identity of the shared node; used for memoisation.
    const void* id() const { return node_.get(); }

    friend bool operator==(const LieWord& a, const LieWord& b);

private:
    struct Node {
        Kind kind;
        std::string name;
        Rational coeff;
        std::vector<LieWord> children;
        std::uint64_t size = 1;
    };

    explicit LieWord(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// [a, b] shorthand.
inline LieWord bracket(LieWord a, LieWord b) { return LieWord::bracket(std::move(a), std::move(b)); }

/// Scale(c, w), or w itself when c == 1.
LieWord scaled(const Rational& c, LieWord w);

/// A Sum of the given terms, or the single term itself.
LieWord sum_of(std::vector<LieWord> terms);

using Bindings = std::map<std::string, VectorField, std::less<>>;
using BracketFn = std::function<VectorField(const VectorField&, const VectorField&)>;

Bindings generator_bindings(std::span<const Generator> generators, std::size_t n);

class UnboundName : public std::invalid_argument {
public:
    explicit UnboundName(const std::string& name) : std::invalid_argument("unbound generator name '" + name + "'") {}
};

/// Evaluates words against fixed bindings. Results are cached per shared
/// node, so evaluating many words that share subwords stays cheap.
class WordEvaluator {
public:
    explicit WordEvaluator(Bindings bindings, BracketFn bracket_fn = lie_bracket);

    const VectorField& operator()(const LieWord& word);
    std::size_t dimension() const { return dimension_; }

private:
    Bindings bindings_;
    BracketFn bracket_;
    std::size_t dimension_ = 0;
    std::unordered_map<const void*, std::pair<LieWord, VectorField>> memo_;
};

VectorField evaluate_word(const LieWord& word, const Bindings& bindings);

std::string serialize_word(const LieWord& word);

class WordParseError : public std::runtime_error {
public:
    WordParseError(std::size_t column, std::string expected, std::string found);

    /// 1-based column of the offending character (size + 1 at end of input).
    std::size_t column() const { return column_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t column_;
    std::string expected_;
};

/// Grammar:
///   word     := term ('+' term)*
///   term     := [rational '*'] atom
///   atom     := name | '[' word ',' word ']' | '(' word ')'
///   rational := ['-'] digits ['/' digits]
///   name     := [A-Za-z][A-Za-z0-9']*
LieWord parse_word(std::string_view text);

/// All generator names occurring in the word.
std::vector<std::string> word_generators(const LieWord& word);

}  // namespace vfalg
