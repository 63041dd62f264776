#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "tsirelson/family.hpp"
#include "tsirelson/vector.hpp"

namespace tsirelson {

// A norming functional: a coordinate functional at a leaf, or one half of the
// sum of its children at a split.
class FunctionalTree {
public:
    static FunctionalTree leaf(Index i) {
        if (i == 0) throw ConstraintError("leaf index must be positive");
        FunctionalTree t;
        t.index_ = i;
        return t;
    }
    static FunctionalTree split(std::vector<FunctionalTree> children) {
        if (children.empty()) throw ConstraintError("split needs at least one child");
        FunctionalTree t;
        t.children_ = std::move(children);
        return t;
    }

    bool is_leaf() const { return children_.empty(); }
    Index index() const { return index_; }
    const std::vector<FunctionalTree>& children() const { return children_; }

    unsigned depth() const {
        unsigned d = 0;
        for (const auto& c : children_) d = std::max(d, c.depth() + 1);
        return d;
    }

    Index min_support() const { return is_leaf() ? index_ : children_.front().min_support(); }
    Index max_support() const { return is_leaf() ? index_ : children_.back().max_support(); }

    // Leaf indices in tree order (increasing when the tree is well formed).
    std::vector<Index> leaves() const {
        std::vector<Index> out;
        collect(out);
        return out;
    }

    FiniteSet start_set() const {
        std::vector<Index> v;
        for (const auto& c : children_) v.push_back(c.min_support());
        return FiniteSet::from_unsorted(std::move(v));
    }

    Dyadic evaluate(const Vector& x) const {
        if (is_leaf()) return x.at(index_);
        Dyadic s;
        for (const auto& c : children_) s += c.evaluate(x);
        return s.halve();
    }

    // Successive children at every split and every start set in the family.
    bool validate(const RegularFamily& fam) const {
        if (is_leaf()) return true;
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (!children_[i].validate(fam)) return false;
            if (i > 0 && children_[i - 1].max_support() >= children_[i].min_support()) return false;
        }
        std::vector<Index> starts;
        for (const auto& c : children_) starts.push_back(c.min_support());
        return member(fam, FiniteSet(std::move(starts)));
    }

    std::string to_string() const {
        if (is_leaf()) return std::to_string(index_);
        std::string s = "(";
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (i) s += ' ';
            s += children_[i].to_string();
        }
        return s + ")";
    }

    // "(3 (4 5 6 7) 8)" or a bare leaf "5".
    static FunctionalTree parse(std::string_view text) {
        std::size_t pos = 0;
        auto t = parse_node(text, pos);
        skip_space(text, pos);
        if (pos != text.size()) throw ParseError("trailing characters in functional literal");
        return t;
    }

    friend bool operator==(const FunctionalTree&, const FunctionalTree&) = default;

private:
    void collect(std::vector<Index>& out) const {
        if (is_leaf()) {
            out.push_back(index_);
            return;
        }
        for (const auto& c : children_) c.collect(out);
    }

    static void skip_space(std::string_view s, std::size_t& pos) {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    static FunctionalTree parse_node(std::string_view s, std::size_t& pos) {
        skip_space(s, pos);
        if (pos >= s.size()) throw ParseError("unexpected end of functional literal");
        if (s[pos] == '(') {
            ++pos;
            std::vector<FunctionalTree> kids;
            while (true) {
                skip_space(s, pos);
                if (pos >= s.size()) throw ParseError("unbalanced parentheses in functional literal");
                if (s[pos] == ')') {
                    ++pos;
                    break;
                }
                kids.push_back(parse_node(s, pos));
            }
            if (kids.empty()) throw ParseError("empty split in functional literal");
            return split(std::move(kids));
        }
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw ParseError("expected an index in functional literal");
        return leaf(detail::parse_index(s.substr(start, pos - start)));
    }

    Index index_ = 0;
    std::vector<FunctionalTree> children_;
};

inline std::ostream& operator<<(std::ostream& os, const FunctionalTree& f) { return os << f.to_string(); }

}  // namespace tsirelson
