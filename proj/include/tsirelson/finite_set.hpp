#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tsirelson/errors.hpp"

namespace tsirelson {

using Index = std::uint64_t;

// Strictly increasing list of positive integers.
class FiniteSet {
public:
    FiniteSet() = default;
    explicit FiniteSet(std::vector<Index> elements) : elems_(std::move(elements)) {
        for (std::size_t i = 0; i < elems_.size(); ++i) {
            if (elems_[i] == 0) throw ConstraintError("set elements must be positive");
            if (i > 0 && elems_[i - 1] >= elems_[i]) throw ConstraintError("set elements must be strictly increasing");
        }
    }
    FiniteSet(std::initializer_list<Index> elements) : FiniteSet(std::vector<Index>(elements)) {}

    static FiniteSet interval(Index lo, Index hi) {
        std::vector<Index> v;
        if (lo < 1) lo = 1;
        for (Index i = lo; i <= hi; ++i) v.push_back(i);
        return FiniteSet(std::move(v));
    }

    // Builds from an arbitrary list (sorted and deduplicated).
    static FiniteSet from_unsorted(std::vector<Index> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return FiniteSet(std::move(v));
    }

    const std::vector<Index>& elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    Index min() const { return elems_.front(); }
    Index max() const { return elems_.back(); }
    Index operator[](std::size_t i) const { return elems_[i]; }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    bool contains(Index n) const { return std::binary_search(elems_.begin(), elems_.end(), n); }

    FiniteSet with(Index n) const {
        std::vector<Index> v = elems_;
        auto it = std::lower_bound(v.begin(), v.end(), n);
        if (it == v.end() || *it != n) v.insert(it, n);
        return FiniteSet(std::move(v));
    }

    FiniteSet without(Index n) const {
        std::vector<Index> v = elems_;
        v.erase(std::remove(v.begin(), v.end(), n), v.end());
        return FiniteSet(std::move(v));
    }

    FiniteSet united(const FiniteSet& other) const {
        std::vector<Index> v;
        std::set_union(begin(), end(), other.begin(), other.end(), std::back_inserter(v));
        return FiniteSet(std::move(v));
    }

    bool subset_of(const FiniteSet& other) const {
        return std::includes(other.begin(), other.end(), begin(), end());
    }

    friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

    // Runs of three or more consecutive integers print as "lo-hi".
    std::string to_string() const {
        std::string out;
        std::size_t i = 0;
        while (i < elems_.size()) {
            std::size_t j = i;
            while (j + 1 < elems_.size() && elems_[j + 1] == elems_[j] + 1) ++j;
            auto emit = [&](std::string s) {
                if (!out.empty()) out += ',';
                out += s;
            };
            if (j - i >= 2) {
                emit(std::to_string(elems_[i]) + "-" + std::to_string(elems_[j]));
            } else {
                for (std::size_t k = i; k <= j; ++k) emit(std::to_string(elems_[k]));
            }
            i = j + 1;
        }
        return out;
    }

    static FiniteSet parse(std::string_view text);

private:
    std::vector<Index> elems_;
};

inline std::ostream& operator<<(std::ostream& os, const FiniteSet& f) { return os << f.to_string(); }

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

inline Index parse_index(std::string_view s) {
    s = trim(s);
    Index v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
        throw ParseError("not a positive integer: '" + std::string(s) + "'");
    if (v == 0) throw ParseError("indices are positive: '" + std::string(s) + "'");
    return v;
}

template <class F>
void for_each_token(std::string_view text, char sep, F&& f) {
    while (true) {
        auto pos = text.find(sep);
        f(trim(text.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        text.remove_prefix(pos + 1);
    }
}

}  // namespace detail

// "2,99,100-199"; the empty string is the empty set.
inline FiniteSet FiniteSet::parse(std::string_view text) {
    text = detail::trim(text);
    std::vector<Index> v;
    if (text.empty()) return {};
    detail::for_each_token(text, ',', [&](std::string_view tok) {
        auto dash = tok.find('-');
        if (dash == std::string_view::npos) {
            v.push_back(detail::parse_index(tok));
            return;
        }
        Index lo = detail::parse_index(tok.substr(0, dash));
        Index hi = detail::parse_index(tok.substr(dash + 1));
        if (hi < lo) throw ParseError("empty range: '" + std::string(tok) + "'");
        if (hi - lo > 50'000'000) throw ParseError("range too long: '" + std::string(tok) + "'");
        for (Index i = lo; i <= hi; ++i) v.push_back(i);
    });
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) throw ParseError("set literal must be strictly increasing: '" + std::string(text) + "'");
    return FiniteSet(std::move(v));
}

}  // namespace tsirelson
