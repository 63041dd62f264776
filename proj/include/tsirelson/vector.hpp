#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tsirelson/errors.hpp"
#include "tsirelson/finite_set.hpp"
#include "tsirelson/numerics.hpp"

namespace tsirelson {

// Finitely supported nonnegative vector; absent indices are zero.
class Vector {
public:
    Vector() = default;

    void set(Index i, const Dyadic& v) {
        if (i == 0) throw ConstraintError("vector indices are positive");
        if (v.is_zero())
            entries_.erase(i);
        else
            entries_[i] = v;
    }

    Dyadic at(Index i) const {
        auto it = entries_.find(i);
        return it == entries_.end() ? Dyadic{} : it->second;
    }

    const std::map<Index, Dyadic>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    Index span_lo() const { return entries_.begin()->first; }
    Index span_hi() const { return entries_.rbegin()->first; }

    FiniteSet support() const {
        std::vector<Index> v;
        for (const auto& [i, _] : entries_) v.push_back(i);
        return FiniteSet(std::move(v));
    }

    Dyadic sum() const {
        Dyadic s;
        for (const auto& [_, v] : entries_) s += v;
        return s;
    }

    Vector scaled(const Dyadic& c) const {
        Vector r;
        for (const auto& [i, v] : entries_) r.set(i, v * c);
        return r;
    }

    static Vector indicator(const FiniteSet& f) {
        Vector r;
        for (Index i : f) r.set(i, Dyadic(1));
        return r;
    }

    friend bool operator==(const Vector&, const Vector&) = default;

    std::string to_string() const {
        std::string out;
        for (const auto& [i, v] : entries_) {
            if (!out.empty()) out += ',';
            out += std::to_string(i) + ":" + v.to_string();
        }
        return out;
    }

    // "3:8,4:1,5:1/2^1"
    static Vector parse(std::string_view text) {
        Vector r;
        text = detail::trim(text);
        if (text.empty()) return r;
        detail::for_each_token(text, ',', [&](std::string_view tok) {
            auto colon = tok.find(':');
            if (colon == std::string_view::npos) throw ParseError("vector entry needs index:value: '" + std::string(tok) + "'");
            Index i = detail::parse_index(tok.substr(0, colon));
            Dyadic v = Dyadic::parse(detail::trim(tok.substr(colon + 1)));
            if (v.is_zero()) throw ParseError("vector entries must be positive: '" + std::string(tok) + "'");
            if (r.entries_.count(i)) throw ParseError("duplicate vector index " + std::to_string(i));
            r.entries_[i] = v;
        });
        return r;
    }

private:
    std::map<Index, Dyadic> entries_;
};

inline std::ostream& operator<<(std::ostream& os, const Vector& x) { return os << x.to_string(); }

}  // namespace tsirelson
