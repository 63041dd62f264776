#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "tsirelson/errors.hpp"

namespace tsirelson {

using BigNat = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t default_bit_budget = std::uint64_t{1} << 24;

inline std::uint64_t bit_length(const BigNat& n) {
    if (n <= 0) return 0;
    return static_cast<std::uint64_t>(boost::multiprecision::msb(n)) + 1;
}

inline bool is_power_of_two(const BigNat& n) {
    return n > 0 && boost::multiprecision::lsb(n) == boost::multiprecision::msb(n);
}

inline BigNat pow2(std::uint64_t e) {
    BigNat r = 1;
    r <<= static_cast<unsigned>(e);
    return r;
}

inline BigNat parse_bignat(std::string_view text) {
    if (text.empty()) throw ParseError("empty integer literal");
    for (char c : text)
        if (c < '0' || c > '9') throw ParseError("not a nonnegative integer: " + std::string(text));
    return BigNat(std::string(text));
}

// Exact nonnegative value numerator / 2^exponent, kept canonical:
// numerator odd, or zero with exponent zero.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(std::uint64_t n) : num_(n) {}  // NOLINT: integers convert implicitly
    Dyadic(BigNat numerator, std::uint32_t exponent) : num_(std::move(numerator)), exp_(exponent) {
        if (num_ < 0) throw ConstraintError("dyadic values are nonnegative");
        normalize();
    }

    const BigNat& numerator() const { return num_; }
    std::uint32_t exponent() const { return exp_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return exp_ == 0; }

    Dyadic halve() const { return Dyadic(num_, exp_ + 1); }

    // Multiply by 2^k.
    Dyadic shifted(std::uint32_t k) const {
        Dyadic r = *this;
        std::uint32_t drop = std::min(k, r.exp_);
        r.exp_ -= drop;
        r.num_ <<= (k - drop);
        return r;
    }

    // numerator scaled to the common denominator 2^e (e >= exponent()).
    BigNat scaled_to(std::uint32_t e) const {
        if (e < exp_) throw PreconditionError("scaled_to: exponent too small");
        return num_ << (e - exp_);
    }

    friend Dyadic operator+(const Dyadic& l, const Dyadic& r) {
        std::uint32_t e = std::max(l.exp_, r.exp_);
        return Dyadic(l.scaled_to(e) + r.scaled_to(e), e);
    }
    Dyadic& operator+=(const Dyadic& r) { return *this = *this + r; }

    friend Dyadic operator*(const Dyadic& l, const Dyadic& r) {
        return Dyadic(l.num_ * r.num_, l.exp_ + r.exp_);
    }

    friend std::strong_ordering operator<=>(const Dyadic& l, const Dyadic& r) {
        std::uint32_t e = std::max(l.exp_, r.exp_);
        BigNat a = l.scaled_to(e), b = r.scaled_to(e);
        if (a < b) return std::strong_ordering::less;
        if (a > b) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Dyadic& l, const Dyadic& r) {
        return l.exp_ == r.exp_ && l.num_ == r.num_;
    }

    std::string to_string() const {
        if (exp_ == 0) return num_.str();
        return num_.str() + "/2^" + std::to_string(exp_);
    }

    // Accepts "m" or "m/2^e" (any m, normalized on read).
    static Dyadic parse(std::string_view text) {
        auto slash = text.find('/');
        if (slash == std::string_view::npos) return Dyadic(parse_bignat(text), 0);
        auto den = text.substr(slash + 1);
        if (den.substr(0, 2) != "2^") throw ParseError("denominator must be 2^e: " + std::string(text));
        BigNat e = parse_bignat(den.substr(2));
        if (e > 4096) throw ParseError("exponent too large: " + std::string(text));
        return Dyadic(parse_bignat(text.substr(0, slash)), static_cast<std::uint32_t>(e));
    }

private:
    void normalize() {
        if (num_ == 0) {
            exp_ = 0;
            return;
        }
        auto tz = static_cast<std::uint32_t>(boost::multiprecision::lsb(num_));
        std::uint32_t k = std::min(tz, exp_);
        num_ >>= k;
        exp_ -= k;
    }

    BigNat num_ = 0;
    std::uint32_t exp_ = 0;
};

inline Dyadic max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

inline std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.to_string(); }

// tau(0,a) = a, tau(s,a) = 2^tau(s-1,a).
inline BigNat tower(std::uint64_t s, std::uint64_t a, std::uint64_t bit_budget = default_bit_budget) {
    if (a < 1) throw ConstraintError("tower: a must be positive");
    BigNat v = a;
    for (std::uint64_t i = 0; i < s; ++i) {
        if (v >= bit_budget)
            throw ResourceError("tower(" + std::to_string(s) + "," + std::to_string(a) +
                                ") exceeds the bit budget of " + std::to_string(bit_budget));
        v = pow2(static_cast<std::uint64_t>(v));
    }
    return v;
}

// Exact comparison of n against tau(s,a) without materializing the tower.
inline std::strong_ordering compare_tower(const BigNat& n, std::uint64_t s, std::uint64_t a) {
    if (s == 0 || n <= a) {
        if (s > 0) return std::strong_ordering::less;
        if (n < a) return std::strong_ordering::less;
        return n == a ? std::strong_ordering::equal : std::strong_ordering::greater;
    }
    // n > a >= 1 here, so n >= 2.
    std::uint64_t e = bit_length(n) - 1;  // 2^e <= n < 2^(e+1)
    auto c = compare_tower(BigNat(e), s - 1, a);
    if (is_power_of_two(n)) return c;
    return c == std::strong_ordering::less ? std::strong_ordering::less : std::strong_ordering::greater;
}

// Least k with log2 applied k times to n giving a value <= 1, i.e. n <= tau(k,1).
inline std::uint64_t log_star(const BigNat& n) {
    if (n < 1) throw PreconditionError("log_star: n must be positive");
    std::uint64_t k = 0;
    while (compare_tower(n, k, 1) == std::strong_ordering::greater) ++k;
    return k;
}

// Least m >= 0 with 2^m >= n (n >= 1).
inline std::uint64_t ceil_log2(const BigNat& n) {
    if (n < 1) throw PreconditionError("ceil_log2: n must be positive");
    std::uint64_t len = bit_length(n);
    return is_power_of_two(n) ? len - 1 : len;
}

// Greatest m >= 0 with 2^m <= n (n >= 1).
inline std::uint64_t floor_log2(const BigNat& n) {
    if (n < 1) throw PreconditionError("floor_log2: n must be positive");
    return bit_length(n) - 1;
}

inline BigNat isqrt(const BigNat& n) { return boost::multiprecision::sqrt(n); }

inline BigNat ipow(const BigNat& base, unsigned e) { return boost::multiprecision::pow(base, e); }

}  // namespace tsirelson
