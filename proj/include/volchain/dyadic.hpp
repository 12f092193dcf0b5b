#pragma once

#include <cmath>
#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>

namespace volchain {

// Exact dyadic rational num / 2^exp.  Normalized so that num is odd or zero
// (exp == 0 when num == 0).  All arithmetic is exact; overflow throws.
class Dyadic {
public:
    constexpr Dyadic() : num_(0), exp_(0) {}
    Dyadic(std::int64_t n) : num_(n), exp_(0) { normalize(); }
    Dyadic(std::int64_t n, std::int32_t e) : num_(n), exp_(e) {
        if (e < 0) throw std::invalid_argument("Dyadic: negative exponent");
        normalize();
    }

    static Dyadic half_pow(std::int32_t k) { return Dyadic(1, k); }  // 2^-k

    std::int64_t num() const { return num_; }
    std::int32_t exp() const { return exp_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return exp_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Dyadic operator-() const { Dyadic r; r.num_ = checked_neg(num_); r.exp_ = exp_; return r; }
    Dyadic abs() const { return num_ < 0 ? -*this : *this; }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        std::int32_t e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
        std::int64_t x = shift_up(a.num_, e - a.exp_);
        std::int64_t y = shift_up(b.num_, e - b.exp_);
        std::int64_t s;
        if (__builtin_add_overflow(x, y, &s)) throw std::overflow_error("Dyadic: add overflow");
        return Dyadic(s, e);
    }
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
        std::int64_t p;
        if (__builtin_mul_overflow(a.num_, b.num_, &p)) throw std::overflow_error("Dyadic: mul overflow");
        std::int32_t e = a.exp_ + b.exp_;
        return Dyadic(p, e);
    }
    Dyadic& operator+=(const Dyadic& b) { *this = *this + b; return *this; }
    Dyadic& operator-=(const Dyadic& b) { *this = *this - b; return *this; }
    Dyadic& operator*=(const Dyadic& b) { *this = *this * b; return *this; }

    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.num_ == b.num_ && a.exp_ == b.exp_;
    }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
        // compare a.num / 2^a.exp with b.num / 2^b.exp by cross-shifting in 128 bits
        std::int32_t e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
        __int128 x = static_cast<__int128>(a.num_) << (e - a.exp_);
        __int128 y = static_cast<__int128>(b.num_) << (e - b.exp_);
        if (x < y) return std::strong_ordering::less;
        if (x > y) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    double to_double() const { return std::ldexp(static_cast<double>(num_), -exp_); }

    // Serialized form used by the chain file format; always "num/2^exp".
    std::string to_string() const {
        return std::to_string(num_) + "/2^" + std::to_string(exp_);
    }
    static Dyadic parse(const std::string& s);

private:
    void normalize() {
        if (num_ == 0) { exp_ = 0; return; }
        while (exp_ > 0 && (num_ % 2) == 0) { num_ /= 2; --exp_; }
    }
    static std::int64_t checked_neg(std::int64_t v) {
        if (v == INT64_MIN) throw std::overflow_error("Dyadic: negate overflow");
        return -v;
    }
    static std::int64_t shift_up(std::int64_t v, std::int32_t k) {
        if (k < 0 || k > 62) throw std::overflow_error("Dyadic: shift overflow");
        __int128 w = static_cast<__int128>(v) << k;
        if (w > INT64_MAX || w < INT64_MIN) throw std::overflow_error("Dyadic: shift overflow");
        return static_cast<std::int64_t>(w);
    }

    std::int64_t num_;
    std::int32_t exp_;
};

}  // namespace volchain
