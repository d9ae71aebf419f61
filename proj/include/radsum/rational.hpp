#pragma once

/**
 * @file rational.hpp
 * @brief Exact rationals over int64 with overflow-checked arithmetic.
 *
 * Always stored in lowest terms with a positive denominator. Intermediate
 * products go through __int128; a result that does not fit in int64 after
 * reduction throws std::overflow_error instead of wrapping.
 */

#include <charconv>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace radsum {

class Rational {
public:
    using int_type = std::int64_t;

    constexpr Rational() = default;
    constexpr Rational(int_type n) : num_(n), den_(1) {}  // NOLINT: implicit from integers is intended
    Rational(int_type n, int_type d) { assign(n, d); }

    constexpr int_type num() const { return num_; }
    constexpr int_type den() const { return den_; }

    constexpr bool is_zero() const { return num_ == 0; }
    constexpr bool is_integer() const { return den_ == 1; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    long double to_long_double() const {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }

    /// Largest integer <= *this.
    int_type floor() const {
        int_type q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }

    /// *this - floor(*this), in [0, 1).
    Rational frac() const { return Rational(num_ - floor() * den_, den_); }

    Rational operator-() const { return Rational(-num_, den_); }

    friend Rational operator+(const Rational& x, const Rational& y) {
        __int128 n = static_cast<__int128>(x.num_) * y.den_ + static_cast<__int128>(y.num_) * x.den_;
        __int128 d = static_cast<__int128>(x.den_) * y.den_;
        return from_wide(n, d);
    }
    friend Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }
    friend Rational operator*(const Rational& x, const Rational& y) {
        return from_wide(static_cast<__int128>(x.num_) * y.num_, static_cast<__int128>(x.den_) * y.den_);
    }
    friend Rational operator/(const Rational& x, const Rational& y) {
        if (y.num_ == 0) throw std::domain_error("Rational: division by zero");
        return from_wide(static_cast<__int128>(x.num_) * y.den_, static_cast<__int128>(x.den_) * y.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
        __int128 l = static_cast<__int128>(x.num_) * y.den_;
        __int128 r = static_cast<__int128>(y.num_) * x.den_;
        return l <=> r;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument.
    static Rational parse(std::string_view s) {
        auto slash = s.find('/');
        auto to_int = [&](std::string_view part) {
            int_type v = 0;
            if (!part.empty() && part.front() == '+') part.remove_prefix(1);
            auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
            if (ec != std::errc() || p != part.data() + part.size() || part.empty())
                throw std::invalid_argument("not a rational: '" + std::string(s) + "'");
            return v;
        };
        if (slash == std::string_view::npos) return Rational(to_int(s));
        int_type d = to_int(s.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
        return Rational(to_int(s.substr(0, slash)), d);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    int_type num_ = 0;
    int_type den_ = 1;

    void assign(int_type n, int_type d) {
        *this = from_wide(n, d);
    }

    static __int128 wide_gcd(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static Rational from_wide(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = wide_gcd(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n == 0) d = 1;
        constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
        if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rational: int64 overflow");
        Rational r;
        r.num_ = static_cast<int_type>(n);
        r.den_ = static_cast<int_type>(d);
        return r;
    }
};

}  // namespace radsum
