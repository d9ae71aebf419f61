#pragma once

// Small numerical building blocks shared by the engines: compensated
// accumulators, exact-phase roots of unity, integer helpers and a
// deterministic block-parallel loop.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "radsum/rational.hpp"

namespace radsum {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------- integers

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
inline std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b) {
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

/// Inverse of d modulo c in [0, c) or -1 when gcd(d, c) != 1, for
/// 0 <= d < c < 2^31 (32-bit divisions are much cheaper).
inline std::int64_t unit_inverse_small(std::uint32_t d, std::uint32_t c) {
    if (c == 1) return 0;
    std::int64_t s0 = 0, s1 = 1;
    std::uint32_t r0 = c, r1 = d;
    while (r1 != 0) {
        const std::uint32_t q = r0 / r1, r2 = r0 - q * r1;
        const std::int64_t s2 = s0 - static_cast<std::int64_t>(q) * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (r0 != 1) return -1;
    return s0 < 0 ? s0 + c : s0;
}

/// Inverse of a modulo m in [0, m). Requires gcd(a, m) = 1; m = 1 gives 0.
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    if (m == 1) return 0;
    auto [g, x, y] = ext_gcd(floor_mod(a, m), m);
    (void)y;
    if (g != 1) throw std::domain_error("mod_inverse: arguments not coprime");
    return floor_mod(x, m);
}

inline std::int64_t euler_phi(std::int64_t n) {
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

inline std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// ------------------------------------------------------------------ phases

/// e(x) = exp(2 pi i x) with x reduced exactly to [-1/2, 1/2) first.
inline cplx unit_phase(const Rational& x) {
    Rational f = x.frac();
    if (f >= Rational(1, 2)) f -= 1;
    const long double ang = 2.0L * std::numbers::pi_v<long double> * f.to_long_double();
    return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

/// e(x) for a floating x; the integer part is removed before the trig call.
inline cplx unit_phase(double x) {
    x -= std::round(x);
    return std::polar(1.0, two_pi * x);
}

/// Principal power z^p = exp(p Ln z), Ln with -pi < Im <= pi.
inline cplx principal_pow(cplx z, double p) {
    if (z == cplx(0.0)) return p == 0.0 ? cplx(1.0) : cplx(0.0);
    return std::exp(p * std::log(z));
}

/// Rounds a real to the nearest rational with denominator <= max_den if it is
/// within tol, otherwise returns false.
inline bool snap_to_rational(double x, std::int64_t max_den, double tol, Rational& out) {
    for (std::int64_t q = 1; q <= max_den; ++q) {
        double p = std::round(x * static_cast<double>(q));
        if (std::abs(x - p / static_cast<double>(q)) <= tol) {
            out = Rational(static_cast<std::int64_t>(p), q);
            return true;
        }
    }
    return false;
}

// ----------------------------------------------------------- accumulators

/// Neumaier-compensated sum. Works for double and std::complex<double>.
template <typename T>
class KahanSum {
public:
    void add(T x) {
        if constexpr (std::is_same_v<T, cplx>) {
            re_.add(x.real());
            im_.add(x.imag());
        } else {
            T t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x))
                comp_ += (sum_ - t) + x;
            else
                comp_ += (x - t) + sum_;
            sum_ = t;
        }
    }
    KahanSum& operator+=(T x) {
        add(x);
        return *this;
    }
    T value() const {
        if constexpr (std::is_same_v<T, cplx>)
            return {re_.value(), im_.value()};
        else
            return sum_ + comp_;
    }

private:
    struct Empty {};
    using Part = std::conditional_t<std::is_same_v<T, cplx>, KahanSum<double>, Empty>;
    T sum_{};
    T comp_{};
    [[no_unique_address]] Part re_{};
    [[no_unique_address]] Part im_{};
};

/// Double-double accumulator (TwoSum based), ~106 bits of running sum.
class DoubleDoubleSum {
public:
    void add(double x) {
        double s = hi_ + x;
        double bp = s - hi_;
        double err = (hi_ - (s - bp)) + (x - bp);
        lo_ += err;
        hi_ = s + lo_;
        lo_ = lo_ - (hi_ - s);
    }
    double value() const { return hi_ + lo_; }

private:
    double hi_ = 0.0;
    double lo_ = 0.0;
};

enum class PrecisionMode { Double, DoubleDouble };

inline std::string to_string(PrecisionMode m) {
    return m == PrecisionMode::Double ? "double" : "double-double";
}

/// Complex accumulator whose internal precision is chosen at runtime.
class ComplexAccumulator {
public:
    explicit ComplexAccumulator(PrecisionMode mode = PrecisionMode::Double) : mode_(mode) {}
    void add(cplx x) {
        if (mode_ == PrecisionMode::Double) {
            k_.add(x);
        } else {
            re_.add(x.real());
            im_.add(x.imag());
        }
    }
    cplx value() const {
        return mode_ == PrecisionMode::Double ? k_.value() : cplx(re_.value(), im_.value());
    }

private:
    PrecisionMode mode_;
    KahanSum<cplx> k_;
    DoubleDoubleSum re_, im_;
};

// ------------------------------------------------------------- threading

/// Parallelism ceiling: RADSUM_THREADS if set, else hardware concurrency.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("RADSUM_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Runs body(i) for i in [begin, end) on up to thread_budget() threads using
/// interleaved assignment. Bodies must write to disjoint slots; any reduction
/// happens afterwards in index order, so results do not depend on scheduling.
template <typename Body>
void parallel_for(std::int64_t begin, std::int64_t end, Body&& body) {
    const std::int64_t n = end - begin;
    if (n <= 0) return;
    unsigned workers = static_cast<unsigned>(std::min<std::int64_t>(thread_budget(), n));
    if (workers <= 1 || n < 64) {
        for (std::int64_t i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::int64_t i = begin + w; i < end; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace radsum
