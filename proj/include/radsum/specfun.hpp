#pragma once

// Special functions: Bessel I (series + large-x expansion), J at rotated
// argument, real J, K, complex gamma, the normalized lower incomplete gamma,
// upper incomplete gamma in log form, Hurwitz zeta and Dedekind sums.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>

#include "radsum/errors.hpp"
#include "radsum/numeric.hpp"
#include "radsum/quadrature.hpp"
#include "radsum/rational.hpp"

namespace radsum {

struct PrecisionPolicy {
    int working_bits = 53;          // 53 = binary64; 106 requests double-double accumulation
    double tolerance = 1e-16;       // series cutoff (relative)
    double switch_min = 25.0;       // Bessel I: series below max(switch_min, nu^2/2)

    double switch_point(double nu) const { return std::max(switch_min, 0.5 * nu * nu); }
    PrecisionMode accumulation() const {
        return working_bits > 53 ? PrecisionMode::DoubleDouble : PrecisionMode::Double;
    }
    void validate() const {
        if (!(tolerance > 0)) throw ConfigError("precision tolerance must be positive");
        if (!(switch_min >= 1)) throw ConfigError("switch point must be >= 1");
        if (working_bits != 53 && working_bits != 106) throw ConfigError("working precision must be 53 or 106 bits");
    }
};

/// mantissa * exp(log_scale); used where the plain value would overflow.
struct ScaledReal {
    double mantissa = 0.0;
    double log_scale = 0.0;

    double value() const { return mantissa * std::exp(log_scale); }
    double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
};

// ------------------------------------------------------------------ gamma

namespace detail {
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_p[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                        771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline bool is_pole(cplx z) { return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real()); }

inline cplx lanczos_log_gamma(cplx z) {  // Re z >= 1/2
    z -= 1.0;
    cplx x = lanczos_p[0];
    for (int i = 1; i < 9; ++i) x += lanczos_p[i] / (z + static_cast<double>(i));
    const cplx t = z + lanczos_g + 0.5;
    return 0.5 * std::log(two_pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}
}  // namespace detail

/// Gamma(z) by the Lanczos approximation, reflection for Re z < 1/2.
inline cplx gamma_fn(cplx z) {
    if (detail::is_pole(z)) throw Error("gamma_fn: pole at " + std::to_string(z.real()));
    if (z.imag() == 0.0 && z.real() == std::round(z.real()) && z.real() <= 20.0) {
        double f = 1.0;
        for (int k = 2; k < static_cast<int>(z.real()); ++k) f *= k;
        return f;
    }
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma_fn(1.0 - z));
    return std::exp(detail::lanczos_log_gamma(z));
}

inline double gamma_real(double x) { return gamma_fn(cplx(x)).real(); }

/// 1 / Gamma(z), zero at the poles.
inline cplx rgamma(cplx z) {
    if (detail::is_pole(z)) return 0.0;
    return 1.0 / gamma_fn(z);
}

// ---------------------------------------------------------------- Bessel I

/// exp(-x) I_nu(x) by the power series.
inline double bessel_I_series_scaled(double nu, double x, const PrecisionPolicy& pol = {}) {
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    const double h = 0.5 * x;
    double term = std::exp(nu * std::log(h) - std::lgamma(nu + 1.0) - x);
    KahanSum<double> sum;
    for (int m = 0; m < 100000; ++m) {
        sum.add(term);
        const double ratio = h * h / ((m + 1.0) * (m + 1.0 + nu));
        term *= ratio;
        if (ratio < 1.0 && term < pol.tolerance * sum.value()) break;
    }
    return sum.value();
}

/// exp(-x) I_nu(x) by the large-argument expansion; stops at the smallest term.
inline double bessel_I_asymptotic_scaled(double nu, double x, const PrecisionPolicy& pol = {}) {
    const double mu = 4.0 * nu * nu;
    double a = 1.0, sum = 1.0, last = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= -(mu - odd * odd) / (8.0 * k * x);
        if (std::abs(a) > last) break;
        sum += a;
        last = std::abs(a);
        if (last < pol.tolerance * std::abs(sum)) break;
    }
    return sum / std::sqrt(two_pi * x);
}

/// exp(-x) I_nu(x), nu >= 0, x >= 0.
inline double bessel_I_scaled(double nu, double x, const PrecisionPolicy& pol = {}) {
    if (x <= pol.switch_point(nu)) return bessel_I_series_scaled(nu, x, pol);
    return bessel_I_asymptotic_scaled(nu, x, pol);
}

/// I_nu(x) in log form; the only form that is safe past x ~ 700.
inline ScaledReal bessel_I_log(double nu, double x, const PrecisionPolicy& pol = {}) {
    return {bessel_I_scaled(nu, x, pol), x};
}

/// I_nu(x). Overflows to +inf past x ~ 709; use bessel_I_log there.
inline double bessel_I(double nu, double x, const PrecisionPolicy& pol = {}) {
    return bessel_I_log(nu, x, pol).value();
}

/// J_nu(i x) = exp(i pi nu / 2) I_nu(x).
inline cplx bessel_J_rotated(double nu, double x, const PrecisionPolicy& pol = {}) {
    return std::polar(1.0, 0.5 * pi * nu) * bessel_I(nu, x, pol);
}

/// Real J_nu(x) (libstdc++ special math).
inline double bessel_J(double nu, double x) { return std::cyl_bessel_j(nu, x); }

// ---------------------------------------------------------------- Bessel K

/// exp(x) K_nu(x) from the integral of exp(-x cosh t) cosh(nu t), trapezoid in t.
inline double bessel_K_scaled(double nu, double x) {
    if (!(x > 0)) throw Error("bessel_K: x must be positive");
    nu = std::abs(nu);
    // strip half-width d; discretization error ~ exp(x(1 - cos d) - 2 pi d / step)
    const double step = 0.02;
    KahanSum<double> sum;
    sum.add(0.5);
    for (int j = 1; j < 1'000'000; ++j) {
        const double t = j * step;
        const double expo = -x * (std::cosh(t) - 1.0);
        const double f = 0.5 * (std::exp(expo + nu * t) + std::exp(expo - nu * t));
        sum.add(f);
        if (x * std::sinh(t) > nu && f < 1e-18 * sum.value()) break;
    }
    return step * sum.value();
}

inline ScaledReal bessel_K_log(double nu, double x) { return {bessel_K_scaled(nu, x), -x}; }

inline double bessel_K(double nu, double x) { return bessel_K_log(nu, x).value(); }

// -------------------------------------------------------- incomplete gamma

/// exp(z) - 1 without cancellation for small |z|.
inline cplx expm1(cplx z) {
    const double s = std::sin(0.5 * z.imag());
    return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

struct IncompleteGammaResult {
    cplx value{};
    bool used_quadrature = false;  // set when |z| > 50 forced the fallback
};

/// gamma(a, z)/Gamma(a) by the segment integral z^a int_0^1 s^{a-1} e^{-z s} ds / Gamma(a).
inline cplx lower_gamma_reg_quadrature(double a, cplx z, const QuadraturePolicy& pol = {}) {
    if (z == cplx(0.0)) return 0.0;
    auto f = [&](double s) -> cplx {
        if (s == 0.0) return a == 1.0 ? cplx(1.0) : cplx(0.0);
        return std::pow(s, a - 1.0) * std::exp(-z * s);
    };
    // the s^{a-1} endpoint behaviour is mild for a >= 1; split to help the adapter
    cplx v = integrate_or_throw(f, 0.0, 0.5, pol) + integrate_or_throw(f, 0.5, 1.0, pol);
    return v * principal_pow(z, a) * rgamma(a);
}

/// e^{-z} sum_m z^{m+a}/Gamma(m+a+1).
inline cplx lower_gamma_reg_series(double a, cplx z, const PrecisionPolicy& pol = {}) {
    if (z == cplx(0.0)) return 0.0;
    const cplx pref = std::exp(a * std::log(z) - z - std::lgamma(a + 1.0));
    KahanSum<cplx> sum;
    cplx term = 1.0;
    for (int m = 0; m < 100000; ++m) {
        sum.add(term);
        term *= z / (a + m + 1.0);
        if (std::abs(term) < pol.tolerance * std::abs(sum.value()) && std::abs(z) < a + m + 1.0) break;
    }
    return pref * sum.value();
}

/// Gamma(a, z)/Gamma(a) by the Legendre continued fraction (modified Lentz).
/// Good for Re z > 0 and |z| beyond about a + 1.
inline cplx upper_gamma_reg_cf(double a, cplx z) {
    constexpr double tiny = 1e-300;
    cplx b = z + 1.0 - a;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const cplx del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-z + a * std::log(z) - std::lgamma(a)) * h;
}

/// gamma(1-w, z)/Gamma(1-w), w <= 0.
inline IncompleteGammaResult incomplete_gamma_reg_ex(const Rational& w, cplx z, const PrecisionPolicy& pol = {}) {
    const double a = 1.0 - w.to_double();
    if (z == cplx(0.0)) return {0.0, false};
    if (w.is_zero()) return {-expm1(-z), false};
    const double r = std::abs(z);
    if (r <= 30.0) return {lower_gamma_reg_series(a, z, pol), false};
    if (z.real() > 0.0 && r > a + 1.0) return {1.0 - upper_gamma_reg_cf(a, z), false};
    if (r <= 50.0) return {lower_gamma_reg_series(a, z, pol), false};
    return {lower_gamma_reg_quadrature(a, z), true};
}

inline cplx incomplete_gamma_reg(const Rational& w, cplx z, const PrecisionPolicy& pol = {}) {
    return incomplete_gamma_reg_ex(w, z, pol).value;
}

/// log Q(a, x) = log(Gamma(a, x)/Gamma(a)) for real x > 0.
inline double log_upper_gamma_reg(double a, double x, const PrecisionPolicy& pol = {}) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return std::log1p(-lower_gamma_reg_series(a, cplx(x), pol).real());
    // continued fraction without the prefactor, prefactor added in log space
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

inline double upper_gamma_reg(double a, double x, const PrecisionPolicy& pol = {}) {
    return std::exp(log_upper_gamma_reg(a, x, pol));
}

// ------------------------------------------------------------ Hurwitz zeta

/// zeta(s, q) = sum_{l >= 0} (l + q)^{-s}, real s > 1, q > 0 (Euler-Maclaurin).
inline double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) throw Error("hurwitz_zeta: need s > 1, q > 0");
    constexpr int N = 12;
    KahanSum<double> sum;
    for (int l = 0; l < N; ++l) sum.add(std::pow(l + q, -s));
    const double a = N + q;
    double tail = std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
    // Bernoulli B_{2k}/(2k)!
    static constexpr double b2k[] = {1.0 / 12.0,         -1.0 / 720.0,          1.0 / 30240.0,
                                     -1.0 / 1209600.0,   1.0 / 47900160.0,      -691.0 / 1307674368000.0,
                                     1.0 / 74724249600.0};
    double poch = s;  // s (s+1) ... (s+2k-2)
    double apow = std::pow(a, -s - 1.0);
    for (int k = 0; k < 7; ++k) {
        tail += b2k[k] * poch * apow;
        poch *= (s + 2 * k + 1) * (s + 2 * k + 2);
        apow /= a * a;
    }
    return sum.value() + tail;
}

// ----------------------------------------------------------- Dedekind sums

/// s(d, c) by the reciprocity law, exact. c > 0, gcd(d, c) = 1.
inline Rational dedekind_sum(std::int64_t d, std::int64_t c) {
    if (c <= 0) throw Error("dedekind_sum: c must be positive");
    Rational acc = 0;
    int sign = 1;
    std::int64_t h = floor_mod(d, c), k = c;
    while (h != 0) {
        // s(h,k) = -s(k,h) - 1/4 + (h/k + k/h + 1/(hk))/12 with 0 < h < k
        Rational corr = Rational(-1, 4) + (Rational(h, k) + Rational(k, h) + Rational(1, h) / Rational(k)) / 12;
        acc += sign * corr;
        sign = -sign;
        std::int64_t nh = k % h;
        k = h;
        h = nh;
    }
    return acc;
}

/// Direct definition with the sawtooth; O(c), for tests.
inline Rational dedekind_sum_direct(std::int64_t d, std::int64_t c) {
    auto saw = [](Rational x) { return x.is_integer() ? Rational(0) : x.frac() - Rational(1, 2); };
    Rational s = 0;
    for (std::int64_t r = 1; r < c; ++r) s += saw(Rational(r, c)) * saw(Rational(d * r, c));
    return s;
}

}  // namespace radsum
