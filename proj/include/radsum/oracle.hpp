#pragma once

// Independent checks: direct regularized partial sums, direct Poincare series,
// the period integral of the shadow, automorphy residuals, the Lipschitz
// summation formula, and an Eisenstein Fourier-coefficient cross-check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "radsum/errors.hpp"
#include "radsum/group.hpp"
#include "radsum/kloosterman.hpp"
#include "radsum/multiplier.hpp"
#include "radsum/numeric.hpp"
#include "radsum/quadrature.hpp"
#include "radsum/rademacher.hpp"
#include "radsum/specfun.hpp"

namespace radsum {

struct TrendPoint {
    std::int64_t level = 0;
    std::vector<cplx> value;
};

struct EvaluationReport {
    std::vector<cplx> value;
    double error = 0.0;
    std::vector<TrendPoint> trend;
    double residual = 0.0;
    std::string parameters;

    /// Successive differences of the trend (max over components).
    std::vector<double> trend_steps() const {
        std::vector<double> out;
        for (std::size_t t = 1; t < trend.size(); ++t) {
            double m = 0;
            for (std::size_t j = 0; j < trend[t].value.size(); ++j)
                m = std::max(m, std::abs(trend[t].value[j] - trend[t - 1].value[j]));
            out.push_back(m);
        }
        return out;
    }
};

// ------------------------------------------------------ direct partial sums

namespace detail {

/// Sum over Gamma_oo \ Gamma_{K,K^2} of j_w(g,tau)^{-1} rho(g)^{-1} e_i r e(n g tau).
inline std::vector<cplx> rectangle_sum(const GroupSpec& group, const MultiplierSystem& rho, int i, const Rational& n,
                                       cplx tau, std::int64_t K, bool regularize, const PrecisionPolicy& pol) {
    const auto cosets = enumerate_rectangle(group, K);
    const int dim = rho.dim();
    const Rational w = rho.weight();
    std::vector<std::vector<cplx>> part(static_cast<std::size_t>(K) + 1, std::vector<cplx>(dim, 0.0));
    // group by c so the reduction order is fixed
    std::vector<std::vector<GroupElement>> by_c(static_cast<std::size_t>(K) + 1);
    for (auto& g : cosets) by_c[static_cast<std::size_t>(g.c())].push_back(g);
    const double nd = n.to_double();
    parallel_for(0, K + 1, [&](std::int64_t c) {
        std::vector<ComplexAccumulator> acc(static_cast<std::size_t>(dim), ComplexAccumulator(pol.accumulation()));
        for (const auto& g : by_c[static_cast<std::size_t>(c)]) {
            const cplx gt = act(g, tau);
            cplx term = std::exp(cplx(0, two_pi) * nd * gt) / automorphy_factor(w, g, tau);
            if (regularize && !g.is_identity()) {
                // z = 2 pi i n (g tau - g oo)
                const cplx z = cplx(0, two_pi) * nd * (gt - static_cast<double>(g.a()) / static_cast<double>(g.c()));
                term *= incomplete_gamma_reg(w, z, pol);
            }
            if (rho.has_exact_phase()) {
                acc[static_cast<std::size_t>(i)].add(term * unit_phase(-rho.scalar_phase(g)));
            } else {
                const Matrix inv = rho.evaluate_inverse(g);
                for (int j = 0; j < dim; ++j) acc[static_cast<std::size_t>(j)].add(term * inv(j, i));
            }
        }
        for (int j = 0; j < dim; ++j) part[static_cast<std::size_t>(c)][j] = acc[static_cast<std::size_t>(j)].value();
    });
    std::vector<cplx> out(static_cast<std::size_t>(dim), 0.0);
    for (auto& p : part)
        for (int j = 0; j < dim; ++j) out[j] += p[j];
    return out;
}

inline std::vector<std::int64_t> default_levels(std::int64_t K) {
    std::vector<std::int64_t> lv{std::max<std::int64_t>(1, (K + 2) / 3), std::max<std::int64_t>(1, (2 * K + 2) / 3), K};
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    return lv;
}

}  // namespace detail

/// Delta + sum over Gamma_oo \ Gamma_{K,K^2}, evaluated at K/3, 2K/3 and K.
/// The error is the last trend step plus the error of Delta.
inline EvaluationReport rademacher_partial(const RademacherJob& job, cplx tau, std::int64_t K,
                                           bool regularize = true) {
    job.validate();
    if (!(tau.imag() > 0)) throw ConfigError("tau must lie in the upper half plane");
    if (K < 1) throw ConfigError("K must be positive");
    if (!job.cusp.at_infinity()) throw UnsupportedError("direct partial sums: pole at infinity only");
    const auto rho = job.restricted_rho();
    const auto delta = delta_constant(job);
    EvaluationReport r;
    for (auto lv : detail::default_levels(K)) {
        auto v = detail::rectangle_sum(job.group, rho, job.i, job.n, tau, lv, regularize, job.precision);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] += delta.value[j];
        r.trend.push_back({lv, v});
    }
    r.value = r.trend.back().value;
    const auto steps = r.trend_steps();
    r.error = steps.empty() ? 0.0 : steps.back();
    r.error += *std::max_element(delta.error.begin(), delta.error.end());
    char buf[160];
    std::snprintf(buf, sizeof buf, "K=%lld, tau=%.6g%+.6gi, regularized=%d", static_cast<long long>(K), tau.real(),
                  tau.imag(), regularize ? 1 : 0);
    r.parameters = std::string(buf) + ", " + job.str();
    return r;
}

/// Holomorphic Poincare series of weight w > 2: identity plus cosets with
/// 0 < c <= c_max, |d| <= d_max (default c_max^2).
inline std::vector<cplx> poincare_direct(const GroupSpec& group, const MultiplierSystem& rho, const Rational& n, int i,
                                         cplx tau, std::int64_t c_max, std::int64_t d_max = -1) {
    if (!(rho.weight() > Rational(2))) throw ConfigError("direct Poincare series needs weight > 2");
    if (!(n > Rational(0))) throw ConfigError("Poincare exponent must be positive");
    if (c_max < 0) throw ConfigError("c_max must be nonnegative");
    const auto r = rho.restricted_to(group);
    if (d_max < 0) d_max = c_max * c_max;
    const auto cosets = enumerate_box(group, c_max, d_max);
    const Rational w = r.weight();
    const int dim = r.dim();
    std::vector<std::vector<GroupElement>> by_c(static_cast<std::size_t>(c_max) + 1);
    for (auto& g : cosets) by_c[static_cast<std::size_t>(g.c())].push_back(g);
    std::vector<std::vector<cplx>> part(by_c.size(), std::vector<cplx>(dim, 0.0));
    const double nd = n.to_double();
    parallel_for(0, c_max + 1, [&](std::int64_t c) {
        std::vector<KahanSum<cplx>> acc(static_cast<std::size_t>(dim));
        for (const auto& g : by_c[static_cast<std::size_t>(c)]) {
            const cplx term = std::exp(cplx(0, two_pi) * nd * act(g, tau)) / automorphy_factor(w, g, tau);
            if (r.has_exact_phase()) {
                acc[static_cast<std::size_t>(i)].add(term * unit_phase(-r.scalar_phase(g)));
            } else {
                const Matrix inv = r.evaluate_inverse(g);
                for (int j = 0; j < dim; ++j) acc[static_cast<std::size_t>(j)].add(term * inv(j, i));
            }
        }
        for (int j = 0; j < dim; ++j) part[static_cast<std::size_t>(c)][j] = acc[static_cast<std::size_t>(j)].value();
    });
    std::vector<cplx> out(static_cast<std::size_t>(dim), 0.0);
    for (auto& p : part)
        for (int j = 0; j < dim; ++j) out[j] += p[j];
    return out;
}

// ------------------------------------------------------------- Lipschitz

/// sum_{|n|<N} e(-n alpha)/(tau+n)^p minus the Lipschitz right-hand side.
inline cplx lipschitz_check(double alpha, int p, cplx tau, std::int64_t N) {
    if (!(tau.imag() > 0)) throw ConfigError("tau must lie in the upper half plane");
    if (p < 1) throw ConfigError("p must be a positive integer");
    if (!(alpha >= 0 && alpha < 1)) throw ConfigError("alpha must lie in [0, 1)");
    KahanSum<cplx> lhs;
    // pair n and -n so cancellation happens in each pair
    lhs.add(std::pow(tau, -p));
    for (std::int64_t n = 1; n < N; ++n) {
        const double nd = static_cast<double>(n);
        lhs.add(unit_phase(-nd * alpha) * std::pow(tau + nd, -p) + unit_phase(nd * alpha) * std::pow(tau - nd, -p));
    }
    KahanSum<cplx> rhs;
    const double first = alpha > 0 ? alpha : 1.0;
    for (double v = first;; v += 1.0) {
        const cplx t = std::pow(v, p - 1) * std::exp(cplx(0, two_pi) * v * tau);
        rhs.add(t);
        if (std::abs(t) < 1e-20 * std::max(1.0, std::abs(rhs.value()))) break;
    }
    const cplx pref = std::pow(cplx(0, -two_pi), p) / gamma_real(p);
    return lhs.value() - pref * rhs.value();
}

struct DecayFit {
    double exponent = 0.0;    // |deviation - limit| ~ C N^{-exponent}
    double constant = 0.0;
    std::vector<cplx> deviations;
};

/// Log-log least squares over the N ladder.
inline DecayFit lipschitz_fit(double alpha, int p, cplx tau, const std::vector<std::int64_t>& Ns, cplx limit = 0.0) {
    DecayFit f;
    std::vector<double> xs, ys;
    for (auto N : Ns) {
        const cplx d = lipschitz_check(alpha, p, tau, N);
        f.deviations.push_back(d);
        xs.push_back(std::log(static_cast<double>(N)));
        ys.push_back(std::log(std::abs(d - limit)));
    }
    double mx = 0, my = 0;
    for (std::size_t t = 0; t < xs.size(); ++t) mx += xs[t], my += ys[t];
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
        sxy += (xs[t] - mx) * (ys[t] - my);
        sxx += (xs[t] - mx) * (xs[t] - mx);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    f.exponent = -slope;
    f.constant = std::exp(my - slope * mx);
    return f;
}

// ------------------------------------------------------- shadow period

struct PeriodResult {
    cplx value{};        // termwise closed form
    cplx quadrature{};   // along the vertical ray from -conj(tau)
    double quadrature_error = 0.0;
    double residual = 0.0;
};

namespace detail {

inline void check_shadow_weight(const CoefficientSeries& g, const Rational& w) {
    if (!g.components.empty() && g.weight != Rational(2) - w)
        throw ConfigError("shadow series must have weight 2 - w");
}

}  // namespace detail

/// Termwise period: sum conj(b_k) i^{1-w} (2 pi k)^{w-1} Q(1-w, 4 pi k y) e(-k tau).
inline cplx period_termwise(const CoefficientSeries& g, int j, const Rational& w, cplx tau) {
    detail::check_shadow_weight(g, w);
    if (g.components.empty()) return 0.0;
    const double a = (Rational(1) - w).to_double();
    const double x = tau.real(), y = tau.imag();
    const cplx pref = principal_pow(cplx(0, 1), a);
    KahanSum<cplx> s;
    for (const auto& t : g.component(j).terms) {
        const double k = t.k.to_double();
        if (!(k > 0)) throw ConfigError("period: shadow exponents must be positive");
        const double lg = log_upper_gamma_reg(a, 4 * pi * k * y) + two_pi * k * y + (-a) * std::log(two_pi * k);
        s.add(std::conj(t.value) * std::exp(lg) * unit_phase(-k * x));
    }
    return pref * s.value();
}

/// Same integral at a real base point x (the cusp value): Q(1-w, 0) = 1.
inline cplx period_at_real(const CoefficientSeries& g, int j, const Rational& w, double x) {
    detail::check_shadow_weight(g, w);
    if (g.components.empty()) return 0.0;
    const double a = (Rational(1) - w).to_double();
    KahanSum<cplx> s;
    for (const auto& t : g.component(j).terms) {
        const double k = t.k.to_double();
        s.add(std::conj(t.value) * std::pow(two_pi * k, -a) * unit_phase(-k * x));
    }
    return principal_pow(cplx(0, 1), a) * s.value();
}

/// p(w, tau; g) = Gamma(1-w)^{-1} int_{-conj tau}^{i oo} (z+tau)^{-w} conj(g(-conj z)) dz,
/// by the closed form and by adaptive quadrature. Disagreement above 1e-6
/// (relative to max(1, |p|)) raises ConvergenceError.
inline PeriodResult shadow_period(const CoefficientSeries& g, int j, const Rational& w, cplx tau,
                                  const QuadraturePolicy& qp = {}) {
    if (!(tau.imag() > 0)) throw ConfigError("tau must lie in the upper half plane");
    if (!(w < Rational(1))) throw ConfigError("period integral needs w < 1");
    PeriodResult r;
    r.value = period_termwise(g, j, w, tau);
    if (g.components.empty()) return r;
    const auto& terms = g.component(j).terms;
    if (terms.empty()) return r;
    const double a = (Rational(1) - w).to_double();
    const double x = tau.real(), y = tau.imag();
    const cplx pref = principal_pow(cplx(0, 1), a) * rgamma(a);
    auto integrand = [&](double t) -> cplx {
        const double u = 2 * y + t;
        KahanSum<cplx> gs;
        for (const auto& e : terms) {
            const double k = e.k.to_double();
            gs.add(std::conj(e.value) * unit_phase(-k * x) * std::exp(-two_pi * k * (y + t)));
        }
        return pref * std::pow(u, -w.to_double()) * gs.value();
    };
    // cut the ray where the integrand bound drops below 1e-18 of the target
    double kmin = std::numeric_limits<double>::infinity(), bsum = 0;
    for (const auto& e : terms) kmin = std::min(kmin, e.k.to_double()), bsum += std::abs(e.value);
    const double target = 1e-18 * std::max(1.0, std::abs(r.value));
    double T = 1.0;
    auto bound = [&](double t) {
        return std::abs(pref) * std::pow(2 * y + t, -w.to_double()) * bsum * std::exp(-two_pi * kmin * (y + t)) /
               (two_pi * kmin);
    };
    while (bound(T) > target && T < 1e6) T *= 1.5;
    KahanSum<cplx> total;
    double err = 0;
    bool ok = true;
    const double step = std::max(0.25, 1.0 / kmin);
    for (double lo = 0; lo < T; lo += step) {
        auto q = integrate(integrand, lo, std::min(T, lo + step), qp);
        total.add(q.value);
        err += q.error;
        ok = ok && q.converged;
    }
    r.quadrature = total.value();
    r.quadrature_error = err;
    r.residual = std::abs(r.quadrature - r.value);
    if (!ok || r.residual > 1e-6 * std::max(1.0, std::abs(r.value)))
        throw ConvergenceError("period integral: quadrature and closed form disagree by " + std::to_string(r.residual));
    return r;
}

// ---------------------------------------------------------- automorphy

/// Normalization C in h = f + C p(w, tau; g) for f with pole q^n and g from
/// shadow_coefficients.
inline cplx completion_constant(const Rational& w, const Rational& n) {
    const double a = (Rational(1) - w).to_double();
    return principal_pow(cplx(0, two_pi * std::abs(n.to_double())), a);
}

struct AutomorphyResult {
    double completion_residual = 0.0;  // |h(g tau) - j rho(g) h(tau)|, h = f + C p(w, tau; g)
    double literal_residual = 0.0;     // |f(g tau) - j rho(g) (f(tau) + C p(w, g^{-1} oo; g))|
    double scale = 0.0;                // |f(g tau)|, for reading the residuals
    double series_error = 0.0;         // truncation guess from the q-series at both points
};

/// g may be an empty series (no shadow). rho is evaluated as given, so it
/// must be the system f transforms under, restricted to a group containing gamma.
inline AutomorphyResult verify_automorphy(const CoefficientSeries& f, const CoefficientSeries& g,
                                          const MultiplierSystem& rho, const GroupElement& gamma, cplx tau,
                                          std::optional<cplx> constant = std::nullopt) {
    if (!(tau.imag() > 0)) throw ConfigError("tau must lie in the upper half plane");
    const int dim = static_cast<int>(f.components.size());
    if (dim != rho.dim()) throw ConfigError("series and multiplier dimensions differ");
    if (!g.components.empty() && static_cast<int>(g.components.size()) != dim)
        throw ConfigError("shadow and series dimensions differ");
    const Rational w = f.weight;
    const cplx C = g.components.empty() ? cplx(0.0) : constant.value_or(completion_constant(w, f.pole_exponent));
    const cplx gt = act(gamma, tau);
    const cplx jw = automorphy_factor(w, gamma, tau);
    const Matrix R = rho.evaluate(gamma);
    Eigen::VectorXcd f_gt(dim), f_t(dim), p_gt(dim), p_t(dim), p_lit(dim);
    AutomorphyResult out;
    for (int j = 0; j < dim; ++j) {
        auto [a, ea] = f.evaluate(j, gt);
        auto [b, eb] = f.evaluate(j, tau);
        f_gt(j) = a;
        f_t(j) = b;
        out.series_error = std::max(out.series_error, ea + std::abs(jw) * eb);
        if (g.components.empty()) {
            p_gt(j) = p_t(j) = p_lit(j) = 0.0;
        } else {
            p_gt(j) = period_termwise(g, j, w, gt);
            p_t(j) = period_termwise(g, j, w, tau);
            p_lit(j) = gamma.c() == 0 ? cplx(0.0)
                                      : period_at_real(g, j, w,
                                                       -static_cast<double>(gamma.d()) / static_cast<double>(gamma.c()));
        }
    }
    out.completion_residual = ((f_gt + C * p_gt) - jw * (R * (f_t + C * p_t))).cwiseAbs().maxCoeff();
    out.literal_residual = (f_gt - jw * (R * (f_t + C * p_lit))).cwiseAbs().maxCoeff();
    out.scale = f_gt.cwiseAbs().maxCoeff();
    return out;
}

// ----------------------------------------------------------- Eisenstein

namespace detail {

/// F(u) = sum_{t in Z} ((u+t)^2 + y^2)^{-s} for real s > 1/2. Terms with
/// |t| < T are summed directly; the two tails come from a Chebyshev
/// interpolant of sum_{t >= T} ((t+v)^2 + y^2)^{-s} on v in [-1, 1], whose
/// nodes use the binomial expansion into Hurwitz zeta values.
class LatticeSum {
public:
    LatticeSum(double s, double y) : s_(s), y_(y) {
        T_ = static_cast<int>(std::ceil(3 * y)) + 3;
        constexpr int M = 32;
        std::vector<double> vals(M);
        for (int k = 0; k < M; ++k) vals[k] = tail_direct(std::cos(pi * (k + 0.5) / M));
        coef_.assign(M, 0.0);
        for (int j = 0; j < M; ++j) {
            double acc = 0;
            for (int k = 0; k < M; ++k) acc += vals[k] * std::cos(pi * j * (k + 0.5) / M);
            coef_[j] = 2.0 * acc / M;
        }
        coef_[0] *= 0.5;
    }

    double operator()(double u) const {
        u -= std::floor(u);
        double acc = tail(u) + tail(-u);
        for (int t = -T_ + 1; t < T_; ++t) acc += term(u + t);
        return acc;
    }

private:
    double term(double v) const { return std::pow(v * v + y_ * y_, -s_); }

    double tail_direct(double v) const {
        // sum_j binom(-s, j) y^{2j} zeta(2s + 2j, T + v); ratio (y/(T-1))^2 < 1/9
        double sum = 0, c = 1;
        for (int j = 0; j < 200; ++j) {
            const double t = c * hurwitz_zeta(2 * s_ + 2 * j, T_ + v);
            sum += t;
            if (std::abs(t) < 1e-18 * std::abs(sum)) break;
            c *= -(s_ + j) / (j + 1.0) * y_ * y_;
        }
        return sum;
    }

    double tail(double v) const {
        // Clenshaw
        double b1 = 0, b2 = 0;
        for (int j = static_cast<int>(coef_.size()) - 1; j >= 1; --j) {
            const double b0 = 2 * v * b1 - b2 + coef_[j];
            b2 = b1;
            b1 = b0;
        }
        return v * b1 - b2 + coef_[0];
    }

    double s_, y_;
    int T_;
    std::vector<double> coef_;
};

}  // namespace detail

struct EisensteinCheck {
    cplx lhs{};                 // trapezoid in x of the c <= c_max truncated series
    cplx rhs{};                 // closed form with Kl truncated at c_max (classical gamma factor when m = 0)
    double disagreement = 0.0;  // |lhs - rhs|
    double quadrature_error = 0.0;
    int nodes = 0;
    // m = 0 only
    cplx rhs_alternative{};     // Gamma(1/2)/Gamma(s) in front of Kl_{0,0}
    double alternative_disagreement = 0.0;
    std::string matching_variant;  // "classical", "alternative" or "none"
    std::vector<TrendPoint> trend;  // lhs at c_max/4, c_max/2, c_max
};

/// m-th Fourier coefficient of the weight-0 Eisenstein series at oo for a
/// scalar system trivial on the parabolic at oo, computed as an x-integral
/// and compared with the Bessel closed form. Real s only.
inline EisensteinCheck eisenstein_coefficient_check(const GroupSpec& group, const MultiplierSystem& rho_in, cplx s_in,
                                                    std::int64_t m, double y, std::int64_t c_max,
                                                    double agree_tol = 1e-6) {
    const auto rho = rho_in.restricted_to(group);
    if (rho.weight() != Rational(0)) throw ConfigError("Eisenstein check is for weight 0");
    if (!rho.is_scalar()) throw UnsupportedError("Eisenstein check: scalar systems only");
    if (s_in.imag() != 0.0) throw UnsupportedError("Eisenstein check: real s only");
    const double s = s_in.real();
    if (!(s > 1.0)) throw ConfigError("Eisenstein series needs Re s > 1");
    if (!(y > 0)) throw ConfigError("y must be positive");
    if (c_max < 0) throw ConfigError("c_max must be nonnegative");
    const CuspData oo = cusp_infinity();
    const auto ex = rho.cusp_exponents(oo);
    if (ex.mu.empty() || ex.mu[0] != Rational(0)) throw ConfigError("Eisenstein check needs exponent 0 at oo");
    if (ex.cusp.width != 1) throw UnsupportedError("Eisenstein check: width 1 at oo only");

    // aliasing from modes m +- N is ~ exp(-2 pi N y) relative
    int N = static_cast<int>(2 * std::llabs(m) + std::ceil(40.0 / (two_pi * y))) + 4;
    N += N % 2;
    const detail::LatticeSum F(s, y);
    const double ys = std::pow(y, s);

    std::vector<std::vector<cplx>> per_c(static_cast<std::size_t>(c_max) + 1, std::vector<cplx>(N, 0.0));
    parallel_for(1, c_max + 1, [&](std::int64_t c) {
        const auto reps = double_cosets_at(group, oo, c);
        if (reps.empty()) return;
        const double scale = ys * std::pow(static_cast<double>(c), -2 * s);
        auto& row = per_c[static_cast<std::size_t>(c)];
        for (const auto& g : reps) {
            const cplx ph = rho.has_exact_phase() ? unit_phase(-rho.scalar_phase(g)) : rho.evaluate_inverse(g)(0, 0);
            const double d0 = static_cast<double>(floor_mod(g.d(), c)) / static_cast<double>(c);
            for (int x = 0; x < N; ++x) row[x] += ph * (scale * F(static_cast<double>(x) / N + d0));
        }
    });

    EisensteinCheck r;
    r.nodes = N;
    auto coefficient = [&](std::int64_t upto, int stride) {
        KahanSum<cplx> acc;
        for (int x = 0; x < N; x += stride) {
            KahanSum<cplx> e;
            e.add(ys);
            for (std::int64_t c = 1; c <= upto; ++c) e.add(per_c[static_cast<std::size_t>(c)][x]);
            acc.add(e.value() * unit_phase(-static_cast<double>(m) * x / N));
        }
        return acc.value() * (static_cast<double>(stride) / N);
    };
    for (auto lv : {c_max / 4, c_max / 2, c_max}) r.trend.push_back({lv, {coefficient(lv, 1)}});
    r.lhs = r.trend.back().value[0];
    r.quadrature_error = std::abs(r.lhs - coefficient(c_max, 2));

    cplx kl = 0.0;
    if (c_max >= 1) kl = zeta_partial(group, rho, oo, Rational(0), Rational(m), cplx(s), c_max).value;
    if (m != 0) {
        const double am = static_cast<double>(std::llabs(m));
        r.rhs = kl * 2.0 * std::pow(pi, s) * std::pow(am, s - 0.5) / gamma_real(s) * std::sqrt(y) *
                bessel_K(s - 0.5, two_pi * am * y);
        r.disagreement = std::abs(r.lhs - r.rhs);
    } else {
        const double y1 = std::pow(y, 1 - s);
        r.rhs = ys + y1 * std::sqrt(pi) * gamma_real(s - 0.5) / gamma_real(s) * kl;
        r.rhs_alternative = ys + y1 * std::sqrt(pi) / gamma_real(s) * kl;
        r.disagreement = std::abs(r.lhs - r.rhs);
        r.alternative_disagreement = std::abs(r.lhs - r.rhs_alternative);
        const double scale = std::max(1.0, std::abs(r.lhs));
        if (r.disagreement <= agree_tol * scale && r.disagreement <= r.alternative_disagreement)
            r.matching_variant = "classical";
        else if (r.alternative_disagreement <= agree_tol * scale)
            r.matching_variant = "alternative";
        else
            r.matching_variant = "none";
    }
    return r;
}

}  // namespace radsum
