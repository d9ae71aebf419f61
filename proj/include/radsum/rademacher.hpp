#pragma once

// Fourier coefficients of Rademacher sums and of the shadow Poincare series,
// the constant Delta, the leading asymptotic, and dimension / basis counts.

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
#include "radsum/rational.hpp"
#include "radsum/specfun.hpp"

namespace radsum {

// -------------------------------------------------------------------- job

struct RademacherJob {
    GroupSpec group = GroupSpec::full();
    MultiplierSystem rho = MultiplierSystem::trivial();
    CuspData cusp{};
    int i = 0;
    Rational n{-1};
    std::int64_t c_max = 1000;
    std::int64_t k_max = 10;
    PrecisionPolicy precision{};

    const Rational& weight() const { return rho.weight(); }
    PoleSpec pole() const { return {cusp, n, i}; }
    MultiplierSystem restricted_rho() const { return rho.restricted_to(group); }

    void validate() const {
        if (weight() > Rational(0))
            throw OutOfScopeError("weight " + weight().str() + " > 0: Rademacher sums here need w <= 0");
        if (!(n < Rational(0))) throw ConfigError("pole exponent must be negative");
        if (c_max < 1) throw ConfigError("c_max must be positive");
        if (k_max < 0) throw ConfigError("k_max must be nonnegative");
        precision.validate();
        if (!cusp.at_infinity()) {
            if (group.family == GroupFamily::Full)
                throw UnsupportedError("the full modular group has only the cusp at infinity");
            if (!rho.has_exact_phase())
                throw UnsupportedError("poles away from infinity need a scalar preset multiplier");
        }
        const auto r = restricted_rho();
        check_pole_exponent(r, pole(), r.cusp_exponents(cusp));
    }

    /// One line echo used in reports.
    std::string str() const {
        return group.name() + ", w=" + weight().str() + ", rho=" + rho.name() + ", cusp=" + cusp.str() +
               ", i=" + std::to_string(i) + ", n=" + n.str();
    }
};

// ----------------------------------------------------------------- series

struct CoefficientEntry {
    Rational k;
    cplx value{};
    double error = 0.0;
};

struct ComponentSeries {
    int j = 0;
    Rational mu;  // exponent at oo
    std::vector<CoefficientEntry> terms;
    std::optional<cplx> constant;  // absent when mu != 0
    double constant_error = 0.0;
    cplx pole_coefficient{};  // multiplies q^{pole_exponent}
};

struct CoefficientSeries {
    Rational weight;
    Rational pole_exponent;       // n for Rademacher sums, -n for the shadow
    bool pole_folded = false;     // pole term already counted in terms (shadow)
    std::int64_t width = 1;       // h at oo
    std::int64_t c_max = 0, k_max = 0;
    std::string convergence = "absolute";  // or "conditional", "non-convergent"
    std::vector<ComponentSeries> components;

    const ComponentSeries& component(int j) const { return components.at(static_cast<std::size_t>(j)); }

    /// Coefficient of q^k in component j, or nullopt when k is not listed.
    std::optional<CoefficientEntry> at(int j, const Rational& k) const {
        for (auto& t : component(j).terms)
            if (t.k == k) return t;
        return std::nullopt;
    }

    /// Truncated q-series at tau. The error adds the per-coefficient errors and
    /// a geometric guess for the omitted terms from the last two listed ones.
    std::pair<cplx, double> evaluate(int j, cplx tau) const {
        const auto& comp = component(j);
        KahanSum<cplx> s;
        double err = 0;
        auto q_pow = [&](const Rational& k) { return std::exp(cplx(0, two_pi) * k.to_double() * tau); };
        if (!pole_folded && comp.pole_coefficient != cplx(0.0)) s.add(comp.pole_coefficient * q_pow(pole_exponent));
        if (comp.constant) {
            s.add(*comp.constant);
            err += comp.constant_error;
        }
        for (auto& t : comp.terms) {
            const cplx qk = q_pow(t.k);
            s.add(t.value * qk);
            err += t.error * std::abs(qk);
        }
        const auto& ts = comp.terms;
        if (ts.size() >= 2) {
            const double a = std::abs(ts[ts.size() - 2].value * q_pow(ts[ts.size() - 2].k));
            const double b = std::abs(ts.back().value * q_pow(ts.back().k));
            const double r = a > 0 ? b / a : 1.0;
            err += r < 1 ? b * r / (1 - r) : std::numeric_limits<double>::infinity();
        }
        return {s.value(), err};
    }
};

// ------------------------------------------------------------------ Delta

struct DeltaResult {
    std::vector<cplx> value;
    std::vector<double> error;
    std::string convergence = "absolute";
};

namespace detail {

/// Cells (j, k) for every component and every k in (0, k_max] on its grid.
inline std::vector<KloostermanCell> grid_cells(const CuspExponents& at_inf, std::int64_t k_max) {
    std::vector<KloostermanCell> cells;
    const std::int64_t h = at_inf.cusp.width;
    for (int j = 0; j < static_cast<int>(at_inf.mu.size()); ++j)
        for (std::int64_t m = 0;; ++m) {
            const Rational k = (Rational(m) + at_inf.mu[j]) / Rational(h);
            if (k > Rational(k_max)) break;
            if (k > Rational(0)) cells.push_back({j, k});
        }
    return cells;
}

/// Tail of sum_{c > C} A c^beta (2pi/(c h)) pref (x_c/2)^nu / Gamma(nu+1) e^{x_c^2/(4(nu+1))},
/// x_c = 4 pi sqrt(k|n|)/c; the Bessel factor bound holds for I_nu and J_nu.
inline double bessel_tail(double A, double beta, std::int64_t C, double h, double pref, double nu, double kn) {
    const double p = 1.0 + nu - beta;  // exponent of 1/c in the summand
    if (p <= 1.0) return std::numeric_limits<double>::infinity();
    const double xc = 4 * pi * std::sqrt(kn) / static_cast<double>(C + 1);
    const double growth = std::exp(xc * xc / (4 * (nu + 1)));
    const double coef = A * two_pi / h * pref * std::pow(2 * pi * std::sqrt(kn), nu) / gamma_real(nu + 1) * growth;
    // sum_{c > C} c^{-p} <= C^{1-p}/(p-1)
    return coef * std::pow(static_cast<double>(C), 1.0 - p) / (p - 1.0);
}

}  // namespace detail

/// Delta_j for each component, from Kl_{n,0}(1 - w/2).
inline DeltaResult delta_constant(const RademacherJob& job) {
    job.validate();
    const auto rho = job.restricted_rho();
    const auto at_inf = rho.cusp_exponents(cusp_infinity());
    const double w = job.weight().to_double();
    const double h = static_cast<double>(at_inf.cusp.width);
    DeltaResult r;
    r.value.assign(static_cast<std::size_t>(rho.dim()), 0.0);
    r.error.assign(static_cast<std::size_t>(rho.dim()), 0.0);
    std::vector<KloostermanCell> cells;
    for (int j = 0; j < rho.dim(); ++j)
        if (at_inf.mu[j].is_zero()) cells.push_back({j, 0});
    if (cells.empty()) return r;
    KloostermanTable table(job.group, rho, job.pole(), cells, job.precision.accumulation());
    table.ensure(job.c_max);
    const cplx pref = -1.0 / (2 * h) * std::exp((2 - w) * std::log(cplx(0, two_pi))) / gamma_real(2 - w) *
                      std::pow(-job.n.to_double(), 1 - w);
    if (w < 0) r.convergence = "absolute";
    for (std::size_t t = 0; t < cells.size(); ++t) {
        const auto j = static_cast<std::size_t>(cells[t].j);
        if (w < 0) {
            auto z = zeta_partial(table, t, cplx(1 - w / 2, 0), job.c_max);
            r.value[j] = pref * z.value;
            r.error[j] = std::abs(pref) * z.tail;
        } else {
            auto z = zeta_at_one(table, t, job.c_max);
            r.value[j] = pref * z.value;
            r.error[j] = std::abs(pref) * z.error;
            if (!z.converged) r.convergence = "non-convergent";
            else if (r.convergence != "non-convergent") r.convergence = "conditional";
        }
    }
    return r;
}

// ----------------------------------------------------------- coefficients

namespace detail {

/// Rademacher coefficient from one table column, with the tail bound.
inline CoefficientEntry rademacher_cell(const KloostermanTable& table, std::size_t cell, const Rational& n, double w,
                                        std::int64_t c_max, const PrecisionPolicy& pol) {
    const Rational k = table.cells()[cell].k;
    const double h = static_cast<double>(table.width());
    const double kn = (k * (-n)).to_double();
    const double nu = 1 - w;
    const double pref = std::pow((k / (-n)).to_double(), (w - 1) / 2);
    const cplx rot = std::polar(1.0, pi * nu / 2);
    ComplexAccumulator acc(pol.accumulation());
    for (std::int64_t c = 1; c <= c_max; ++c) {
        const cplx s = table.at(c, cell);
        if (s == cplx(0.0)) continue;
        const double x = 4 * pi * std::sqrt(kn) / static_cast<double>(c);
        const double bi = bessel_I(nu, x, pol);
        if (!std::isfinite(bi)) throw NumericalPathologyError("Bessel I overflow at k = " + k.str());
        acc.add(s * cplx(0, -two_pi / (static_cast<double>(c) * h)) * pref * rot * bi);
    }
    CoefficientEntry e{k, acc.value(), 0.0};
    auto [A, beta] = table.growth_fit(cell);
    e.error = A > 0 ? bessel_tail(A, beta, c_max, h, pref, nu, kn) : 0.0;
    return e;
}

inline CoefficientEntry shadow_cell(const KloostermanTable& table, std::size_t cell, const Rational& n, double w,
                                    std::int64_t c_max) {
    const Rational k = table.cells()[cell].k;
    const double h = static_cast<double>(table.width());
    const double kn = (k * (-n)).to_double();
    const double nu = 1 - w;
    const double pref = std::pow((k / (-n)).to_double(), (1 - w) / 2);
    // 2 pi i^{w-2} / (c h)
    const cplx iw = std::polar(1.0, pi / 2 * (w - 2));
    ComplexAccumulator acc(table.precision());
    for (std::int64_t c = 1; c <= c_max; ++c) {
        const cplx s = table.at(c, cell);
        if (s == cplx(0.0)) continue;
        const double x = 4 * pi * std::sqrt(kn) / static_cast<double>(c);
        acc.add(s * (two_pi / (static_cast<double>(c) * h)) * iw * pref * bessel_J(nu, x));
    }
    CoefficientEntry e{k, acc.value(), 0.0};
    auto [A, beta] = table.growth_fit(cell);
    e.error = A > 0 ? bessel_tail(A, beta, c_max, h, pref, nu, kn) : 0.0;
    return e;
}

inline CoefficientSeries series_shell(const RademacherJob& job, const CuspExponents& at_inf, std::int64_t k_max,
                                      std::int64_t c_max) {
    CoefficientSeries s;
    s.weight = job.weight();
    s.width = at_inf.cusp.width;
    s.c_max = c_max;
    s.k_max = k_max;
    for (int j = 0; j < static_cast<int>(at_inf.mu.size()); ++j) {
        ComponentSeries comp;
        comp.j = j;
        comp.mu = at_inf.mu[j];
        s.components.push_back(comp);
    }
    return s;
}

}  // namespace detail

/// Coefficients of R_{Gamma,w,rho,i (alpha q)^n} for 0 < k <= k_max with
/// c <= c_max, plus the pole term at oo and the constants 2 Delta_j.
inline CoefficientSeries coefficients(const RademacherJob& job, std::int64_t k_max, std::int64_t c_max) {
    RademacherJob jb = job;
    jb.k_max = k_max;
    jb.c_max = c_max;
    jb.validate();
    const auto rho = jb.restricted_rho();
    const auto at_inf = rho.cusp_exponents(cusp_infinity());
    const double w = jb.weight().to_double();
    auto series = detail::series_shell(jb, at_inf, k_max, c_max);
    series.pole_exponent = jb.n;
    if (jb.cusp.at_infinity()) series.components[jb.i].pole_coefficient = 1.0;

    const auto cells = detail::grid_cells(at_inf, k_max);
    if (!cells.empty()) {
        KloostermanTable table(jb.group, rho, jb.pole(), cells, jb.precision.accumulation());
        table.ensure(c_max);
        std::vector<CoefficientEntry> out(cells.size());
        parallel_for(0, static_cast<std::int64_t>(cells.size()), [&](std::int64_t t) {
            out[static_cast<std::size_t>(t)] =
                detail::rademacher_cell(table, static_cast<std::size_t>(t), jb.n, w, c_max, jb.precision);
        });
        for (std::size_t t = 0; t < cells.size(); ++t) series.components[cells[t].j].terms.push_back(out[t]);
    }
    const auto delta = delta_constant(jb);
    series.convergence = delta.convergence;
    for (int j = 0; j < rho.dim(); ++j)
        if (at_inf.mu[j].is_zero()) {
            series.components[j].constant = 2.0 * delta.value[j];
            series.components[j].constant_error = 2.0 * delta.error[j];
        }
    return series;
}

/// Single coefficient at exponent k in component j (no Delta, no pole).
inline CoefficientEntry coefficient_at(const RademacherJob& job, int j, const Rational& k, std::int64_t c_max) {
    job.validate();
    const auto rho = job.restricted_rho();
    KloostermanTable table(job.group, rho, job.pole(), {{j, k}}, job.precision.accumulation());
    table.ensure(c_max);
    return detail::rademacher_cell(table, 0, job.n, job.weight().to_double(), c_max, job.precision);
}

/// Coefficients of the weight 2-w shadow P_{Gamma,2-w,conj rho,i (alpha q)^{-n}}.
inline CoefficientSeries shadow_coefficients(const RademacherJob& job, std::int64_t k_max, std::int64_t c_max) {
    RademacherJob jb = job;
    jb.k_max = k_max;
    jb.c_max = c_max;
    jb.validate();
    const auto rho = jb.restricted_rho().conjugate();
    const auto at_inf = rho.cusp_exponents(cusp_infinity());
    const double w = jb.weight().to_double();
    auto series = detail::series_shell(jb, at_inf, k_max, c_max);
    series.weight = Rational(2) - jb.weight();
    series.pole_exponent = -jb.n;
    series.convergence = "absolute";
    const PoleSpec pole{jb.cusp, -jb.n, jb.i};
    check_pole_exponent(rho, pole, rho.cusp_exponents(jb.cusp));
    if (jb.cusp.at_infinity()) series.components[jb.i].pole_coefficient = 1.0;

    const auto cells = detail::grid_cells(at_inf, k_max);
    if (!cells.empty()) {
        KloostermanTable table(jb.group, rho, pole, cells, jb.precision.accumulation());
        table.ensure(c_max);
        std::vector<CoefficientEntry> out(cells.size());
        parallel_for(0, static_cast<std::int64_t>(cells.size()), [&](std::int64_t t) {
            out[static_cast<std::size_t>(t)] = detail::shadow_cell(table, static_cast<std::size_t>(t), jb.n, w, c_max);
        });
        for (std::size_t t = 0; t < cells.size(); ++t) {
            auto e = out[t];
            // the pole q^{-n} sits on the grid here; fold it in
            if (jb.cusp.at_infinity() && cells[t].j == jb.i && e.k == -jb.n) e.value += 1.0;
            series.components[cells[t].j].terms.push_back(e);
        }
        series.pole_folded = jb.cusp.at_infinity() && -jb.n <= Rational(k_max);
    }
    return series;
}

// -------------------------------------------------------------- asymptotic

/// Leading-term estimate of the coefficient at k, from the first c with S(c) != 0:
/// S(c) e^{-i pi w/2} / (sqrt(2c) h) k^{(2w-3)/4} (-n)^{-(2w-1)/4} exp(4 pi sqrt(-k n)/c).
inline cplx asymptotic_estimate(const RademacherJob& job, const Rational& k, int j = 0) {
    job.validate();
    if (!(k > Rational(0))) throw ConfigError("asymptotic estimate needs k > 0");
    const auto rho = job.restricted_rho();
    KloostermanTable table(job.group, rho, job.pole(), {{j, k}}, job.precision.accumulation());
    table.ensure(job.c_max);
    std::int64_t c_min = 0;
    for (std::int64_t c = 1; c <= job.c_max; ++c)
        if (std::abs(table.at(c, 0)) > 1e-9) {
            c_min = c;
            break;
        }
    if (c_min == 0) throw ConvergenceError("no nonzero Kloosterman sum for c <= " + std::to_string(job.c_max));
    const double w = job.weight().to_double();
    const double h = static_cast<double>(table.width());
    const double kd = k.to_double(), nd = -job.n.to_double(), c = static_cast<double>(c_min);
    return table.at(c_min, 0) * std::polar(1.0, -pi * w / 2) / (std::sqrt(2 * c) * h) *
           std::pow(kd, (2 * w - 3) / 4) / std::pow(nd, (2 * w - 1) / 4) * std::exp(4 * pi * std::sqrt(kd * nd) / c);
}

// -------------------------------------------------------- dimension/basis

/// Upper bound for the space of weight-w forms with poles of order <= m:
/// m d, plus the invariant-subspace dimension when w = 0.
inline std::int64_t dimension_bound(const GroupSpec& group, const MultiplierSystem& rho, const Rational& w,
                                    std::int64_t m) {
    (void)group;
    if (m < 1) throw ConfigError("m must be positive");
    std::int64_t d = rho.dim();
    if (w.is_zero()) return m * d + rho.invariant_subspace_dim();
    return m * d;
}

struct BasisSpec {
    std::vector<std::pair<int, Rational>> poles;  // (component, exponent)
    bool constants = false;
};

/// Pole exponents (mu_i - l)/h, l = 1..m, per component.
inline BasisSpec basis_spec(const GroupSpec& group, const MultiplierSystem& rho, const Rational& w, std::int64_t m) {
    if (m < 1) throw ConfigError("m must be positive");
    const auto at_inf = rho.restricted_to(group).cusp_exponents(cusp_infinity());
    BasisSpec b;
    const Rational h(at_inf.cusp.width);
    for (int i = 0; i < rho.dim(); ++i)
        for (std::int64_t l = 1; l <= m; ++l) b.poles.emplace_back(i, (at_inf.mu[i] - Rational(l)) / h);
    b.constants = w.is_zero() && rho.invariant_subspace_dim() > 0;
    return b;
}

}  // namespace radsum
