#pragma once

// Adaptive Gauss-Kronrod (7/15) on finite intervals, complex-valued.

#include <array>
#include <cmath>
#include <cstdio>
#include <complex>
#include <functional>
#include <queue>
#include <string>

#include "radsum/errors.hpp"
#include "radsum/numeric.hpp"

namespace radsum {

struct QuadraturePolicy {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int max_depth = 40;
    int max_evaluations = 2'000'000;

    std::string str() const {
        char buf[128];
        std::snprintf(buf, sizeof buf, "GK15 adaptive, abs %.1e, rel %.1e, depth %d", abs_tol, rel_tol, max_depth);
        return buf;
    }
};

struct QuadratureResult {
    cplx value{};
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_x{0.991455371120812639206854697526329,
                                                 0.949107912342758524526189684047851,
                                                 0.864864423359769072789712788640926,
                                                 0.741531185599394439863864773280788,
                                                 0.586087235467691130294144845693013,
                                                 0.405845151377397166906606412076961,
                                                 0.207784955007898467600689403773245,
                                                 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w{0.022935322010529224963732008058970,
                                                 0.063092092629978553290700663189204,
                                                 0.104790010322250183839876322541518,
                                                 0.140653259715525918745189590510238,
                                                 0.169004726639267902826583426598550,
                                                 0.190350578064785409913256402421014,
                                                 0.204432940075298892414161999234649,
                                                 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w{0.129484966168869693270611432679082,
                                               0.279705391489276667901467771423780,
                                               0.381830050505118944950369775488975,
                                               0.417959183673469387755102040816327};

template <typename F>
void gk15(F& f, double a, double b, cplx& k, cplx& g) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    k = 0.0;
    g = 0.0;
    for (int i = 0; i < 7; ++i) {
        const cplx f1 = f(mid - half * kronrod_x[i]);
        const cplx f2 = f(mid + half * kronrod_x[i]);
        k += kronrod_w[i] * (f1 + f2);
        if (i % 2 == 1) g += gauss_w[i / 2] * (f1 + f2);
    }
    const cplx fc = f(mid);
    k += kronrod_w[7] * fc;
    g += gauss_w[3] * fc;
    k *= half;
    g *= half;
}

struct Segment {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace detail

/// Integral of f over [a, b]. f: double -> cplx (or anything convertible).
/// Global-error bisection: the segment with the largest error estimate is
/// split until the summed estimate meets max(abs_tol, rel_tol |I|).
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, const QuadraturePolicy& pol = {}) {
    QuadratureResult r;
    auto g = [&](double x) -> cplx { return cplx(f(x)); };
    std::priority_queue<detail::Segment> heap;
    cplx run_value = 0.0;
    double run_error = 0.0;
    auto push = [&](double lo, double hi) {
        cplx k, gg;
        detail::gk15(g, lo, hi, k, gg);
        r.evaluations += 15;
        const double e = std::abs(k - gg);
        heap.push({lo, hi, k, e});
        run_value += k;
        run_error += e;
    };
    auto resum = [&] {
        // exact totals from the heap contents; the running ones drift
        KahanSum<cplx> total;
        KahanSum<double> err;
        auto copy = heap;
        for (; !copy.empty(); copy.pop()) {
            total.add(copy.top().value);
            err.add(copy.top().error);
        }
        run_value = total.value();
        run_error = err.value();
    };
    push(a, b);
    const std::size_t max_segments = std::size_t{1} << std::min(pol.max_depth, 16);
    for (;;) {
        if (run_error <= std::max(pol.abs_tol, pol.rel_tol * std::abs(run_value))) {
            resum();
            if (run_error <= std::max(pol.abs_tol, pol.rel_tol * std::abs(run_value))) break;
        }
        const auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (heap.size() >= max_segments || r.evaluations > pol.max_evaluations || !(mid > worst.a && mid < worst.b)) {
            resum();
            r.converged = false;
            break;
        }
        heap.pop();
        run_value -= worst.value;
        run_error -= worst.error;
        push(worst.a, mid);
        push(mid, worst.b);
    }
    r.value = run_value;
    r.error = run_error;
    return r;
}


/// Same, throwing ConvergenceError when the error target was not met.
template <typename F>
cplx integrate_or_throw(F&& f, double a, double b, const QuadraturePolicy& pol = {}) {
    auto r = integrate(std::forward<F>(f), a, b, pol);
    if (!r.converged) throw ConvergenceError("quadrature did not converge (" + pol.str() + ")");
    return r.value;
}

}  // namespace radsum
