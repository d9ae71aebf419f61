#pragma once

// Group elements of PSL2(Z), the two supported group families, cusp data and
// the coset enumerations every sum is built from.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "radsum/errors.hpp"
#include "radsum/numeric.hpp"
#include "radsum/rational.hpp"

namespace radsum {

// ----------------------------------------------------------- GroupElement

/// Integer matrix (a b; c d) of determinant 1, identified with its negative.
/// Stored with c > 0, or c == 0 and d > 0.
class GroupElement {
public:
    using int_type = std::int64_t;

    GroupElement() = default;
    GroupElement(int_type a, int_type b, int_type c, int_type d) : a_(a), b_(b), c_(c), d_(d) {
        if (a * d - b * c != 1) throw ConfigError("GroupElement: determinant is not 1");
        canonicalize();
    }

    static GroupElement identity() { return {1, 0, 0, 1}; }
    static GroupElement S() { return {0, -1, 1, 0}; }
    static GroupElement T(int_type k = 1) { return {1, k, 0, 1}; }

    int_type a() const { return a_; }
    int_type b() const { return b_; }
    int_type c() const { return c_; }
    int_type d() const { return d_; }

    bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }

    GroupElement inverse() const { return GroupElement(d_, -b_, -c_, a_); }

    friend GroupElement operator*(const GroupElement& x, const GroupElement& y) {
        auto mul = [](int_type p, int_type q, int_type r, int_type s) {
            __int128 v = static_cast<__int128>(p) * q + static_cast<__int128>(r) * s;
            if (v > INT64_MAX || v < -INT64_MAX) throw std::overflow_error("GroupElement: entry overflow");
            return static_cast<int_type>(v);
        };
        return GroupElement(mul(x.a_, y.a_, x.b_, y.c_), mul(x.a_, y.b_, x.b_, y.d_),
                            mul(x.c_, y.a_, x.d_, y.c_), mul(x.c_, y.b_, x.d_, y.d_));
    }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

    std::string str() const {
        return "(" + std::to_string(a_) + "," + std::to_string(b_) + ";" + std::to_string(c_) + "," +
               std::to_string(d_) + ")";
    }
    friend std::ostream& operator<<(std::ostream& os, const GroupElement& g) { return os << g.str(); }

private:
    int_type a_ = 1, b_ = 0, c_ = 0, d_ = 1;

    void canonicalize() {
        if (c_ < 0 || (c_ == 0 && d_ < 0)) {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
            d_ = -d_;
        }
    }
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto v : {g.a(), g.b(), g.c(), g.d()}) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Point of P^1(Q): a rational or infinity.
struct CuspPoint {
    bool infinite = true;
    Rational value{};

    static CuspPoint infinity() { return {}; }
    static CuspPoint rational(Rational r) { return {false, r}; }

    std::string str() const { return infinite ? "oo" : value.str(); }
    friend bool operator==(const CuspPoint&, const CuspPoint&) = default;
};

// ------------------------------------------------------------------ action

inline cplx act(const GroupElement& g, cplx tau) {
    return (static_cast<double>(g.a()) * tau + static_cast<double>(g.b())) /
           (static_cast<double>(g.c()) * tau + static_cast<double>(g.d()));
}

/// g(oo) = a/c, or oo when c = 0.
inline CuspPoint act_at_infinity(const GroupElement& g) {
    if (g.c() == 0) return CuspPoint::infinity();
    return CuspPoint::rational(Rational(g.a(), g.c()));
}

/// Moebius action on a cusp.
inline CuspPoint act(const GroupElement& g, const CuspPoint& x) {
    if (x.infinite) return act_at_infinity(g);
    const auto p = x.value.num(), q = x.value.den();
    const std::int64_t num = g.a() * p + g.b() * q;
    const std::int64_t den = g.c() * p + g.d() * q;
    if (den == 0) return CuspPoint::infinity();
    return CuspPoint::rational(Rational(num, den));
}

/// j_w(g, tau) = exp(w Ln(c tau + d)) on the canonical representative.
/// |j| = |c tau + d|^w and j = 1 for translations.
inline cplx automorphy_factor(const Rational& w, const GroupElement& g, cplx tau) {
    if (g.c() == 0) return 1.0;
    const cplx z = static_cast<double>(g.c()) * tau + static_cast<double>(g.d());
    return std::exp(w.to_double() * std::log(z));
}

/// omega_w(alpha, beta) = j(beta, alpha tau) j(alpha, tau) / j(beta alpha, tau).
/// Evaluated at two sample points; snapped onto exp(i pi w k), |k| <= 2.
inline cplx omega_cocycle(const Rational& w, const GroupElement& alpha, const GroupElement& beta) {
    if (w.is_integer() && w.num() % 2 == 0) return 1.0;
    const GroupElement ba = beta * alpha;
    auto at = [&](cplx tau) {
        return automorphy_factor(w, beta, act(alpha, tau)) * automorphy_factor(w, alpha, tau) /
               automorphy_factor(w, ba, tau);
    };
    const cplx v1 = at({0.0, 2.0});
    const cplx v2 = at({0.3, 0.7});
    if (std::abs(v1 - v2) > 1e-8)
        throw NumericalPathologyError("omega_cocycle: sample points disagree for " + alpha.str() + ", " +
                                      beta.str());
    for (int k = -2; k <= 2; ++k) {
        const cplx cand = std::polar(1.0, pi * w.to_double() * k);
        if (std::abs(v1 - cand) < 1e-9) return cand;
    }
    return v1 / std::abs(v1);
}

// --------------------------------------------------------------- GroupSpec

enum class GroupFamily { Full, Gamma0 };

struct GroupSpec {
    GroupFamily family = GroupFamily::Full;
    std::int64_t level = 1;

    static GroupSpec full() { return {GroupFamily::Full, 1}; }
    static GroupSpec gamma0(std::int64_t n) {
        if (n < 1) throw ConfigError("Gamma0 level must be positive");
        if (n == 1) return full();
        return {GroupFamily::Gamma0, n};
    }

    bool contains(const GroupElement& g) const {
        if (family == GroupFamily::Full) return true;
        return g.c() % level == 0;
    }
    bool contains(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) const {
        if (a * d - b * c != 1) return false;
        return family == GroupFamily::Full || c % level == 0;
    }

    /// Index in SL2(Z): N prod (1 + 1/p).
    std::int64_t index() const {
        std::int64_t idx = level;
        for (auto p : prime_factors(level)) idx = idx / p * (p + 1);
        return idx;
    }

    std::string name() const {
        return family == GroupFamily::Full ? "SL2Z" : "Gamma0(" + std::to_string(level) + ")";
    }
    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

// ---------------------------------------------------------------- CuspData

/// A cusp with its width and an integral scaling matrix alpha, alpha(cusp) = oo.
/// alpha^{-1} T^width alpha lies in the group; width is minimal with that property.
struct CuspData {
    CuspPoint point{};
    std::int64_t width = 1;
    GroupElement alpha = GroupElement::identity();

    bool at_infinity() const { return point.infinite; }
    std::string str() const { return point.str(); }
};

/// Generator of the stabilizer of the cusp in PSL2(Z), conjugated by alpha.
inline GroupElement cusp_parabolic(const CuspData& cusp, std::int64_t t) {
    return cusp.alpha.inverse() * GroupElement::T(t) * cusp.alpha;
}

inline std::int64_t classical_width(const GroupSpec& g, const CuspData& cusp) {
    for (std::int64_t t = 1;; ++t)
        if (g.contains(cusp_parabolic(cusp, t))) return t;
}

inline CuspData cusp_infinity() { return {}; }

/// Cusp data for the rational cusp p/q (lowest terms) in the given group.
inline CuspData make_cusp(const GroupSpec& g, const CuspPoint& pt) {
    CuspData cd;
    cd.point = pt;
    if (pt.infinite) {
        cd.alpha = GroupElement::identity();
    } else {
        const auto p = pt.value.num(), q = pt.value.den();
        // M = (p b; q d) with p d - b q = 1, M(oo) = p/q; alpha = M^{-1}
        auto [gg, x, y] = ext_gcd(p, q);
        (void)gg;
        // p x + q y = 1  => d = x, b = -y
        GroupElement m(p, -y, q, x);
        cd.alpha = m.inverse();
    }
    cd.width = classical_width(g, cd);
    return cd;
}

/// One representative per class of cusps.
inline std::vector<CuspData> cusp_list(const GroupSpec& g) {
    std::vector<CuspData> out;
    if (g.family == GroupFamily::Full) {
        out.push_back(cusp_infinity());
        return out;
    }
    const std::int64_t n = g.level;
    out.push_back(make_cusp(g, CuspPoint::infinity()));
    for (std::int64_t v = 1; v < n; ++v) {
        if (n % v != 0) continue;
        const std::int64_t m = std::gcd(v, n / v);
        for (std::int64_t u = 0; u < m || (m == 1 && u == 0); ++u) {
            if (std::gcd(u, m) != 1) continue;
            std::int64_t a = u;
            while (std::gcd(a, v) != 1) a += m;
            out.push_back(make_cusp(g, CuspPoint::rational(Rational(a, v))));
        }
    }
    return out;
}

/// Whether two cusps are equivalent under the group (brute search over a
/// bounded box; used by tests).
inline bool cusps_equivalent(const GroupSpec& g, const CuspPoint& x, const CuspPoint& y, std::int64_t bound = 40) {
    for (std::int64_t c = 0; c <= bound; ++c)
        for (std::int64_t d = -bound; d <= bound; ++d) {
            if (c == 0 && d != 1) continue;
            if (std::gcd(c, d) != 1) continue;
            if (g.family == GroupFamily::Gamma0 && c % g.level != 0) continue;
            auto [gg, xx, yy] = ext_gcd(d, c);
            (void)gg;
            // a d - b c = 1 with a = xx, b = -yy
            for (std::int64_t t = -bound; t <= bound; ++t) {
                GroupElement e(xx + t * c, -yy + t * d, c, d);
                if (act(e, x) == y) return true;
            }
        }
    return false;
}

// ------------------------------------------------------------- enumeration

struct CosetRep {
    std::int64_t c;
    GroupElement gamma;
};

/// Representatives of Gamma_oo \ alpha Gamma / Gamma_oo at a single c.
/// Left translations are by T^{width} (width of the cusp), right ones by T,
/// so each gamma has a mod c*width and 0 <= d < c.
inline std::vector<GroupElement> double_cosets_at(const GroupSpec& g, const CuspData& cusp, std::int64_t c) {
    std::vector<GroupElement> out;
    if (c < 1) return out;
    const GroupElement m = cusp.alpha.inverse();
    if (m.c() != 0 && g.family == GroupFamily::Full)
        throw UnsupportedError("double cosets: full modular group has only the cusp at infinity");
    if (cusp.at_infinity() && g.family == GroupFamily::Gamma0 && c % g.level != 0) return out;
    out.reserve(static_cast<std::size_t>(c * cusp.width));
    for (std::int64_t d = 0; d < c; ++d) {
        std::int64_t a0;
        if (c < (std::int64_t{1} << 31)) {
            a0 = unit_inverse_small(static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(c));
            if (a0 < 0) continue;
        } else {
            auto [gg, x, y] = ext_gcd(d, c);
            (void)y;
            if (gg != 1) continue;
            a0 = floor_mod(x, c);
        }
        for (std::int64_t t = 0; t < cusp.width; ++t) {
            const std::int64_t a = a0 + t * c;
            GroupElement gam(a, (a * d - 1) / c, c, d);
            if (cusp.at_infinity() || g.contains(m * gam)) out.push_back(gam);
        }
    }
    return out;
}

/// All of the above for 0 < c <= c_max, in c order.
inline std::vector<CosetRep> enumerate_double_cosets(const GroupSpec& g, const CuspData& cusp,
                                                     std::int64_t c_max) {
    std::vector<CosetRep> out;
    for (std::int64_t c = 1; c <= c_max; ++c)
        for (auto& gam : double_cosets_at(g, cusp, c)) out.push_back({c, gam});
    return out;
}


/// Left Gamma_oo cosets meeting {0 <= c < K, |d| < K^2}; identity first.
inline std::vector<GroupElement> enumerate_rectangle(const GroupSpec& g, std::int64_t K) {
    std::vector<GroupElement> out{GroupElement::identity()};
    const std::int64_t dmax = K * K;
    for (std::int64_t c = 1; c < K; ++c) {
        if (g.family == GroupFamily::Gamma0 && c % g.level != 0) continue;
        for (std::int64_t d = -dmax + 1; d < dmax; ++d) {
            if (std::gcd(c, d) != 1) continue;
            auto [gg, x, y] = ext_gcd(d, c);
            (void)gg;
            // x d + y c = 1, so a = x, b = -y
            out.emplace_back(x, -y, c, d);
        }
    }
    return out;
}

/// Left Gamma_oo cosets with 0 < c <= c_max and |d| <= d_max, identity first.
inline std::vector<GroupElement> enumerate_box(const GroupSpec& g, std::int64_t c_max, std::int64_t d_max) {
    std::vector<GroupElement> out{GroupElement::identity()};
    for (std::int64_t c = 1; c <= c_max; ++c) {
        if (g.family == GroupFamily::Gamma0 && c % g.level != 0) continue;
        for (std::int64_t d = -d_max; d <= d_max; ++d) {
            if (std::gcd(c, d) != 1) continue;
            auto [gg, x, y] = ext_gcd(d, c);
            (void)gg;
            out.emplace_back(x, -y, c, d);
        }
    }
    return out;
}

}  // namespace radsum
