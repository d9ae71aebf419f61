#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "radsum/group.hpp"

using namespace radsum;

namespace {

GroupElement random_element(std::mt19937_64& rng, int len = 6) {
    std::uniform_int_distribution<int> k(-4, 4);
    GroupElement g = GroupElement::identity();
    for (int i = 0; i < len; ++i) g = g * GroupElement::T(k(rng)) * GroupElement::S();
    return g;
}

GroupElement random_gamma0(std::mt19937_64& rng, std::int64_t n) {
    std::uniform_int_distribution<std::int64_t> cc(1, 6), dd(-30, 30);
    for (;;) {
        std::int64_t c = n * cc(rng), d = dd(rng);
        if (std::gcd(c, d) != 1) continue;
        auto [g, x, y] = ext_gcd(d, c);
        (void)g;
        return GroupElement(x, -y, c, d);
    }
}

}  // namespace

TEST(GroupElement, CanonicalSignAndDeterminant) {
    GroupElement g(-1, -2, -1, -3);
    EXPECT_EQ(g, GroupElement(1, 2, 1, 3));
    EXPECT_GT(g.c(), 0);
    GroupElement h(-1, 0, 0, -1);
    EXPECT_TRUE(h.is_identity());
    EXPECT_THROW(GroupElement(1, 1, 1, 1), ConfigError);
}

TEST(GroupElement, ProductsStayCanonical) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto x = random_element(rng), y = random_element(rng);
        for (auto z : {x * y, x.inverse(), y * x.inverse()}) {
            EXPECT_EQ(z.a() * z.d() - z.b() * z.c(), 1);
            EXPECT_TRUE(z.c() > 0 || (z.c() == 0 && z.d() > 0));
        }
        EXPECT_TRUE((x * x.inverse()).is_identity());
    }
    auto s = GroupElement::S();
    EXPECT_TRUE((s * s).is_identity());
    auto st = s * GroupElement::T();
    EXPECT_TRUE((st * st * st).is_identity());
}

TEST(Act, Examples) {
    const cplx i(0, 1);
    EXPECT_NEAR(std::abs(act(GroupElement::S(), i) - i), 0, 1e-15);
    EXPECT_NEAR(std::abs(act(GroupElement::T(), i) - (1.0 + i)), 0, 1e-15);
    EXPECT_NEAR(std::abs(act(GroupElement(1, 2, 1, 3), i) - cplx(0.7, 0.1)), 0, 1e-15);
    auto inf = act_at_infinity(GroupElement(1, 2, 1, 3));
    EXPECT_FALSE(inf.infinite);
    EXPECT_EQ(inf.value, Rational(1));
    EXPECT_TRUE(act_at_infinity(GroupElement::T(5)).infinite);
}

TEST(Act, PreservesUpperHalfPlane) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2), v(0.05, 3);
    for (int i = 0; i < 100; ++i) {
        cplx t(u(rng), v(rng));
        EXPECT_GT(act(random_element(rng), t).imag(), 0);
    }
}

TEST(AutomorphyFactor, Examples) {
    const cplx i(0, 1);
    EXPECT_EQ(automorphy_factor(Rational(1, 3), GroupElement::T(4), cplx(0.2, 0.9)), cplx(1.0));
    for (auto w : {Rational(1, 2), Rational(-3, 4), Rational(-10)}) {
        cplx want = std::polar(1.0, pi * w.to_double() / 2);
        EXPECT_NEAR(std::abs(automorphy_factor(w, GroupElement::S(), i) - want), 0, 1e-14);
    }
    EXPECT_NEAR(std::abs(automorphy_factor(Rational(2), GroupElement(1, 0, 1, 1), 2.0 * i) - cplx(-3, 4)), 0,
                1e-13);
}

TEST(AutomorphyFactor, ModulusIsPower) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        auto g = random_element(rng);
        cplx t(0.1 * i - 2, 0.5 + 0.01 * i);
        double want = std::pow(std::abs(static_cast<double>(g.c()) * t + static_cast<double>(g.d())), -0.75);
        EXPECT_NEAR(std::abs(automorphy_factor(Rational(-3, 4), g, t)) / want, 1.0, 1e-12);
    }
}

TEST(Omega, Examples) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        auto a = random_element(rng), b = random_element(rng);
        EXPECT_EQ(omega_cocycle(Rational(-10), a, b), cplx(1.0));
        EXPECT_NEAR(std::abs(omega_cocycle(Rational(1, 2), GroupElement::identity(), b) - 1.0), 0, 1e-12);
    }
    auto s = GroupElement::S();
    cplx v = omega_cocycle(Rational(1, 2), s, s);
    EXPECT_NEAR(std::abs(v), 1.0, 1e-12);
    // S*S is the identity, so omega is the bare product j(S, S tau) j(S, tau)
    const cplx t(0, 2);
    cplx direct = automorphy_factor(Rational(1, 2), s, act(s, t)) * automorphy_factor(Rational(1, 2), s, t);
    EXPECT_NEAR(std::abs(v - direct), 0, 1e-12);
}

TEST(Omega, CocycleIdentity) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.5, 1.5), v(0.2, 2.0);
    for (auto w : {Rational(1, 2), Rational(-1, 2), Rational(-7, 3), Rational(0), Rational(-10), Rational(3, 5)}) {
        for (int i = 0; i < 60; ++i) {
            auto a = random_element(rng), b = random_element(rng);
            cplx t(u(rng), v(rng));
            cplx lhs = automorphy_factor(w, b * a, t) * omega_cocycle(w, a, b);
            cplx rhs = automorphy_factor(w, b, act(a, t)) * automorphy_factor(w, a, t);
            EXPECT_NEAR(std::abs(lhs - rhs), 0, 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST(Omega, TakesFinitelyManyValues) {
    std::mt19937_64 rng(9);
    const Rational w(1, 3);
    std::set<int> seen;
    for (int i = 0; i < 100; ++i) {
        cplx v = omega_cocycle(w, random_element(rng), random_element(rng));
        int hit = -1;
        for (int k : {0, 1})
            if (std::abs(v - std::polar(1.0, pi * w.to_double() * k)) < 1e-12) hit = k;
        ASSERT_GE(hit, 0);
        seen.insert(hit);
    }
    EXPECT_EQ(seen.size(), 2u);
}

TEST(GroupSpec, Membership) {
    auto g2 = GroupSpec::gamma0(2);
    EXPECT_TRUE(g2.contains(GroupElement::T()));
    EXPECT_FALSE(g2.contains(GroupElement::S()));
    EXPECT_TRUE(g2.contains(GroupElement(1, 0, 2, 1)));
    EXPECT_FALSE(g2.contains(1, 1, 2, 2));
    EXPECT_TRUE(GroupSpec::full().contains(GroupElement::S()));
    EXPECT_EQ(GroupSpec::gamma0(4).index(), 6);
    EXPECT_EQ(GroupSpec::gamma0(6).index(), 12);
}

TEST(DoubleCosets, Examples) {
    auto full = GroupSpec::full();
    auto c1 = double_cosets_at(full, cusp_infinity(), 1);
    ASSERT_EQ(c1.size(), 1u);
    EXPECT_EQ(c1[0].c(), 1);
    EXPECT_EQ(c1[0].d(), 0);
    EXPECT_TRUE(enumerate_double_cosets(GroupSpec::gamma0(2), cusp_infinity(), 1).empty());
    EXPECT_EQ(double_cosets_at(full, cusp_infinity(), 12).size(), 4u);
    for (std::int64_t c = 1; c <= 40; ++c)
        EXPECT_EQ(static_cast<std::int64_t>(double_cosets_at(full, cusp_infinity(), c).size()), euler_phi(c));
}

TEST(DoubleCosets, UnsupportedCusp) {
    CuspData zero;
    zero.point = CuspPoint::rational(Rational(0));
    zero.alpha = GroupElement::S();
    EXPECT_THROW(double_cosets_at(GroupSpec::full(), zero, 3), UnsupportedError);
}

// Brute force: all integer elements with small entries in alpha Gamma,
// bucketed by (c, a mod c*width, d mod c).
TEST(DoubleCosets, MatchBruteForce) {
    std::vector<GroupSpec> groups{GroupSpec::full(), GroupSpec::gamma0(2), GroupSpec::gamma0(4),
                                  GroupSpec::gamma0(6)};
    for (auto& g : groups) {
        for (auto& cusp : cusp_list(g)) {
            const GroupElement m = cusp.alpha.inverse();
            for (std::int64_t c = 1; c <= 10; ++c) {
                std::set<std::pair<std::int64_t, std::int64_t>> brute, fast;
                const std::int64_t B = 10 * c;
                for (std::int64_t a = -B; a <= B; ++a)
                    for (std::int64_t d = -B; d <= B; ++d) {
                        if (floor_mod(a * d - 1, c) != 0) continue;
                        std::int64_t b = (a * d - 1) / c;
                        if (std::abs(b) > B) continue;
                        GroupElement gam(a, b, c, d);
                        if (!g.contains(m * gam)) continue;
                        brute.insert({floor_mod(a, c * cusp.width), floor_mod(d, c)});
                    }
                for (auto& gam : double_cosets_at(g, cusp, c)) {
                    auto key = std::make_pair(floor_mod(gam.a(), c * cusp.width), floor_mod(gam.d(), c));
                    EXPECT_TRUE(fast.insert(key).second) << "duplicate rep";
                    EXPECT_TRUE(g.contains(m * gam));
                }
                EXPECT_EQ(brute, fast) << g.name() << " cusp " << cusp.str() << " c=" << c;
            }
        }
    }
}

TEST(Rectangle, Examples) {
    auto full = GroupSpec::full();
    auto r1 = enumerate_rectangle(full, 1);
    ASSERT_EQ(r1.size(), 1u);
    EXPECT_TRUE(r1[0].is_identity());
    auto r2 = enumerate_rectangle(full, 2);
    ASSERT_EQ(r2.size(), 8u);
    std::set<std::int64_t> ds;
    for (std::size_t i = 1; i < r2.size(); ++i) {
        EXPECT_EQ(r2[i].c(), 1);
        ds.insert(r2[i].d());
    }
    EXPECT_EQ(ds, (std::set<std::int64_t>{-3, -2, -1, 0, 1, 2, 3}));
    EXPECT_EQ(enumerate_rectangle(GroupSpec::gamma0(4), 4).size(), 1u);
}

TEST(Rectangle, DistinctCosetsInGroup) {
    auto g = GroupSpec::gamma0(3);
    auto r = enumerate_rectangle(g, 10);
    std::set<std::pair<std::int64_t, std::int64_t>> rows;
    for (auto& e : r) {
        EXPECT_TRUE(g.contains(e));
        EXPECT_TRUE(rows.insert(std::make_pair(e.c(), e.d())).second);
        EXPECT_LT(e.c(), 10);
        EXPECT_LT(std::abs(e.d()), 100);
    }
}

TEST(Cusps, Lists) {
    auto full = cusp_list(GroupSpec::full());
    ASSERT_EQ(full.size(), 1u);
    EXPECT_TRUE(full[0].at_infinity());
    EXPECT_EQ(full[0].width, 1);

    auto c4 = cusp_list(GroupSpec::gamma0(4));
    ASSERT_EQ(c4.size(), 3u);
    std::map<std::string, std::int64_t> w4;
    for (auto& c : c4) w4[c.str()] = c.width;
    EXPECT_EQ(w4, (std::map<std::string, std::int64_t>{{"oo", 1}, {"0", 4}, {"1/2", 1}}));

    auto c2 = cusp_list(GroupSpec::gamma0(2));
    std::map<std::string, std::int64_t> w2;
    for (auto& c : c2) w2[c.str()] = c.width;
    EXPECT_EQ(w2, (std::map<std::string, std::int64_t>{{"oo", 1}, {"0", 2}}));
}

TEST(Cusps, CountAndInequivalence) {
    for (std::int64_t n : {2, 3, 4, 6, 8, 9, 12}) {
        auto g = GroupSpec::gamma0(n);
        auto cs = cusp_list(g);
        std::int64_t expect = 0;
        for (std::int64_t v = 1; v <= n; ++v)
            if (n % v == 0) expect += euler_phi(std::gcd(v, n / v));
        EXPECT_EQ(static_cast<std::int64_t>(cs.size()), expect) << n;
        std::int64_t total_width = 0;
        for (auto& c : cs) total_width += c.width;
        EXPECT_EQ(total_width, g.index()) << n;
        for (std::size_t i = 0; i < cs.size(); ++i)
            for (std::size_t j = i + 1; j < cs.size(); ++j)
                EXPECT_FALSE(cusps_equivalent(g, cs[i].point, cs[j].point, 25))
                    << n << ": " << cs[i].str() << " ~ " << cs[j].str();
    }
}

TEST(Cusps, WidthMinimalAndScaling) {
    for (std::int64_t n : {2, 4, 6, 9, 12}) {
        auto g = GroupSpec::gamma0(n);
        for (auto& c : cusp_list(g)) {
            EXPECT_TRUE(act(c.alpha, c.point).infinite);
            EXPECT_TRUE(g.contains(cusp_parabolic(c, c.width)));
            for (auto p : prime_factors(c.width))
                EXPECT_FALSE(g.contains(cusp_parabolic(c, c.width / p))) << n << " " << c.str();
            // classical formula N / gcd(v^2, N)
            std::int64_t v = c.at_infinity() ? n : c.point.value.den();
            EXPECT_EQ(c.width, n / std::gcd(v * v, n));
        }
    }
}

TEST(Gamma0, RandomElementsAreMembers) {
    std::mt19937_64 rng(1);
    auto g = GroupSpec::gamma0(5);
    for (int i = 0; i < 50; ++i) {
        auto x = random_gamma0(rng, 5), y = random_gamma0(rng, 5);
        EXPECT_TRUE(g.contains(x * y));
        EXPECT_TRUE(g.contains(x.inverse()));
    }
}
