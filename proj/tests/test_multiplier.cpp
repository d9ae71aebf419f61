#include <gtest/gtest.h>

#include <random>

#include "radsum/multiplier.hpp"

using namespace radsum;

namespace {

GroupElement random_element(std::mt19937_64& rng, int len = 5) {
    std::uniform_int_distribution<int> k(-4, 4);
    GroupElement g = GroupElement::identity();
    for (int i = 0; i < len; ++i) g = g * GroupElement::T(k(rng)) * GroupElement::S();
    return g * GroupElement::T(k(rng));
}

// eta(tau) = q^{1/24} prod (1 - q^n), by the truncated product
cplx eta(cplx tau) {
    const cplx q = std::exp(cplx(0, two_pi) * tau);
    cplx p = 1.0, qn = q;
    for (int n = 1; n < 2000 && std::abs(qn) > 1e-18; ++n) {
        p *= 1.0 - qn;
        qn *= q;
    }
    return std::exp(cplx(0, two_pi / 24) * tau) * p;
}

Matrix scalar(cplx v) {
    Matrix m(1, 1);
    m(0, 0) = v;
    return m;
}

MultiplierSystem s3_irrep() {
    Matrix s(2, 2), t(2, 2);
    const double r = std::sqrt(3.0) / 2;
    s << -0.5, r, r, 0.5;
    t << 1, 0, 0, -1;
    return MultiplierSystem::explicit_system(0, s, t);
}

std::vector<MultiplierSystem> all_systems() {
    return {MultiplierSystem::trivial(),
            MultiplierSystem::trivial(-10),
            MultiplierSystem::eta_power(1),
            MultiplierSystem::eta_power(-1),
            MultiplierSystem::eta_power(3),
            MultiplierSystem::eta_power(1).conjugate(),
            s3_irrep(),
            MultiplierSystem::direct_sum({MultiplierSystem::trivial(), s3_irrep()}),
            MultiplierSystem::explicit_system(Rational(-1, 2), scalar(std::polar(1.0, pi / 4)),
                                              scalar(unit_phase(Rational(-1, 24))))};
}

}  // namespace

TEST(Word, Examples) {
    EXPECT_EQ(word_decompose(GroupElement::T()), (Word{{false, 1}}));
    EXPECT_EQ(word_decompose(GroupElement::S()), (Word{{true, 0}}));
    EXPECT_EQ(word_decompose(GroupElement::identity()), Word{});
    GroupElement g(1, 0, 1, 1);
    EXPECT_EQ(word_product(word_decompose(g)), g);
}

TEST(Word, ReconstructsAndIsShort) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::int64_t> u(-1000000, 1000000);
    for (int i = 0; i < 300; ++i) {
        std::int64_t c = std::abs(u(rng)) + 1, d = u(rng);
        if (std::gcd(c, d) != 1) continue;
        auto [gg, x, y] = ext_gcd(d, c);
        (void)gg;
        GroupElement g(x, -y, c, d);
        Word w = word_decompose(g);
        EXPECT_EQ(word_product(w), g);
        // nearest-integer Euclid halves c each round
        EXPECT_LE(w.size(), 2 * 22u + 2);
    }
}

TEST(Multiplier, TrivialAndEtaExamples) {
    auto triv = MultiplierSystem::trivial();
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(triv.evaluate(random_element(rng)), Matrix::Identity(1, 1));
    auto e = MultiplierSystem::eta_power(1);
    EXPECT_NEAR(std::abs(e.evaluate(GroupElement::T())(0, 0) - unit_phase(Rational(1, 24))), 0, 1e-15);
    EXPECT_THROW(MultiplierSystem::trivial(Rational(-1, 2)), ConfigError);
}

// eta(S i) = eta(i) at the self-dual point, so rho(S) j(S, i) = 1 there.
TEST(Multiplier, EtaAgainstQSeries) {
    auto e = MultiplierSystem::eta_power(1);
    const Rational w(1, 2);
    const cplx i(0, 1);
    cplx rs = e.evaluate(GroupElement::S())(0, 0);
    EXPECT_NEAR(std::abs(rs * automorphy_factor(w, GroupElement::S(), i) - 1.0), 0, 1e-14);
    EXPECT_NEAR(std::abs(eta(act(GroupElement::S(), i)) - eta(i)), 0, 1e-14);

    std::mt19937_64 rng(8);
    for (int k = 0; k < 40; ++k) {
        auto g = random_element(rng, 3);
        cplx tau(0.1 - 0.02 * k, 0.9 + 0.01 * k);
        cplx gt = act(g, tau);
        if (gt.imag() < 0.05) continue;
        cplx want = eta(gt) / (automorphy_factor(w, g, tau) * eta(tau));
        EXPECT_NEAR(std::abs(e.evaluate(g)(0, 0) - want), 0, 1e-9) << g;
    }
}

TEST(Multiplier, EtaClosedFormMatchesWordEvaluation) {
    auto e = MultiplierSystem::eta_power(1);
    auto words = MultiplierSystem::explicit_system(Rational(1, 2), e.image_s(), e.image_t_power(1));
    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
        auto g = random_element(rng, 6);
        EXPECT_NEAR((e.evaluate(g) - words.evaluate(g)).norm(), 0, 1e-10) << g;
    }
}

TEST(Multiplier, ConsistencyCondition) {
    std::mt19937_64 rng(99);
    for (auto& m : all_systems()) {
        for (int i = 0; i < 100; ++i) {
            auto a = random_element(rng), b = random_element(rng);
            Matrix lhs = m.evaluate(a * b);
            Matrix rhs = omega_cocycle(m.weight(), b, a) * m.evaluate(a) * m.evaluate(b);
            ASSERT_NEAR((lhs - rhs).norm(), 0, 1e-9) << m.name() << " " << a << " " << b;
        }
    }
}

TEST(Multiplier, Unitary) {
    std::mt19937_64 rng(5);
    for (auto& m : all_systems())
        for (int i = 0; i < 20; ++i) {
            Matrix r = m.evaluate(random_element(rng));
            EXPECT_NEAR((r.adjoint() * r - Matrix::Identity(m.dim(), m.dim())).norm(), 0, 1e-10);
        }
}

TEST(Multiplier, TranslationImageIsDiagonalWithExponents) {
    for (auto& m : all_systems()) {
        auto ce = m.cusp_exponents(cusp_infinity());
        Matrix t = m.evaluate(GroupElement::T());
        ASSERT_EQ(static_cast<int>(ce.mu.size()), m.dim());
        for (int i = 0; i < m.dim(); ++i)
            for (int j = 0; j < m.dim(); ++j) {
                cplx want = i == j ? unit_phase(ce.mu[i]) : cplx(0.0);
                EXPECT_NEAR(std::abs(t(i, j) - want), 0, 1e-10) << m.name();
            }
    }
}

TEST(Multiplier, CuspExponentExamples) {
    auto ce = MultiplierSystem::trivial().cusp_exponents(cusp_infinity());
    EXPECT_EQ(ce.mu, std::vector<Rational>{Rational(0)});
    EXPECT_EQ(ce.diagonalizer, Matrix::Identity(1, 1));
    EXPECT_EQ(MultiplierSystem::eta_power(1).cusp_exponents(cusp_infinity()).mu[0], Rational(1, 24));
    EXPECT_EQ(MultiplierSystem::eta_power(-1).cusp_exponents(cusp_infinity()).mu[0], Rational(23, 24));
    EXPECT_EQ(MultiplierSystem::eta_power(1).conjugate().cusp_exponents(cusp_infinity()).mu[0], Rational(23, 24));
    EXPECT_EQ(s3_irrep().cusp_exponents(cusp_infinity()).mu, (std::vector<Rational>{0, Rational(1, 2)}));
}

TEST(Multiplier, CuspExponentsAtOtherCusps) {
    for (std::int64_t n : {2, 4, 6}) {
        auto g = GroupSpec::gamma0(n);
        for (std::int64_t r : {1, -1, 2, 8}) {
            auto m = MultiplierSystem::eta_power(r, g);
            for (auto& c : cusp_list(g)) {
                auto ce = m.cusp_exponents(c);
                cplx v = m.evaluate(cusp_parabolic(c, c.width))(0, 0);
                // weight r/2 not even shifts the exponent off oo
                const Rational tw = m.cusp_twist(c);
                EXPECT_NEAR(std::abs(v * unit_phase(tw) - unit_phase(ce.mu[0])), 0, 1e-12);
                if (r % 4 == 0 || c.at_infinity()) EXPECT_EQ(tw, Rational(0));
                EXPECT_TRUE((tw * 4).is_integer());
                EXPECT_GE(ce.mu[0], Rational(0));
                EXPECT_LT(ce.mu[0], Rational(1));
            }
        }
    }
}

TEST(Multiplier, NonDiagonalParabolicUsesSchur) {
    // S3 irrep restricted: at oo fine; conjugating T by S gives a non-diagonal image
    auto m = s3_irrep();
    CuspData fake;
    fake.point = CuspPoint::rational(Rational(0));
    fake.alpha = GroupElement::S();
    fake.width = 1;
    auto ce = m.cusp_exponents(fake);
    Matrix par = m.evaluate(cusp_parabolic(fake, 1));
    Matrix d = ce.diagonalizer * par * ce.diagonalizer.adjoint();
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(std::abs(d(i, i) - unit_phase(ce.mu[i])), 0, 1e-10);
    EXPECT_NEAR(std::abs(d(0, 1)) + std::abs(d(1, 0)), 0, 1e-10);
}

TEST(Multiplier, ConjugateIsEntrywise) {
    std::mt19937_64 rng(4);
    for (auto& m : all_systems()) {
        auto c = m.conjugate();
        EXPECT_EQ(c.weight(), Rational(2) - m.weight());
        for (int i = 0; i < 20; ++i) {
            auto g = random_element(rng);
            EXPECT_NEAR((c.evaluate(g) - m.evaluate(g).conjugate()).norm(), 0, 1e-10) << m.name();
        }
    }
}

TEST(Multiplier, CacheCoherenceAcrossWords) {
    std::mt19937_64 rng(77);
    for (auto& m : all_systems()) {
        for (int i = 0; i < 20; ++i) {
            auto g = random_element(rng);
            Word w1 = word_decompose(g);
            Word w2 = w1;
            w2.insert(w2.begin(), {{true, 0}, {true, 0}, {false, 3}, {false, -3}});
            w2.push_back({true, 0});
            w2.push_back({false, 1});
            w2.push_back({true, 0});
            w2.push_back({false, 1});
            w2.push_back({true, 0});
            w2.push_back({false, 1});
            ASSERT_EQ(word_product(w2), g);
            EXPECT_NEAR((m.evaluate_word(w1) - m.evaluate_word(w2)).norm(), 0, 1e-9) << m.name();
            EXPECT_NEAR((m.evaluate_word(w1) - m.evaluate(g)).norm(), 0, 1e-9) << m.name();
        }
    }
}

TEST(Multiplier, RejectsInconsistentImages) {
    EXPECT_THROW(MultiplierSystem::explicit_system(Rational(1, 2), scalar(1.0), scalar(unit_phase(Rational(1, 24)))),
                 ConfigError);
    Matrix s(2, 2), t(2, 2);
    s << 0, 1, 1, 0;
    t << 1, 0, 0, cplx(0, 1);
    EXPECT_THROW(MultiplierSystem::explicit_system(0, s, t), ConfigError);
    Matrix nonunitary = scalar(2.0);
    EXPECT_THROW(MultiplierSystem::explicit_system(0, nonunitary, scalar(1.0)), ConfigError);
}

TEST(Multiplier, FiniteImage) {
    auto e = MultiplierSystem::eta_power(1);
    EXPECT_EQ(MultiplierSystem::matrix_order(e.image_t_power(1)), 24);
    EXPECT_EQ(MultiplierSystem::matrix_order(e.image_s()), 8);
    auto s3 = s3_irrep();
    EXPECT_EQ(MultiplierSystem::matrix_order(s3.image_s()), 2);
    EXPECT_EQ(MultiplierSystem::matrix_order(s3.image_t_power(1)), 2);
}

TEST(Multiplier, InvariantSubspace) {
    EXPECT_EQ(MultiplierSystem::trivial().invariant_subspace_dim(), 1);
    EXPECT_EQ(MultiplierSystem::eta_power(1).invariant_subspace_dim(), 0);
    EXPECT_EQ(s3_irrep().invariant_subspace_dim(), 0);
    EXPECT_EQ(MultiplierSystem::direct_sum({MultiplierSystem::trivial(), s3_irrep()}).invariant_subspace_dim(), 1);
    EXPECT_EQ(MultiplierSystem::trivial(0, 3).invariant_subspace_dim(), 3);
}

TEST(Multiplier, Gamma0Membership) {
    auto m = MultiplierSystem::eta_power(1, GroupSpec::gamma0(4));
    EXPECT_THROW(m.evaluate(GroupElement::S()), ConfigError);
    EXPECT_NO_THROW(m.evaluate(GroupElement(1, 0, 4, 1)));
}
