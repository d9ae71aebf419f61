#pragma once

// Normal multiplier systems: presets (trivial, powers of the eta multiplier),
// explicit images of S and T on SL2(Z), direct sums and conjugates.
// Composition law: rho(a b) = omega_w(b, a) rho(a) rho(b).

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "radsum/errors.hpp"
#include "radsum/group.hpp"
#include "radsum/numeric.hpp"
#include "radsum/rational.hpp"
#include "radsum/specfun.hpp"

namespace radsum {

using Matrix = Eigen::MatrixXcd;

// ---------------------------------------------------------------- words

struct WordLetter {
    bool is_s = false;
    std::int64_t power = 0;  // T^power when !is_s

    friend bool operator==(const WordLetter&, const WordLetter&) = default;
};
using Word = std::vector<WordLetter>;

namespace detail {
inline std::int64_t nearest_quotient(std::int64_t a, std::int64_t c) {
    if (c < 0) {
        a = -a;
        c = -c;
    }
    // floor((2a + c) / 2c)
    __int128 num = 2 * static_cast<__int128>(a) + c, den = 2 * static_cast<__int128>(c);
    __int128 q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return static_cast<std::int64_t>(q);
}
}  // namespace detail

/// gamma = T^{k1} S T^{k2} S ... T^{kn} up to sign, nearest-integer Euclid.
inline Word word_decompose(const GroupElement& g) {
    std::int64_t a = g.a(), b = g.b(), c = g.c(), d = g.d();
    Word w;
    while (c != 0) {
        const std::int64_t k = detail::nearest_quotient(a, c);
        if (k != 0) w.push_back({false, k});
        a -= k * c;
        b -= k * d;
        // apply S^{-1} = (0 1; -1 0) on the left
        std::int64_t na = c, nb = d, nc = -a, nd = -b;
        a = na;
        b = nb;
        c = nc;
        d = nd;
        w.push_back({true, 0});
    }
    // now (a b; 0 d) = +-(1 b/a; 0 1)
    const std::int64_t t = b * a;  // a = +-1, so b/a = b*a
    if (t != 0) w.push_back({false, t});
    return w;
}

inline GroupElement word_product(const Word& w) {
    GroupElement p = GroupElement::identity();
    for (auto& l : w) p = p * (l.is_s ? GroupElement::S() : GroupElement::T(l.power));
    return p;
}

inline std::string to_string(const Word& w) {
    std::string s;
    for (auto& l : w) {
        if (!s.empty()) s += ' ';
        s += l.is_s ? std::string("S") : "T^" + std::to_string(l.power);
    }
    return s.empty() ? "I" : s;
}

// -------------------------------------------------------- exponent data

struct CuspExponents {
    CuspData cusp;
    std::vector<Rational> mu;  // in [0, 1)
    Matrix diagonalizer;       // rho_alpha, unitary
};

// ---------------------------------------------------------- the system

enum class MultiplierKind { Trivial, EtaPower, Explicit, DirectSum };

class MultiplierSystem {
public:
    /// Trivial d-dim system; needs w in 2Z (otherwise omega_w is not 1).
    static MultiplierSystem trivial(const Rational& w = 0, int dim = 1, GroupSpec g = GroupSpec::full()) {
        if (!(w.is_integer() && w.num() % 2 == 0))
            throw ConfigError("trivial multiplier needs an even integer weight, got " + w.str());
        MultiplierSystem m;
        m.kind_ = MultiplierKind::Trivial;
        m.weight_ = w;
        m.dim_ = dim;
        m.group_ = g;
        return m;
    }

    /// rho_eta^r, weight r/2. r = -1 is the conjugate eta system.
    static MultiplierSystem eta_power(std::int64_t r, GroupSpec g = GroupSpec::full()) {
        MultiplierSystem m;
        m.kind_ = MultiplierKind::EtaPower;
        m.weight_ = Rational(r, 2);
        m.dim_ = 1;
        m.eta_r_ = r;
        m.group_ = g;
        return m;
    }

    /// Explicit images of S and T on SL2(Z). T must be diagonal and both unitary;
    /// S^2 and (ST)^3 must evaluate to the identity under the composition law.
    static MultiplierSystem explicit_system(const Rational& w, const Matrix& s, const Matrix& t) {
        if (s.rows() != s.cols() || t.rows() != t.cols() || s.rows() != t.rows() || s.rows() == 0)
            throw ConfigError("generator images must be square of equal size");
        MultiplierSystem m;
        m.kind_ = MultiplierKind::Explicit;
        m.weight_ = w;
        m.dim_ = static_cast<int>(s.rows());
        m.s_ = s;
        m.t_ = t;
        m.group_ = GroupSpec::full();
        const Matrix id = Matrix::Identity(m.dim_, m.dim_);
        if ((s.adjoint() * s - id).norm() > 1e-10 || (t.adjoint() * t - id).norm() > 1e-10)
            throw ConfigError("inconsistent generator images: not unitary");
        Matrix off = t;
        off.diagonal().setZero();
        if (off.norm() > 1e-12) throw ConfigError("inconsistent generator images: T image must be diagonal");
        m.validate_relations();
        return m;
    }

    static MultiplierSystem direct_sum(const std::vector<MultiplierSystem>& parts) {
        if (parts.empty()) throw ConfigError("direct sum of nothing");
        MultiplierSystem m;
        m.kind_ = MultiplierKind::DirectSum;
        m.weight_ = parts.front().weight_;
        m.group_ = parts.front().group_;
        m.dim_ = 0;
        for (auto& p : parts) {
            if (p.weight_ != m.weight_) throw ConfigError("direct sum: weights differ");
            if (!(p.group_ == m.group_)) throw ConfigError("direct sum: groups differ");
            m.dim_ += p.dim_;
        }
        m.parts_ = parts;
        return m;
    }

    /// Entrywise conjugate; weight 2 - w (the shadow side), congruent to -w mod 2.
    MultiplierSystem conjugate() const {
        MultiplierSystem m = *this;
        m.cache_ = std::make_shared<Cache>();
        m.weight_ = Rational(2) - weight_;
        m.conjugated_ = !conjugated_;
        return m;
    }

    /// Same images on a subgroup (Gamma0(N) inside SL2(Z)).
    MultiplierSystem restricted_to(const GroupSpec& g) const {
        MultiplierSystem m = *this;
        m.cache_ = std::make_shared<Cache>();
        m.group_ = g;
        for (auto& p : m.parts_) p = p.restricted_to(g);
        return m;
    }

    MultiplierKind kind() const { return kind_; }
    const Rational& weight() const { return weight_; }
    int dim() const { return dim_; }
    const GroupSpec& group() const { return group_; }
    bool is_conjugated() const { return conjugated_; }
    std::int64_t eta_power_r() const { return eta_r_; }
    const std::vector<MultiplierSystem>& parts() const { return parts_; }
    const Matrix& s_image() const { return s_; }
    const Matrix& t_image() const { return t_; }
    bool is_scalar() const { return dim_ == 1; }

    std::string name() const {
        std::string base;
        switch (kind_) {
            case MultiplierKind::Trivial: base = "trivial"; break;
            case MultiplierKind::EtaPower: base = "eta^" + std::to_string(eta_r_); break;
            case MultiplierKind::Explicit: base = "explicit" + std::to_string(dim_); break;
            case MultiplierKind::DirectSum:
                for (auto& p : parts_) base += (base.empty() ? "" : "+") + p.name();
                base = "(" + base + ")";
                break;
        }
        return conjugated_ ? "conj(" + base + ")" : base;
    }

    /// Stable identity string for cache keys.
    std::string identity() const {
        std::string s = name() + "|w=" + weight_.str() + "|" + group_.name();
        if (kind_ == MultiplierKind::Explicit) {
            char buf[64];
            for (const Matrix* mm : {&s_, &t_})
                for (int i = 0; i < dim_; ++i)
                    for (int j = 0; j < dim_; ++j) {
                        std::snprintf(buf, sizeof buf, "|%.17g,%.17g", (*mm)(i, j).real(), (*mm)(i, j).imag());
                        s += buf;
                    }
        }
        for (auto& p : parts_) s += "[" + p.identity() + "]";
        return s;
    }

    /// rho(gamma). gamma must lie in the group.
    Matrix evaluate(const GroupElement& g) const {
        if (!group_.contains(g)) throw ConfigError("evaluate: " + g.str() + " not in " + group_.name());
        {
            std::shared_lock lock(cache_->mutex);
            auto it = cache_->map.find(g);
            if (it != cache_->map.end()) return it->second;
        }
        Matrix v = compute(g);
        std::unique_lock lock(cache_->mutex);
        if (cache_->map.size() < 1'000'000) cache_->map.emplace(g, v);
        return v;
    }

    /// rho(gamma)^{-1} (the adjoint).
    Matrix evaluate_inverse(const GroupElement& g) const { return evaluate(g).adjoint(); }

    /// Scalar presets only: rho(gamma) = e(phase), phase exact.
    Rational scalar_phase(const GroupElement& g) const {
        Rational p;
        if (!exact_scalar_phase(g, p)) throw UnsupportedError("no exact phase for " + name());
        return p;
    }
    bool has_exact_phase() const {
        return kind_ == MultiplierKind::Trivial ? dim_ == 1 : kind_ == MultiplierKind::EtaPower;
    }

    /// Product of a word through the composition law, generator by generator.
    Matrix evaluate_word(const Word& w) const {
        GroupElement p = GroupElement::identity();
        Matrix r = Matrix::Identity(dim_, dim_);
        for (auto& l : w) {
            const GroupElement gen = l.is_s ? GroupElement::S() : GroupElement::T(l.power);
            const Matrix img = l.is_s ? image_s() : image_t_power(l.power);
            r = omega_cocycle(weight_, gen, p) * r * img;
            p = p * gen;
        }
        return r;
    }

    Matrix image_s() const { return generator_image(true, 1); }
    Matrix image_t_power(std::int64_t k) const { return generator_image(false, k); }

    /// Checks S^2 = 1 and (ST)^3 = 1 through the composition law.
    void validate_relations(double tol = 1e-9) const {
        const Matrix id = Matrix::Identity(dim_, dim_);
        const Word s2{{true, 0}, {true, 0}};
        const Word st3{{true, 0}, {false, 1}, {true, 0}, {false, 1}, {true, 0}, {false, 1}};
        if ((evaluate_word(s2) - id).norm() > tol || (evaluate_word(st3) - id).norm() > tol)
            throw ConfigError("inconsistent generator images: relations S^2, (ST)^3 fail for " + name());
    }

    /// Smallest k <= bound with M^k = I, or 0 when none.
    static int matrix_order(const Matrix& m, int bound = 1000, double tol = 1e-9) {
        Matrix p = m;
        const Matrix id = Matrix::Identity(m.rows(), m.cols());
        for (int k = 1; k <= bound; ++k) {
            if ((p - id).norm() < tol) return k;
            p = p * m;
        }
        return 0;
    }

    /// Exponents and diagonalizer at a cusp. At oo the T^h image is diagonal
    /// already, so rho_alpha = I there.
    CuspExponents cusp_exponents(const CuspData& cusp) const {
        CuspExponents ce;
        ce.cusp = cusp;
        const GroupElement par = cusp_parabolic(cusp, cusp.width);
        const Rational twist = cusp_twist(cusp);
        if (has_exact_phase()) {
            ce.mu = {(scalar_phase(par) + twist).frac()};
            ce.diagonalizer = Matrix::Identity(1, 1);
            return ce;
        }
        if (kind_ == MultiplierKind::DirectSum && std::all_of(parts_.begin(), parts_.end(), [](auto& p) {
                return p.has_exact_phase() || p.kind_ == MultiplierKind::Explicit;
            }) && cusp.at_infinity()) {
            for (auto& p : parts_) {
                auto sub = p.cusp_exponents(cusp);
                ce.mu.insert(ce.mu.end(), sub.mu.begin(), sub.mu.end());
            }
            ce.diagonalizer = Matrix::Identity(dim_, dim_);
            return ce;
        }
        const Matrix m = evaluate(par);
        Matrix off = m;
        off.diagonal().setZero();
        Eigen::VectorXcd eig;
        if (off.norm() < 1e-12) {
            ce.diagonalizer = Matrix::Identity(dim_, dim_);
            eig = m.diagonal();
        } else {
            Eigen::ComplexSchur<Matrix> schur(m);
            ce.diagonalizer = schur.matrixU().adjoint();
            eig = schur.matrixT().diagonal();
        }
        for (int i = 0; i < dim_; ++i) ce.mu.push_back((snap_exponent(std::arg(eig(i)) / two_pi) + twist).frac());
        return ce;
    }

    /// Weight-w correction to the exponents at a cusp: translating gamma by
    /// T^h on the left also moves omega_w(alpha^{-1}, gamma). Zero at oo.
    Rational cusp_twist(const CuspData& cusp) const {
        if (cusp.alpha.is_identity()) return 0;
        const GroupElement ai = cusp.alpha.inverse();
        const cplx r = omega_cocycle(weight_, GroupElement::T(cusp.width) * cusp.alpha, ai) /
                       omega_cocycle(weight_, cusp.alpha, ai);
        return snap_exponent(-std::arg(r) / two_pi);
    }

    /// Dimension of the common fixed space of rho(S), rho(T).
    int invariant_subspace_dim(double tol = 1e-9) const {
        const Matrix id = Matrix::Identity(dim_, dim_);
        Matrix stack(2 * dim_, dim_);
        stack << image_s() - id, image_t_power(1) - id;
        Eigen::JacobiSVD<Matrix> svd(stack);
        int nullity = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) < tol) ++nullity;
        return nullity;
    }

private:
    struct Cache {
        std::shared_mutex mutex;
        std::unordered_map<GroupElement, Matrix, GroupElementHash> map;
    };

    MultiplierKind kind_ = MultiplierKind::Trivial;
    Rational weight_ = 0;
    int dim_ = 1;
    GroupSpec group_ = GroupSpec::full();
    std::int64_t eta_r_ = 0;
    bool conjugated_ = false;
    Matrix s_, t_;
    std::vector<MultiplierSystem> parts_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();

    static Rational snap_exponent(double x) {
        x -= std::floor(x);
        Rational r;
        if (!snap_to_rational(x, 240, 1e-10, r))
            throw ConfigError("cusp exponent " + std::to_string(x) + " is not a rational with denominator <= 240");
        return r.frac();
    }

    bool exact_scalar_phase(const GroupElement& g, Rational& out) const {
        if (kind_ == MultiplierKind::Trivial && dim_ == 1) {
            out = 0;
            return true;
        }
        if (kind_ != MultiplierKind::EtaPower) return false;
        Rational base;
        if (g.c() == 0) {
            base = Rational(g.b(), 24);
        } else {
            // (1/2)[(a+d)/(12c) - s(d,c) - 1/4]
            base = (Rational(g.a() + g.d(), 12 * g.c()) - dedekind_sum(g.d(), g.c()) - Rational(1, 4)) / 2;
        }
        out = (base * eta_r_).frac();
        if (conjugated_) out = (-out).frac();
        return true;
    }

    Matrix generator_image(bool is_s, std::int64_t k) const {
        const GroupElement g = is_s ? GroupElement::S() : GroupElement::T(k);
        switch (kind_) {
            case MultiplierKind::Explicit: {
                Matrix img;
                if (is_s) {
                    img = s_;
                } else {
                    img = Matrix::Identity(dim_, dim_);
                    // integer powers of unit diagonal entries, via the angle
                    for (int i = 0; i < dim_; ++i)
                        img(i, i) = std::polar(1.0, std::arg(t_(i, i)) * static_cast<double>(k));
                }
                return conjugated_ ? Matrix(img.conjugate()) : img;
            }
            case MultiplierKind::DirectSum: {
                Matrix out = Matrix::Zero(dim_, dim_);
                int off = 0;
                for (auto& p : parts_) {
                    Matrix sub = is_s ? p.image_s() : p.image_t_power(k);
                    if (conjugated_) sub = sub.conjugate();
                    out.block(off, off, p.dim_, p.dim_) = sub;
                    off += p.dim_;
                }
                return out;
            }
            default:
                return compute(g);
        }
    }

    Matrix compute(const GroupElement& g) const {
        switch (kind_) {
            case MultiplierKind::Trivial:
                return Matrix::Identity(dim_, dim_);
            case MultiplierKind::EtaPower: {
                Matrix m(1, 1);
                m(0, 0) = unit_phase(scalar_phase(g));
                return m;
            }
            case MultiplierKind::Explicit:
                return evaluate_word(word_decompose(g));
            case MultiplierKind::DirectSum: {
                Matrix out = Matrix::Zero(dim_, dim_);
                int off = 0;
                for (auto& p : parts_) {
                    Matrix sub = p.compute(g);
                    if (conjugated_) sub = sub.conjugate();
                    out.block(off, off, p.dim_, p.dim_) = sub;
                    off += p.dim_;
                }
                return out;
            }
        }
        return {};
    }
};

}  // namespace radsum
