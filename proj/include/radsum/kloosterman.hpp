#pragma once

// Matrix-valued Kloosterman sums, tables of them with an on-disk cache, and
// partial sums of the Kloosterman-Selberg zeta function.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "radsum/errors.hpp"
#include "radsum/group.hpp"
#include "radsum/multiplier.hpp"
#include "radsum/numeric.hpp"
#include "radsum/rational.hpp"

namespace radsum {

// ------------------------------------------------------------- exponents

/// Where the pole sits and which component carries it.
struct PoleSpec {
    CuspData cusp{};
    Rational n{-1};
    int i = 0;
};

namespace detail {

/// e(p / q) for integers, q > 0, reduced exactly before the trig call.
inline cplx root_of_unity(__int128 p, __int128 q) {
    __int128 r = p % q;
    if (r < 0) r += q;
    if (2 * r >= q) r -= q;
    // |r/q| <= 1/2, so double trig is accurate to a few ulps
    const double ang = two_pi * (static_cast<double>(r) / static_cast<double>(q));
    return {std::cos(ang), std::sin(ang)};
}

/// e(r / q) for 0 <= r < q. Trig only up to q/8 where the symmetries apply;
/// reflected entries are exact copies.
inline std::vector<cplx> roots_table(std::int64_t q) {
    std::vector<cplx> out(static_cast<std::size_t>(q));
    for (std::int64_t r = 0; r < q; ++r) {
        if (2 * r > q) {
            out[r] = std::conj(out[q - r]);
        } else if (4 * r > q && q % 2 == 0) {
            const cplx m = out[q / 2 - r];
            out[r] = {-m.real(), m.imag()};
        } else if (8 * r > q && q % 4 == 0) {
            const cplx m = out[q / 4 - r];
            out[r] = {m.imag(), m.real()};
        } else {
            out[r] = root_of_unity(r, q);
        }
    }
    return out;
}

inline bool on_grid(const Rational& x, std::int64_t width, const Rational& mu) {
    return (x * width - mu).is_integer();
}

}  // namespace detail

inline void check_pole_exponent(const MultiplierSystem& rho, const PoleSpec& pole, const CuspExponents& at_cusp) {
    if (pole.i < 0 || pole.i >= rho.dim()) throw ConfigError("pole component out of range");
    if (!detail::on_grid(pole.n, pole.cusp.width, at_cusp.mu[pole.i]))
        throw IncompatibleExponentError("pole exponent " + pole.n.str() + " is not in (Z + " +
                                        at_cusp.mu[pole.i].str() + ")/" + std::to_string(pole.cusp.width) +
                                        " for component " + std::to_string(pole.i));
}

inline void check_target_exponent(const MultiplierSystem& rho, int j, const Rational& k, const CuspExponents& at_inf) {
    if (j < 0 || j >= rho.dim()) throw ConfigError("target component out of range");
    if (!detail::on_grid(k, at_inf.cusp.width, at_inf.mu[j]))
        throw IncompatibleExponentError("exponent " + k.str() + " is not in (Z + " + at_inf.mu[j].str() + ")/" +
                                        std::to_string(at_inf.cusp.width) + " for component " +
                                        std::to_string(j));
}

// --------------------------------------------------------- coset factor

/// omega_w(gamma, alpha^{-1}) rho^{-1}(alpha^{-1} gamma) rho_alpha^{-1}; with the argument order of
/// omega_cocycle this is the cocycle attached to the product alpha^{-1} gamma.
inline Matrix coset_factor(const MultiplierSystem& rho, const CuspExponents& at_cusp, const GroupElement& gamma) {
    const CuspData& cusp = at_cusp.cusp;
    const GroupElement ainv = cusp.alpha.inverse();
    const GroupElement g = ainv * gamma;
    cplx om = 1.0;
    if (!cusp.alpha.is_identity()) om = omega_cocycle(rho.weight(), gamma, ainv);
    Matrix m;
    if (rho.has_exact_phase())
        m = Matrix::Constant(1, 1, unit_phase(-rho.scalar_phase(g)));
    else
        m = rho.evaluate_inverse(g);
    if (!cusp.alpha.is_identity()) m = m * at_cusp.diagonalizer.adjoint();
    return om * m;
}

// ------------------------------------------------------- reference sum

/// S_{n,k}(c) entry (j, i), summed straight over the double cosets with exact
/// rational phases. Slow; the table below is the production path.
inline cplx kloosterman_sum(const GroupSpec& group, const MultiplierSystem& rho, const CuspData& cusp,
                            const Rational& n, const Rational& k, std::int64_t c, int i = 0, int j = 0) {
    const MultiplierSystem r = rho.restricted_to(group);
    const auto at_cusp = r.cusp_exponents(cusp);
    const auto at_inf = r.cusp_exponents(cusp_infinity());
    check_pole_exponent(r, {cusp, n, i}, at_cusp);
    check_target_exponent(r, j, k, at_inf);
    KahanSum<cplx> acc;
    for (const auto& gam : double_cosets_at(group, cusp, c)) {
        // n gamma(oo) - k gamma^{-1}(oo) = n a/c + k d/c
        const cplx ph = unit_phase(n * Rational(gam.a(), c) + k * Rational(gam.d(), c));
        acc.add(ph * coset_factor(r, at_cusp, gam)(j, i));
    }
    return acc.value();
}

/// Full d x d matrix of raw sums, without the exponent-grid check (entry (j,i)).
inline Matrix kloosterman_matrix(const GroupSpec& group, const MultiplierSystem& rho, const CuspData& cusp,
                                 const Rational& n, const Rational& k, std::int64_t c) {
    const MultiplierSystem r = rho.restricted_to(group);
    const auto at_cusp = r.cusp_exponents(cusp);
    Matrix out = Matrix::Zero(r.dim(), r.dim());
    for (const auto& gam : double_cosets_at(group, cusp, c)) {
        const cplx ph = unit_phase(n * Rational(gam.a(), c) + k * Rational(gam.d(), c));
        out += ph * coset_factor(r, at_cusp, gam);
    }
    return out;
}

// ----------------------------------------------------------------- cache

inline std::filesystem::path cache_directory() {
    if (const char* env = std::getenv("RADSUM_CACHE"); env && *env) return env;
    return ".radsum-cache";
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

struct CacheFileInfo {
    std::filesystem::path path;
    std::string key;
    std::size_t records = 0;
    std::int64_t c_max = 0;
};

inline std::vector<CacheFileInfo> cache_inspect(const std::filesystem::path& dir = cache_directory()) {
    std::vector<CacheFileInfo> out;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) return out;
    for (const auto& ent : std::filesystem::directory_iterator(dir, ec)) {
        if (ent.path().extension() != ".csv") continue;
        CacheFileInfo info;
        info.path = ent.path();
        std::ifstream in(ent.path());
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("# key ", 0) == 0) {
                info.key = line.substr(6);
                continue;
            }
            if (line.empty() || line[0] == '#') continue;
            ++info.records;
            info.c_max = std::max<std::int64_t>(info.c_max, std::strtoll(line.c_str(), nullptr, 10));
        }
        out.push_back(std::move(info));
    }
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.path < b.path; });
    return out;
}

inline std::size_t cache_clear(const std::filesystem::path& dir = cache_directory()) {
    std::size_t n = 0;
    for (auto& f : cache_inspect(dir)) n += std::filesystem::remove(f.path) ? 1 : 0;
    return n;
}

// ----------------------------------------------------------------- table

/// One (target component, exponent) pair.
struct KloostermanCell {
    int j = 0;
    Rational k;
};

/// S^{alpha^{-1} oo}_{n,k}(c)_{ji} for a fixed pole and a list of cells, all
/// 0 < c <= covered(). Values are read from / appended to the disk cache.
class KloostermanTable {
public:
    KloostermanTable(GroupSpec group, const MultiplierSystem& rho, PoleSpec pole, std::vector<KloostermanCell> cells,
                     PrecisionMode mode = PrecisionMode::Double, bool use_cache = true)
        : group_(group),
          rho_(rho.restricted_to(group)),
          pole_(pole),
          cells_(std::move(cells)),
          mode_(mode),
          use_cache_(use_cache) {
        at_cusp_ = rho_.cusp_exponents(pole_.cusp);
        at_inf_ = rho_.cusp_exponents(cusp_infinity());
        check_pole_exponent(rho_, pole_, at_cusp_);
        h_ = at_inf_.cusp.width;
        for (auto& cell : cells_) {
            check_target_exponent(rho_, cell.j, cell.k, at_inf_);
            const Rational m = cell.k * h_ - at_inf_.mu[cell.j];
            m_.push_back(m.num());
        }
        values_.assign(cells_.size(), {});
        // pole exponent as p/q
        n_num_ = pole_.n.num();
        n_den_ = pole_.n.den();
        group_keys();
    }

    const GroupSpec& group() const { return group_; }
    const MultiplierSystem& rho() const { return rho_; }
    const PoleSpec& pole() const { return pole_; }
    const std::vector<KloostermanCell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    std::int64_t covered() const { return covered_; }
    std::int64_t width() const { return h_; }
    const CuspExponents& exponents_at_cusp() const { return at_cusp_; }
    const CuspExponents& exponents_at_infinity() const { return at_inf_; }
    PrecisionMode precision() const { return mode_; }
    /// Number of c values read from disk during the last ensure().
    std::int64_t cache_hits() const { return cache_hits_; }

    /// Index of the cell (j, k), or -1.
    int find(int j, const Rational& k) const {
        for (std::size_t t = 0; t < cells_.size(); ++t)
            if (cells_[t].j == j && cells_[t].k == k) return static_cast<int>(t);
        return -1;
    }

    cplx at(std::int64_t c, std::size_t cell) const {
        if (c < 1 || c > covered_) throw ConfigError("Kloosterman table queried outside its range");
        return values_[cell][static_cast<std::size_t>(c - 1)];
    }
    const std::vector<cplx>& column(std::size_t cell) const { return values_[cell]; }

    /// Upper bound on the number of double cosets at c, which bounds |S(c)|.
    std::int64_t coset_count_bound(std::int64_t c) const { return pole_.cusp.width * euler_phi(c); }

    /// Fill entries for all c <= c_max.
    void ensure(std::int64_t c_max) {
        if (c_max <= covered_) return;
        std::vector<std::vector<std::optional<cplx>>> loaded(cells_.size());
        std::int64_t from_disk = c_max;
        if (use_cache_) {
            for (auto& grp : files_) {
                auto recs = read_file(grp);
                for (std::size_t t : grp.cells) {
                    auto& col = loaded[t];
                    col.assign(static_cast<std::size_t>(c_max), std::nullopt);
                    for (auto& [key, v] : recs)
                        if (key.second == cells_[t].j && key.first >= 1 && key.first <= c_max)
                            col[static_cast<std::size_t>(key.first - 1)] = v;
                }
            }
            // contiguous prefix present for every cell
            std::int64_t pref = 0;
            while (pref < c_max) {
                bool all = true;
                for (auto& col : loaded)
                    if (!col[static_cast<std::size_t>(pref)]) {
                        all = false;
                        break;
                    }
                if (!all) break;
                ++pref;
            }
            from_disk = pref;
        } else {
            from_disk = covered_;
        }
        from_disk = std::max(from_disk, covered_);
        for (auto& col : values_) col.resize(static_cast<std::size_t>(c_max));
        cache_hits_ = 0;
        if (use_cache_)
            for (std::int64_t c = covered_ + 1; c <= from_disk; ++c) {
                for (std::size_t t = 0; t < cells_.size(); ++t)
                    values_[t][static_cast<std::size_t>(c - 1)] = *loaded[t][static_cast<std::size_t>(c - 1)];
                ++cache_hits_;
            }
        const std::int64_t first_new = from_disk + 1;
        if (first_new <= c_max) {
            std::vector<std::vector<cplx>> fresh(static_cast<std::size_t>(c_max - first_new + 1));
            // larger c cost more; interleaving keeps the load even
            parallel_for(first_new, c_max + 1, [&](std::int64_t c) {
                fresh[static_cast<std::size_t>(c - first_new)] = compute_c(c);
            });
            for (std::int64_t c = first_new; c <= c_max; ++c)
                for (std::size_t t = 0; t < cells_.size(); ++t)
                    values_[t][static_cast<std::size_t>(c - 1)] = fresh[static_cast<std::size_t>(c - first_new)][t];
            if (use_cache_) append(first_new, c_max);
        }
        covered_ = c_max;
    }

    /// Fit max |S(c)| <= A c^beta over dyadic blocks; beta clamped to [1/2, 1].
    std::pair<double, double> growth_fit(std::size_t cell) const {
        std::vector<double> xs, ys;
        for (std::int64_t lo = 1; lo <= covered_; lo *= 2) {
            const std::int64_t hi = std::min(2 * lo - 1, covered_);
            double m = 0;
            for (std::int64_t c = lo; c <= hi; ++c) m = std::max(m, std::abs(at(c, cell)));
            if (m > 1e-9) {
                xs.push_back(std::log(static_cast<double>(hi)));
                ys.push_back(std::log(m));
            }
        }
        double beta = 1.0;
        if (xs.size() >= 3) {
            double mx = 0, my = 0;
            for (std::size_t t = 0; t < xs.size(); ++t) mx += xs[t], my += ys[t];
            mx /= xs.size();
            my /= xs.size();
            double sxy = 0, sxx = 0;
            for (std::size_t t = 0; t < xs.size(); ++t) {
                sxy += (xs[t] - mx) * (ys[t] - my);
                sxx += (xs[t] - mx) * (xs[t] - mx);
            }
            if (sxx > 0) beta = std::clamp(sxy / sxx, 0.5, 1.0);
        }
        double a = 0;
        for (std::int64_t c = 1; c <= covered_; ++c)
            a = std::max(a, std::abs(at(c, cell)) / std::pow(static_cast<double>(c), beta));
        return {a, beta};
    }

    /// Cache key of the file holding exponent k.
    std::string cache_key(const Rational& k) const {
        std::string s = "radsum-kl-v1|" + group_.name() + "|" + rho_.identity() + "|cusp=" + pole_.cusp.str() +
                        "|n=" + pole_.n.str() + "|i=" + std::to_string(pole_.i) + "|k=" + k.str() +
                        "|prec=" + to_string(mode_);
        return s;
    }

private:
    struct FileGroup {
        Rational k;
        std::vector<std::size_t> cells;
        std::string key;
        std::filesystem::path path;
    };

    GroupSpec group_;
    MultiplierSystem rho_;
    PoleSpec pole_;
    std::vector<KloostermanCell> cells_;
    PrecisionMode mode_;
    bool use_cache_;
    CuspExponents at_cusp_, at_inf_;
    std::int64_t h_ = 1;
    std::vector<std::int64_t> m_;
    std::int64_t n_num_ = 0, n_den_ = 1;
    std::vector<std::vector<cplx>> values_;
    std::int64_t covered_ = 0;
    std::int64_t cache_hits_ = 0;
    std::vector<FileGroup> files_;

    void group_keys() {
        for (std::size_t t = 0; t < cells_.size(); ++t) {
            auto it = std::find_if(files_.begin(), files_.end(), [&](auto& f) { return f.k == cells_[t].k; });
            if (it == files_.end()) {
                FileGroup f;
                f.k = cells_[t].k;
                f.key = cache_key(f.k);
                char name[32];
                std::snprintf(name, sizeof name, "%016" PRIx64 ".csv", fnv1a(f.key));
                f.path = cache_directory() / name;
                files_.push_back(f);
                it = files_.end() - 1;
            }
            it->cells.push_back(t);
        }
    }

    std::map<std::pair<std::int64_t, int>, cplx> read_file(const FileGroup& f) const {
        std::map<std::pair<std::int64_t, int>, cplx> out;
        std::ifstream in(f.path);
        if (!in) return out;
        std::string line;
        if (!std::getline(in, line) || line != "# key " + f.key) return out;  // hash collision or stale
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            long long c = 0;
            int j = 0, i = 0;
            double re = 0, im = 0;
            if (std::sscanf(line.c_str(), "%lld,%d,%d,%lf,%lf", &c, &j, &i, &re, &im) != 5) continue;
            if (i != pole_.i) continue;
            out[{c, j}] = cplx(re, im);
        }
        return out;
    }

    void append(std::int64_t c_lo, std::int64_t c_hi) const {
        static std::mutex io;
        std::lock_guard lock(io);
        std::error_code ec;
        std::filesystem::create_directories(cache_directory(), ec);
        for (auto& f : files_) {
            bool fresh = true;
            {
                std::ifstream probe(f.path);
                std::string first;
                if (probe && std::getline(probe, first)) {
                    if (first != "# key " + f.key) continue;  // someone else's file; leave it
                    fresh = false;
                }
            }
            std::ofstream out(f.path, std::ios::app);
            if (!out) return;  // read-only cache dir: silently compute-only
            if (fresh) out << "# key " << f.key << "\n";
            char buf[128];
            for (std::int64_t c = c_lo; c <= c_hi; ++c)
                for (std::size_t t : f.cells) {
                    const cplx v = values_[t][static_cast<std::size_t>(c - 1)];
                    std::snprintf(buf, sizeof buf, "%" PRId64 ",%d,%d,%.17g,%.17g\n", c, cells_[t].j, pole_.i,
                                  v.real(), v.imag());
                    out << buf;
                }
        }
    }

    /// All cells at one c.
    std::vector<cplx> compute_c(std::int64_t c) const {
        const auto cosets = double_cosets_at(group_, pole_.cusp, c);
        std::vector<ComplexAccumulator> acc(cells_.size(), ComplexAccumulator(mode_));
        if (!cosets.empty()) {
            const std::int64_t hc = h_ * c;
            const std::vector<cplx> roots = detail::roots_table(hc);
            const int dim = rho_.dim();
            const bool int_pole = n_den_ == 1 && std::abs(n_num_) < (std::int64_t{1} << 20);
            const bool plain = rho_.kind() == MultiplierKind::Trivial && pole_.cusp.alpha.is_identity();
            std::vector<cplx> b(static_cast<std::size_t>(dim));
            for (const auto& gam : cosets) {
                // e(n a / c)
                const cplx an = int_pole
                                    ? roots[static_cast<std::size_t>(floor_mod((n_num_ * h_) % hc * (gam.a() % hc) % hc, hc))]
                                    : detail::root_of_unity(static_cast<__int128>(n_num_) * gam.a(),
                                                            static_cast<__int128>(n_den_) * c);
                Matrix f;
                if (!plain) f = coset_factor(rho_, at_cusp_, gam);
                for (int j = 0; j < dim; ++j) {
                    const cplx g = plain ? (j == pole_.i ? cplx(1.0) : cplx(0.0)) : f(j, pole_.i);
                    const Rational& mu = at_inf_.mu[static_cast<std::size_t>(j)];
                    // e(mu d / (h c))
                    const cplx off = mu.num() == 0 ? cplx(1.0)
                                                   : detail::root_of_unity(static_cast<__int128>(mu.num()) * gam.d(),
                                                                           static_cast<__int128>(mu.den()) * hc);
                    b[static_cast<std::size_t>(j)] = an * g * off;
                }
                for (std::size_t t = 0; t < cells_.size(); ++t) {
                    const std::int64_t idx = floor_mod(static_cast<std::int64_t>(
                                                           (static_cast<__int128>(m_[t]) * gam.d()) % hc),
                                                       hc);
                    acc[t].add(b[static_cast<std::size_t>(cells_[t].j)] * roots[static_cast<std::size_t>(idx)]);
                }
            }
        }
        std::vector<cplx> out(cells_.size());
        for (std::size_t t = 0; t < cells_.size(); ++t) out[t] = acc[t].value();
        return out;
    }
};

// ------------------------------------------------------------------ zeta

struct ZetaCheckpoint {
    std::int64_t c;
    cplx partial;
};

struct ZetaPartial {
    cplx s;
    std::int64_t K = 0;
    cplx value{};
    double tail = 0.0;  // +inf when Re s <= 1
    std::vector<ZetaCheckpoint> checkpoints;
};

inline std::vector<std::int64_t> checkpoint_grid(std::int64_t c_max) {
    std::vector<std::int64_t> out;
    for (std::int64_t c = 1; c < c_max; c *= 2) out.push_back(c);
    out.push_back(c_max);
    return out;
}

/// Sum over c <= c_max of S(c)/c^{2s} from a filled table.
inline ZetaPartial zeta_partial(const KloostermanTable& table, std::size_t cell, cplx s, std::int64_t c_max) {
    if (c_max < 1) throw ConfigError("c_max must be positive");
    if (c_max > table.covered()) throw ConfigError("table does not reach c_max");
    ZetaPartial z;
    z.s = s;
    z.K = c_max;
    ComplexAccumulator acc(table.precision());
    const auto grid = checkpoint_grid(c_max);
    std::size_t next = 0;
    for (std::int64_t c = 1; c <= c_max; ++c) {
        const cplx v = table.at(c, cell);
        if (v != cplx(0.0)) acc.add(v * std::exp(-2.0 * s * std::log(static_cast<double>(c))));
        if (next < grid.size() && grid[next] == c) {
            z.checkpoints.push_back({c, acc.value()});
            ++next;
        }
    }
    z.value = acc.value();
    // |S(c)| <= width * c, so the tail is below width * K^{2-2 sigma} / (2 sigma - 2)
    const double sigma = s.real();
    if (sigma > 1.0)
        z.tail = static_cast<double>(table.pole().cusp.width) * std::pow(static_cast<double>(c_max), 2.0 - 2.0 * sigma) /
                 (2.0 * sigma - 2.0);
    else
        z.tail = std::numeric_limits<double>::infinity();
    return z;
}

inline ZetaPartial zeta_partial(const GroupSpec& group, const MultiplierSystem& rho, const CuspData& cusp,
                                const Rational& n, const Rational& k, cplx s, std::int64_t c_max, int i = 0,
                                int j = 0) {
    KloostermanTable t(group, rho, {cusp, n, i}, {{j, k}});
    t.ensure(c_max);
    return zeta_partial(t, 0, s, c_max);
}

struct ZetaAtOne {
    cplx value{};
    double error = 0.0;
    bool converged = false;
    std::vector<ZetaCheckpoint> smoothed;  // Cesaro means at the checkpoints
};

/// Conditionally convergent value at s = 1. At each checkpoint C the partial
/// sums P(c) are averaged over the last `window` fraction of c <= C; the error
/// is the spread of those means over the last third of checkpoints.
inline ZetaAtOne zeta_at_one(const KloostermanTable& table, std::size_t cell, std::int64_t c_max, double window = 0.5) {
    if (c_max < 1) throw ConfigError("c_max must be positive");
    if (!(window > 0.0 && window <= 1.0)) throw ConfigError("Cesaro window must lie in (0, 1]");
    if (c_max > table.covered()) throw ConfigError("table does not reach c_max");
    std::vector<cplx> partial(static_cast<std::size_t>(c_max) + 1, 0.0);
    ComplexAccumulator acc(table.precision());
    for (std::int64_t c = 1; c <= c_max; ++c) {
        const cplx v = table.at(c, cell);
        if (v != cplx(0.0)) acc.add(v / (static_cast<double>(c) * static_cast<double>(c)));
        partial[static_cast<std::size_t>(c)] = acc.value();
    }
    ZetaAtOne r;
    for (auto C : checkpoint_grid(c_max)) {
        const std::int64_t lo = std::max<std::int64_t>(1, C - static_cast<std::int64_t>(std::floor(window * C)) + 1);
        KahanSum<cplx> m;
        for (std::int64_t c = lo; c <= C; ++c) m.add(partial[static_cast<std::size_t>(c)]);
        r.smoothed.push_back({C, m.value() / static_cast<double>(C - lo + 1)});
    }
    r.value = r.smoothed.back().partial;
    const std::size_t n = r.smoothed.size();
    const std::size_t third = std::max<std::size_t>(1, n / 3);
    auto spread = [&](std::size_t from, std::size_t to) {
        double s = 0;
        for (std::size_t a = from; a < to; ++a)
            for (std::size_t b = a + 1; b < to; ++b)
                s = std::max(s, std::abs(r.smoothed[a].partial - r.smoothed[b].partial));
        return s;
    };
    if (n < 2 * third + 1 || n < 4) {
        r.error = spread(0, n);
        r.converged = r.error <= 1e-14 * std::max(1.0, std::abs(r.value));
        return r;
    }
    const double last = spread(n - third - 1, n);
    const double prev = spread(n - 2 * third - 1, n - third);
    r.error = last;
    r.converged = last <= 1e-14 * std::max(1.0, std::abs(r.value)) || last < 0.7 * prev;
    return r;
}

inline ZetaAtOne zeta_at_one(const GroupSpec& group, const MultiplierSystem& rho, const CuspData& cusp,
                             const Rational& n, const Rational& k, std::int64_t c_max, int i = 0, int j = 0) {
    KloostermanTable t(group, rho, {cusp, n, i}, {{j, k}});
    t.ensure(c_max);
    return zeta_at_one(t, 0, c_max);
}

}  // namespace radsum
