// radsum: batch front end for the Rademacher-sum engines.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radsum/radsum.hpp"

using namespace radsum;

namespace {

constexpr int exit_config = 1;
constexpr int exit_scope = 2;
constexpr int exit_convergence = 3;

// thrown by subcommands whose numbers came out but failed their own trend test
struct TrendFailure {
    json doc;
    std::string why;
};

struct JobFlags {
    std::string config;
    std::optional<std::string> weight, preset, family, cusp, n, precision;
    std::optional<std::int64_t> power, dim, level, c_max, k_max, K;
    std::optional<int> component;
    std::string out;
};

void add_job_flags(CLI::App* app, JobFlags& f, bool positional_config = true) {
    if (positional_config) app->add_option("config", f.config, "job configuration (JSON)");
    app->add_option("--weight", f.weight, "weight as p/q");
    app->add_option("--preset", f.preset, "multiplier preset: trivial | eta");
    app->add_option("--power", f.power, "eta power r (weight r/2)");
    app->add_option("--dim", f.dim, "dimension of the trivial system");
    app->add_option("--group", f.family, "full | gamma0");
    app->add_option("--level", f.level, "level N of Gamma0(N)");
    app->add_option("--cusp", f.cusp, "pole cusp: oo or p/q");
    app->add_option("--component", f.component, "pole component i");
    app->add_option("--n", f.n, "pole exponent as p/q");
    app->add_option("--cmax", f.c_max, "largest modulus c");
    app->add_option("--kmax", f.k_max, "largest coefficient index");
    app->add_option("--K", f.K, "rectangle size for direct sums");
    app->add_option("--precision", f.precision, "double | double-double");
    app->add_option("-o,--out", f.out, "write JSON here instead of stdout");
}

JobConfig resolve(const JobFlags& f) {
    JobConfig c = f.config.empty() ? JobConfig{} : JobConfig::load(f.config);
    json j = c.to_json();
    if (f.weight) j["weight"] = *f.weight;
    if (f.preset) {
        j["multiplier"] = json{{"preset", *f.preset}};
        // eta without an explicit power follows the weight
        if (*f.preset == "eta" && !f.power) j["multiplier"]["power"] = (Rational::parse(j["weight"].get<std::string>()) * 2).num();
    }
    if (f.power) j["multiplier"]["power"] = *f.power;
    if (f.dim) j["multiplier"]["dim"] = *f.dim;
    if (f.family) j["group"]["family"] = *f.family;
    if (f.level) j["group"]["level"] = *f.level;
    if (f.cusp) j["pole"]["cusp"] = *f.cusp;
    if (f.component) j["pole"]["component"] = *f.component;
    if (f.n) j["pole"]["exponent"] = *f.n;
    if (f.c_max) j["truncation"]["c_max"] = *f.c_max;
    if (f.k_max) j["truncation"]["k_max"] = *f.k_max;
    if (f.K) j["truncation"]["K"] = *f.K;
    if (f.precision) j["truncation"]["precision"] = *f.precision;
    return JobConfig::from_json(j);
}

// ------------------------------------------------------------ formatting

json cj(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// value + error, with a status when the error is not a finite number
json valued(cplx v, double err) {
    json j{{"value", cj(v)}};
    if (std::isfinite(err)) {
        j["error"] = err;
        j["status"] = "bounded";
    } else {
        j["error"] = nullptr;
        j["status"] = "unbounded";
    }
    return j;
}

json document(const std::string& cmd, const JobConfig& c, json result) {
    json d;
    d["command"] = cmd;
    d["config"] = c.to_json();
    d["provenance"] = {{"c_max", c.c_max},
                       {"k_max", c.k_max},
                       {"K", c.K},
                       {"precision", c.precision},
                       {"accumulation", to_string(c.precision_policy().accumulation())}};
    d["result"] = std::move(result);
    return d;
}

void emit(const json& doc, const std::string& out) {
    const std::string text = doc.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + out);
        f << text;
    }
}

json series_json(const CoefficientSeries& s) {
    json r;
    r["weight"] = s.weight.str();
    r["pole_exponent"] = s.pole_exponent.str();
    r["pole_folded"] = s.pole_folded;
    r["width"] = s.width;
    r["convergence"] = s.convergence;
    r["components"] = json::array();
    for (const auto& c : s.components) {
        json cc;
        cc["component"] = c.j;
        cc["mu"] = c.mu.str();
        cc["pole"] = {{"exponent", s.pole_exponent.str()}, {"coefficient", cj(c.pole_coefficient)}, {"error", 0.0},
                      {"status", "exact"}};
        if (c.constant)
            cc["constant"] = valued(*c.constant, c.constant_error);
        else
            cc["constant"] = nullptr;
        cc["terms"] = json::array();
        for (const auto& t : c.terms) {
            json e = valued(t.value, t.error);
            e["k"] = t.k.str();
            cc["terms"].push_back(e);
        }
        r["components"].push_back(cc);
    }
    return r;
}

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const CoefficientSeries& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << "component,exponent_num,exponent_den,re,im,err\n";
    auto row = [&](int j, const Rational& k, cplx v, double e) {
        f << j << ',' << k.num() << ',' << k.den() << ',' << g17(v.real()) << ',' << g17(v.imag()) << ',' << g17(e)
          << '\n';
    };
    for (const auto& c : s.components) {
        if (!s.pole_folded && c.pole_coefficient != cplx(0.0)) row(c.j, s.pole_exponent, c.pole_coefficient, 0.0);
        if (c.constant) row(c.j, Rational(0), *c.constant, c.constant_error);
        for (const auto& t : c.terms) row(c.j, t.k, t.value, t.error);
    }
}

cplx parse_tau(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ConfigError("tau must be given as re,im");
    try {
        const cplx t(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
        if (!(t.imag() > 0)) throw ConfigError("tau must lie in the upper half plane");
        return t;
    } catch (const std::invalid_argument&) {
        throw ConfigError("tau must be given as re,im");
    }
}

bool any_unbounded(const CoefficientSeries& s) {
    for (const auto& c : s.components) {
        if (c.constant && !std::isfinite(c.constant_error)) return true;
        for (const auto& t : c.terms)
            if (!std::isfinite(t.error)) return true;
    }
    return false;
}

// ------------------------------------------------------------ subcommands

json run_coeffs(const JobConfig& c, bool shadow, const std::string& csv) {
    const auto job = c.job();
    const auto s = shadow ? shadow_coefficients(job, c.k_max, c.c_max) : coefficients(job, c.k_max, c.c_max);
    if (!csv.empty()) write_csv(s, csv);
    auto doc = document(shadow ? "shadow" : "coeffs", c, series_json(s));
    if (any_unbounded(s)) throw TrendFailure{doc, "tail error is unbounded"};
    return doc;
}

json run_kloosterman(const JobConfig& cfg, const std::string& k_str, std::optional<std::int64_t> c_one, int j) {
    const auto job = cfg.job();
    const auto rho = job.restricted_rho();
    const Rational k = Rational::parse(k_str);
    json r;
    r["n"] = job.n.str();
    r["k"] = k.str();
    r["i"] = job.i;
    r["j"] = j;
    if (c_one) {
        if (*c_one < 1) throw ConfigError("c must be positive");
        const cplx v = kloosterman_sum(job.group, rho, job.cusp, job.n, k, *c_one, job.i, j);
        r["c"] = *c_one;
        // double cosets times a few ulps each
        r["entry"] = valued(v, 8e-16 * static_cast<double>(*c_one) * static_cast<double>(job.cusp.width) *
                                   std::max(1.0, std::abs(v)));
    } else {
        KloostermanTable t(job.group, rho, job.pole(), {{j, k}}, job.precision.accumulation());
        t.ensure(cfg.c_max);
        r["table"] = json::array();
        for (std::int64_t c = 1; c <= cfg.c_max; ++c) {
            const cplx v = t.at(c, 0);
            json e = valued(v, 8e-16 * static_cast<double>(t.coset_count_bound(c)) * std::max(1.0, std::abs(v)));
            e["c"] = c;
            r["table"].push_back(e);
        }
    }
    return document("kloosterman", cfg, r);
}

json run_zeta(const JobConfig& cfg, const std::string& k_str, double s_re, double s_im, int j, bool at_one) {
    const auto job = cfg.job();
    const auto rho = job.restricted_rho();
    const Rational k = Rational::parse(k_str);
    KloostermanTable t(job.group, rho, job.pole(), {{j, k}}, job.precision.accumulation());
    t.ensure(cfg.c_max);
    json r;
    r["n"] = job.n.str();
    r["k"] = k.str();
    if (at_one) {
        const auto z = zeta_at_one(t, 0, cfg.c_max);
        r["s"] = cj(1.0);
        r["value"] = valued(z.value, z.error);
        r["converged"] = z.converged;
        r["smoothed"] = json::array();
        for (auto& p : z.smoothed) r["smoothed"].push_back({{"c", p.c}, {"mean", cj(p.partial)}});
        auto doc = document("zeta", cfg, r);
        if (!z.converged) throw TrendFailure{doc, "Cesaro means did not settle"};
        return doc;
    }
    const auto z = zeta_partial(t, 0, cplx(s_re, s_im), cfg.c_max);
    r["s"] = cj(z.s);
    r["value"] = valued(z.value, z.tail);
    r["checkpoints"] = json::array();
    for (auto& p : z.checkpoints) r["checkpoints"].push_back({{"c", p.c}, {"partial", cj(p.partial)}});
    auto doc = document("zeta", cfg, r);
    if (!std::isfinite(z.tail)) throw TrendFailure{doc, "Re s <= 1: the partial sums carry no tail bound"};
    return doc;
}

json run_delta(const JobConfig& cfg) {
    const auto d = delta_constant(cfg.job());
    json r;
    r["convergence"] = d.convergence;
    r["components"] = json::array();
    bool bad = false;
    for (std::size_t j = 0; j < d.value.size(); ++j) {
        json e = valued(d.value[j], d.error[j]);
        e["component"] = j;
        r["components"].push_back(e);
        bad = bad || !std::isfinite(d.error[j]);
    }
    auto doc = document("delta", cfg, r);
    if (bad) throw TrendFailure{doc, "Delta did not converge"};
    return doc;
}

json run_asymptotic(const JobConfig& cfg, const std::vector<std::string>& ks, int j) {
    const auto job = cfg.job();
    json r = json::array();
    for (const auto& ks1 : ks) {
        const Rational k = Rational::parse(ks1);
        r.push_back({{"k", k.str()},
                     {"estimate", cj(asymptotic_estimate(job, k, j))},
                     {"error", nullptr},
                     {"status", "leading term only"}});
    }
    return document("asymptotic", cfg, {{"component", j}, {"estimates", r}});
}

json run_dims(const JobConfig& cfg, std::int64_t m, bool basis) {
    const auto g = cfg.group();
    const auto rho = cfg.rho();
    json r;
    r["m"] = m;
    r["weight"] = cfg.weight.str();
    if (!basis) {
        r["dimension"] = dimension_bound(g, rho, cfg.weight, m);
        r["status"] = "upper bound, exact when no cusp forms of weight 2-w exist";
        return document("dims", cfg, r);
    }
    const auto b = basis_spec(g, rho, cfg.weight, m);
    r["poles"] = json::array();
    for (auto& [i, n] : b.poles) r["poles"].push_back({{"component", i}, {"exponent", n.str()}});
    r["count"] = b.poles.size();
    r["constants"] = b.constants;
    r["status"] = "exact";
    return document("basis", cfg, r);
}

std::string trend_status(const std::vector<double>& steps, double scale, double rel_tol) {
    if (steps.empty()) return "single level";
    if (steps.back() <= rel_tol * std::max(1.0, scale)) return "converged";
    for (std::size_t t = 1; t < steps.size(); ++t)
        if (!(steps[t] < steps[t - 1])) return "non-shrinking";
    return "shrinking";
}

json trend_json(const std::vector<TrendPoint>& tr) {
    json a = json::array();
    for (const auto& p : tr) {
        json v = json::array();
        for (auto z : p.value) v.push_back(cj(z));
        a.push_back({{"level", p.level}, {"value", v}});
    }
    return a;
}

json run_evaluate(const JobConfig& cfg, const std::string& tau_s, double rel_tol) {
    const cplx tau = parse_tau(tau_s);
    json r;
    r["tau"] = cj(tau);
    std::vector<TrendPoint> trend;
    std::vector<cplx> value;
    double error = 0;
    if (cfg.weight > Rational(2)) {
        r["method"] = "direct Poincare series";
        const auto rho = cfg.rho();
        for (auto lv : {std::max<std::int64_t>(1, cfg.c_max / 4), std::max<std::int64_t>(1, cfg.c_max / 2), cfg.c_max})
            trend.push_back({lv, poincare_direct(cfg.group(), rho, cfg.exponent, cfg.component, tau, lv)});
        EvaluationReport rep;
        rep.trend = trend;
        const auto st = rep.trend_steps();
        value = trend.back().value;
        error = st.back();
    } else {
        r["method"] = "regularized partial sum";
        const auto rep = rademacher_partial(cfg.job(), tau, cfg.K);
        trend = rep.trend;
        value = rep.value;
        error = rep.error;
    }
    EvaluationReport rep;
    rep.trend = trend;
    double scale = 0;
    for (auto z : value) scale = std::max(scale, std::abs(z));
    r["components"] = json::array();
    for (std::size_t j = 0; j < value.size(); ++j) {
        json e = valued(value[j], error);
        e["component"] = j;
        r["components"].push_back(e);
    }
    r["trend"] = trend_json(trend);
    const auto status = trend_status(rep.trend_steps(), scale, rel_tol);
    r["trend_status"] = status;
    auto doc = document("evaluate", cfg, r);
    if (status == "non-shrinking") throw TrendFailure{doc, "trend is not shrinking"};
    return doc;
}

json run_verify(const JobConfig& cfg) {
    const auto job = cfg.job();
    job.validate();
    const auto rho = job.restricted_rho();
    json checks = json::array();
    bool all = true;
    const auto f = coefficients(job, cfg.k_max, cfg.c_max);
    const auto g = shadow_coefficients(job, cfg.k_max, cfg.c_max);
    const std::vector<cplx> taus{cplx(0, 0.8), cplx(0.3, 1.1)};

    if (job.cusp.at_infinity()) {
        for (cplx tau : taus) {
            const auto rep = rademacher_partial(job, tau, cfg.K);
            double worst = 0, allowed = 0;
            for (int j = 0; j < rho.dim(); ++j) {
                const auto [v, e] = f.evaluate(j, tau);
                const double d = std::abs(rep.value[static_cast<std::size_t>(j)] - v);
                if (d - (rep.error + e) > worst - allowed || j == 0) worst = d, allowed = rep.error + e;
            }
            const bool ok = worst <= allowed;
            all = all && ok;
            checks.push_back({{"check", "series vs direct sum"},
                              {"tau", cj(tau)},
                              {"difference", worst},
                              {"allowed", allowed},
                              {"status", ok ? "pass" : "fail"}});
        }
    } else {
        checks.push_back({{"check", "series vs direct sum"}, {"difference", nullptr}, {"status", "unsupported"}});
    }

    const GroupElement T(1, 1, 0, 1);
    const GroupElement second =
        job.group.family == GroupFamily::Full ? GroupElement(0, -1, 1, 0) : GroupElement(1, 0, job.group.level, 1);
    for (const auto& gm : {T, second}) {
        const auto a = verify_automorphy(f, g, rho, gm, taus[1]);
        const bool ok = a.completion_residual <= 1e-3 * std::max(1.0, a.scale);
        all = all && ok;
        checks.push_back({{"check", "automorphy"},
                          {"gamma", gm.str()},
                          {"completion_residual", a.completion_residual},
                          {"literal_residual", a.literal_residual},
                          {"scale", a.scale},
                          {"status", ok ? "pass" : "fail"}});
    }

    for (int j = 0; j < rho.dim(); ++j) {
        json e{{"check", "shadow period"}, {"component", j}};
        try {
            const auto p = shadow_period(g, j, job.weight(), taus[1]);
            e["period"] = valued(p.value, p.residual);
            e["quadrature_error"] = p.quadrature_error;
            e["status"] = "pass";
        } catch (const ConvergenceError& ex) {
            e["period"] = nullptr;
            e["status"] = std::string("fail: ") + ex.what();
            all = false;
        }
        checks.push_back(e);
    }
    auto doc = document("verify", cfg, {{"checks", checks}, {"all_pass", all}});
    if (!all) throw TrendFailure{doc, "some checks failed"};
    return doc;
}

json run_cache(const std::string& action, const std::string& dir_s) {
    const std::filesystem::path dir = dir_s.empty() ? cache_directory() : std::filesystem::path(dir_s);
    json r{{"directory", dir.string()}, {"action", action}};
    if (action == "inspect") {
        json files = json::array();
        for (const auto& f : cache_inspect(dir))
            files.push_back({{"file", f.path.filename().string()}, {"key", f.key}, {"records", f.records}, {"c_max", f.c_max}});
        r["files"] = files;
    } else if (action == "clear") {
        r["removed"] = cache_clear(dir);
    } else {
        throw ConfigError("cache action must be inspect or clear");
    }
    return json{{"command", "cache"}, {"result", r}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rademacher sums for vector-valued mock modular forms"};
    app.require_subcommand(1);

    JobFlags f;
    std::string csv, k_str = "1", tau_s = "0,1", cache_action = "inspect", cache_dir;
    std::optional<std::int64_t> c_one;
    std::vector<std::string> ks{"100"};
    double s_re = 2.0, s_im = 0.0, rel_tol = 1e-4;
    int j = 0;
    std::int64_t m = 1;
    bool at_one = false;

    auto* coeffs = app.add_subcommand("coeffs", "Fourier coefficients of the Rademacher sum");
    add_job_flags(coeffs, f);
    coeffs->add_option("--csv", csv, "also write a CSV coefficient table");
    auto* shadow = app.add_subcommand("shadow", "coefficients of the shadow");
    add_job_flags(shadow, f);
    shadow->add_option("--csv", csv, "also write a CSV coefficient table");
    auto* kl = app.add_subcommand("kloosterman", "generalized Kloosterman sums");
    add_job_flags(kl, f);
    kl->add_option("--k", k_str, "second exponent");
    kl->add_option("--c", c_one, "single modulus (else a table up to --cmax)");
    kl->add_option("--j", j, "target component");
    auto* zeta = app.add_subcommand("zeta", "Kloosterman zeta partial sums");
    add_job_flags(zeta, f);
    zeta->add_option("--k", k_str, "second exponent");
    zeta->add_option("--s", s_re, "real part of s");
    zeta->add_option("--s-im", s_im, "imaginary part of s");
    zeta->add_option("--j", j, "target component");
    zeta->add_flag("--at-one", at_one, "smoothed value at s = 1");
    auto* delta = app.add_subcommand("delta", "the constant Delta");
    add_job_flags(delta, f);
    auto* asym = app.add_subcommand("asymptotic", "leading-term coefficient estimate");
    add_job_flags(asym, f);
    asym->add_option("--k", ks, "coefficient indices")->expected(1, -1);
    asym->add_option("--j", j, "component");
    auto* dims = app.add_subcommand("dims", "dimension of the space of weakly holomorphic forms");
    add_job_flags(dims, f);
    dims->add_option("--m", m, "pole order bound");
    auto* basis = app.add_subcommand("basis", "Rademacher sums spanning the space");
    add_job_flags(basis, f);
    basis->add_option("--m", m, "pole order bound");
    auto* eval = app.add_subcommand("evaluate", "direct partial sums at a point");
    add_job_flags(eval, f);
    eval->add_option("--tau", tau_s, "point as re,im");
    eval->add_option("--rel-tol", rel_tol, "last trend step counted as converged below this (relative)");
    auto* verify = app.add_subcommand("verify", "all oracle checks for a job");
    add_job_flags(verify, f);
    auto* cache = app.add_subcommand("cache", "inspect or clear the Kloosterman cache");
    cache->add_option("action", cache_action, "inspect | clear");
    cache->add_option("--dir", cache_dir, "cache directory (default RADSUM_CACHE)");
    cache->add_option("-o,--out", f.out, "write JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        json doc;
        if (cache->parsed()) {
            doc = run_cache(cache_action, cache_dir);
        } else {
            const JobConfig cfg = resolve(f);
            if (coeffs->parsed()) doc = run_coeffs(cfg, false, csv);
            if (shadow->parsed()) doc = run_coeffs(cfg, true, csv);
            if (kl->parsed()) doc = run_kloosterman(cfg, k_str, c_one, j);
            if (zeta->parsed()) doc = run_zeta(cfg, k_str, s_re, s_im, j, at_one);
            if (delta->parsed()) doc = run_delta(cfg);
            if (asym->parsed()) doc = run_asymptotic(cfg, ks, j);
            if (dims->parsed()) doc = run_dims(cfg, m, false);
            if (basis->parsed()) doc = run_dims(cfg, m, true);
            if (eval->parsed()) doc = run_evaluate(cfg, tau_s, rel_tol);
            if (verify->parsed()) doc = run_verify(cfg);
        }
        emit(doc, f.out);
        return 0;
    } catch (const TrendFailure& t) {
        emit(t.doc, f.out);
        std::cerr << "radsum: " << t.why << "\n";
        return exit_convergence;
    } catch (const ConfigError& e) {
        std::cerr << "radsum: configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const IncompatibleExponentError& e) {
        std::cerr << "radsum: configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const OutOfScopeError& e) {
        std::cerr << "radsum: out of scope: " << e.what() << "\n";
        return exit_scope;
    } catch (const ConvergenceError& e) {
        std::cerr << "radsum: convergence failure: " << e.what() << "\n";
        return exit_convergence;
    } catch (const NumericalPathologyError& e) {
        std::cerr << "radsum: numerical failure: " << e.what() << "\n";
        return exit_convergence;
    } catch (const std::exception& e) {
        std::cerr << "radsum: " << e.what() << "\n";
        return exit_config;
    }
}
