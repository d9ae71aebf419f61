#pragma once

// Job configuration as JSON. Rationals travel as "p/q" strings, matrices as
// rows of [re, im] pairs. Keys are emitted in a fixed order.

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "radsum/errors.hpp"
#include "radsum/group.hpp"
#include "radsum/multiplier.hpp"
#include "radsum/rademacher.hpp"

namespace radsum {

using json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

inline Rational rational_field(const json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a \"p/q\" string");
    try {
        return Rational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(row);
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw ConfigError(where + ": matrix must be square");
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto& e = row[static_cast<std::size_t>(c)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ConfigError(where + ": entries are [re, im] pairs");
            m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

}  // namespace detail

struct MultiplierConfig {
    std::string preset = "trivial";  // trivial | eta | explicit | direct_sum
    std::int64_t dim = 1;            // trivial
    std::int64_t power = 1;          // eta: rho_eta^power
    Matrix s, t;                     // explicit
    std::vector<MultiplierConfig> parts;

    json to_json() const {
        json j;
        j["preset"] = preset;
        if (preset == "trivial") j["dim"] = dim;
        if (preset == "eta") j["power"] = power;
        if (preset == "explicit") {
            j["S"] = detail::matrix_to_json(s);
            j["T"] = detail::matrix_to_json(t);
        }
        if (preset == "direct_sum") {
            j["parts"] = json::array();
            for (auto& p : parts) j["parts"].push_back(p.to_json());
        }
        return j;
    }

    static MultiplierConfig from_json(const json& j, const std::string& where = "multiplier") {
        detail::reject_unknown(j, {"preset", "dim", "power", "S", "T", "parts"}, where);
        MultiplierConfig m;
        m.preset = j.value("preset", std::string("trivial"));
        if (m.preset == "trivial") {
            m.dim = j.value("dim", std::int64_t{1});
            if (m.dim < 1) throw ConfigError(where + ".dim must be positive");
        } else if (m.preset == "eta") {
            m.power = j.value("power", std::int64_t{1});
        } else if (m.preset == "explicit") {
            if (!j.contains("S") || !j.contains("T")) throw ConfigError(where + ": explicit needs S and T");
            m.s = detail::matrix_from_json(j["S"], where + ".S");
            m.t = detail::matrix_from_json(j["T"], where + ".T");
        } else if (m.preset == "direct_sum") {
            if (!j.contains("parts") || !j["parts"].is_array() || j["parts"].empty())
                throw ConfigError(where + ": direct_sum needs parts");
            for (std::size_t i = 0; i < j["parts"].size(); ++i)
                m.parts.push_back(from_json(j["parts"][i], where + ".parts[" + std::to_string(i) + "]"));
        } else {
            throw ConfigError(where + ": unknown preset '" + m.preset + "'");
        }
        return m;
    }

    MultiplierSystem build(const Rational& w, const GroupSpec& g) const {
        if (preset == "trivial") return MultiplierSystem::trivial(w, static_cast<int>(dim), g);
        if (preset == "eta") {
            if (Rational(power, 2) != w)
                throw ConfigError("eta^" + std::to_string(power) + " has weight " + Rational(power, 2).str() +
                                  ", config says " + w.str());
            return MultiplierSystem::eta_power(power, g);
        }
        if (preset == "explicit") return MultiplierSystem::explicit_system(w, s, t).restricted_to(g);
        std::vector<MultiplierSystem> built;
        for (auto& p : parts) built.push_back(p.build(w, g));
        return MultiplierSystem::direct_sum(built);
    }
};

struct JobConfig {
    std::string family = "full";  // full | gamma0
    std::int64_t level = 1;
    Rational weight{0};
    MultiplierConfig multiplier;
    std::string cusp = "oo";
    int component = 0;
    Rational exponent{-1};
    std::int64_t c_max = 1000;
    std::int64_t k_max = 10;
    std::int64_t K = 60;
    std::string precision = "double";  // double | double-double

    GroupSpec group() const {
        if (family == "full") return GroupSpec::full();
        if (family == "gamma0") return GroupSpec::gamma0(level);
        throw ConfigError("group.family must be 'full' or 'gamma0'");
    }

    MultiplierSystem rho() const { return multiplier.build(weight, group()); }

    PrecisionPolicy precision_policy() const {
        PrecisionPolicy p;
        if (precision == "double")
            p.working_bits = 53;
        else if (precision == "double-double")
            p.working_bits = 106;
        else
            throw ConfigError("truncation.precision must be 'double' or 'double-double'");
        return p;
    }

    CuspData cusp_data() const {
        const auto g = group();
        if (cusp == "oo") return cusp_infinity();
        try {
            return make_cusp(g, CuspPoint::rational(Rational::parse(cusp)));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("pole.cusp: " + std::string(e.what()));
        }
    }

    RademacherJob job() const {
        RademacherJob j;
        j.group = group();
        j.rho = rho();
        j.cusp = cusp_data();
        j.i = component;
        j.n = exponent;
        j.c_max = c_max;
        j.k_max = k_max;
        j.precision = precision_policy();
        return j;
    }

    json to_json() const {
        json j;
        j["group"] = {{"family", family}, {"level", level}};
        j["weight"] = weight.str();
        j["multiplier"] = multiplier.to_json();
        j["pole"] = {{"cusp", cusp}, {"component", component}, {"exponent", exponent.str()}};
        j["truncation"] = {{"c_max", c_max}, {"k_max", k_max}, {"K", K}, {"precision", precision}};
        return j;
    }

    static JobConfig from_json(const json& j) {
        detail::reject_unknown(j, {"group", "weight", "multiplier", "pole", "truncation"}, "config");
        JobConfig c;
        try {
            if (j.contains("group")) {
                const auto& g = j["group"];
                detail::reject_unknown(g, {"family", "level"}, "group");
                c.family = g.value("family", c.family);
                c.level = g.value("level", c.family == "full" ? std::int64_t{1} : std::int64_t{0});
            }
            if (j.contains("weight")) c.weight = detail::rational_field(j, "weight", "config");
            if (j.contains("multiplier")) c.multiplier = MultiplierConfig::from_json(j["multiplier"]);
            if (j.contains("pole")) {
                const auto& p = j["pole"];
                detail::reject_unknown(p, {"cusp", "component", "exponent"}, "pole");
                c.cusp = p.value("cusp", c.cusp);
                c.component = p.value("component", c.component);
                if (p.contains("exponent")) c.exponent = detail::rational_field(p, "exponent", "pole");
            }
            if (j.contains("truncation")) {
                const auto& t = j["truncation"];
                detail::reject_unknown(t, {"c_max", "k_max", "K", "precision"}, "truncation");
                c.c_max = t.value("c_max", c.c_max);
                c.k_max = t.value("k_max", c.k_max);
                c.K = t.value("K", c.K);
                c.precision = t.value("precision", c.precision);
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        if (c.family != "full" && c.family != "gamma0") throw ConfigError("group.family must be 'full' or 'gamma0'");
        if (c.family == "gamma0" && c.level < 1) throw ConfigError("group.level must be positive");
        if (c.c_max < 1 || c.k_max < 0 || c.K < 1) throw ConfigError("truncation values out of range");
        if (c.component < 0) throw ConfigError("pole.component must be nonnegative");
        c.precision_policy();
        return c;
    }

    static JobConfig parse(const std::string& text) {
        json j;
        try {
            j = json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        return from_json(j);
    }

    static JobConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read config " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }
};

}  // namespace radsum
