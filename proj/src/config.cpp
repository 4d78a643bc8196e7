#include "mcgehee/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mcgehee {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ConfigError("missing required key '" + where + key + "'");
    }
    return obj.at(key);
}

template <typename T>
T get_as(const json& j, const std::string& what) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + what + "'");
    }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out, const std::string& where) {
    if (obj.is_object() && obj.contains(key)) {
        out = get_as<T>(obj.at(key), where + key);
    }
}

Germ parse_terms(const json& terms, int n, int trunc, const std::string& where) {
    if (!terms.is_array()) {
        throw ConfigError("'" + where + "' must be a list of {exponents, coeff} records");
    }
    std::vector<std::pair<Exponent, double>> list;
    for (const json& t : terms) {
        const auto alpha = get_as<Exponent>(require(t, "exponents", where + "[]."), where + ".exponents");
        const double c = get_as<double>(require(t, "coeff", where + "[]."), where + ".coeff");
        list.emplace_back(alpha, c);
    }
    try {
        return Germ::from_terms(n, trunc, list);
    } catch (const InputError& e) {
        throw ConfigError("'" + where + "': " + e.what());
    }
}

int max_degree(const json& terms) {
    int best = 0;
    if (!terms.is_array()) {
        return 0;
    }
    for (const json& t : terms) {
        if (t.is_object() && t.contains("exponents") && t["exponents"].is_array()) {
            int deg = 0;
            for (const json& e : t["exponents"]) {
                deg += e.is_number_integer() ? e.get<int>() : 0;
            }
            best = std::max(best, deg);
        }
    }
    return best;
}

}  // namespace

LagrangianSystem RunConfig::make_system() const {
    return LagrangianSystem::create(potential, metric, magnetic, domain_radius);
}

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    const json& sys = require(root, "system", "");
    cfg.dimension = get_as<int>(require(sys, "dimension", "system."), "system.dimension");
    if (cfg.dimension < 1) {
        throw ConfigError("system.dimension must be positive");
    }
    cfg.domain_radius = get_as<double>(require(sys, "domain_radius", "system."), "system.domain_radius");
    const json& pot = require(sys, "potential", "system.");
    cfg.truncation = max_degree(pot);
    for (const char* key : {"metric", "magnetic"}) {
        if (sys.contains(key) && sys[key].is_array()) {
            for (const json& e : sys[key]) {
                if (e.is_object() && e.contains("terms")) {
                    cfg.truncation = std::max(cfg.truncation, max_degree(e["terms"]));
                }
            }
        }
    }
    read_opt(sys, "truncation", cfg.truncation, "system.");
    const int n = cfg.dimension;
    const int trunc = cfg.truncation;
    cfg.potential = parse_terms(pot, n, trunc, "system.potential");

    cfg.metric = MetricField::euclidean(n, trunc);
    if (sys.contains("metric")) {
        const json& entries = sys["metric"];
        if (!entries.is_array()) {
            throw ConfigError("'system.metric' must be a list of {row, col, terms} entries");
        }
        for (const json& e : entries) {
            const int a = get_as<int>(require(e, "row", "system.metric[]."), "system.metric.row");
            const int b = get_as<int>(require(e, "col", "system.metric[]."), "system.metric.col");
            if (a < 0 || a >= n || b < 0 || b >= n) {
                throw ConfigError("system.metric entry index out of range");
            }
            cfg.metric.g[a][b] = parse_terms(require(e, "terms", "system.metric[]."), n, trunc, "system.metric.terms");
        }
    }
    cfg.magnetic = MagneticPotential::zero(n, trunc);
    if (sys.contains("magnetic")) {
        const json& entries = sys["magnetic"];
        if (!entries.is_array()) {
            throw ConfigError("'system.magnetic' must be a list of {component, terms} entries");
        }
        for (const json& e : entries) {
            const int i = get_as<int>(require(e, "component", "system.magnetic[]."), "system.magnetic.component");
            if (i < 0 || i >= n) {
                throw ConfigError("system.magnetic component out of range");
            }
            cfg.magnetic.A[i] = parse_terms(require(e, "terms", "system.magnetic[]."), n, trunc, "system.magnetic.terms");
        }
    }

    read_opt(root, "seed", cfg.seed, "");
    cfg.search.seed = cfg.seed;
    if (root.contains("integrator")) {
        const json& ic = root["integrator"];
        read_opt(ic, "rtol", cfg.integrator.rtol, "integrator.");
        read_opt(ic, "atol", cfg.integrator.atol, "integrator.");
        read_opt(ic, "max_step", cfg.integrator.max_step, "integrator.");
        read_opt(ic, "min_step", cfg.integrator.min_step, "integrator.");
        read_opt(ic, "initial_step", cfg.integrator.initial_step, "integrator.");
        read_opt(ic, "t_max", cfg.integrator.t_max, "integrator.");
        read_opt(ic, "backward", cfg.integrator.backward, "integrator.");
        read_opt(ic, "exit_radius", cfg.integrator.exit_radius, "integrator.");
        read_opt(ic, "detect_fixed_points", cfg.integrator.detect_fixed_points, "integrator.");
        read_opt(ic, "fixed_point_tol", cfg.integrator.fixed_point_tol, "integrator.");
        read_opt(ic, "max_steps", cfg.integrator.max_steps, "integrator.");
    }
    try {
        cfg.integrator.validate();
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    if (root.contains("search")) {
        const json& sc = root["search"];
        read_opt(sc, "seeds_per_dim_sq", cfg.search.seeds_per_dim_sq, "search.");
        read_opt(sc, "merge_radius", cfg.search.merge_radius, "search.");
        read_opt(sc, "grad_tol", cfg.search.grad_tol, "search.");
        read_opt(sc, "max_newton_iterations", cfg.search.max_newton_iterations, "search.");
        read_opt(sc, "degeneracy_tol", cfg.search.degeneracy_tol, "search.");
        read_opt(sc, "zero_value_tol", cfg.search.zero_value_tol, "search.");
        read_opt(sc, "cluster_radius", cfg.search.cluster_radius, "search.");
    }
    if (root.contains("integrate")) {
        const json& s = root["integrate"];
        std::string frame = "original";
        read_opt(s, "frame", frame, "integrate.");
        if (frame == "original") {
            cfg.integrate.frame = Frame::Original;
        } else if (frame == "blown") {
            cfg.integrate.frame = Frame::Blown;
        } else {
            throw ConfigError("integrate.frame must be 'original' or 'blown'");
        }
        read_opt(s, "state", cfg.integrate.state, "integrate.");
    }
    if (root.contains("escape")) {
        const json& s = root["escape"];
        read_opt(s, "r_B", cfg.escape.r_B, "escape.");
        read_opt(s, "count", cfg.escape.count, "escape.");
        if (s.contains("state")) {
            cfg.escape.state = get_as<std::vector<double>>(s["state"], "escape.state");
        }
    }
    if (root.contains("boomerang")) {
        const json& s = root["boomerang"];
        read_opt(s, "ns", cfg.boomerang.ns, "boomerang.");
        read_opt(s, "r_cut", cfg.boomerang.r_cut, "boomerang.");
        read_opt(s, "spacing", cfg.boomerang.spacing, "boomerang.");
        if (s.contains("critical_point")) {
            cfg.boomerang.critical_point = get_as<int>(s["critical_point"], "boomerang.critical_point");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace mcgehee
