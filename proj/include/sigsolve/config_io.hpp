// Config file ingestion: INI-style sections [distribution], [utilities],
// [costs], [numerics], [simulation]. See README for the schema.
#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sigsolve/config.hpp"

namespace sigsolve {

struct SimSettings {
    std::int64_t draws = 100000;
    std::uint64_t seed = 1;
    int bins = 64;
};

struct ParsedConfig {
    GameConfig game;
    SimSettings sim;
    std::string raw_text;  // for provenance hashing
};

namespace detail {

using IniData = std::map<std::string, std::map<std::string, std::string>>;

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline IniData parse_ini(const std::string& text) {
    IniData data;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno)
                                  + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno)
                              + ": expected key = value");
        data[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return data;
}

inline double to_double(const std::string& section, const std::string& key,
                        const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config [" + section + "] " + key
                          + ": not a number: " + v);
    }
}

inline Utility parse_utility(const std::string& key, const std::string& v) {
    std::istringstream in(v);
    std::string family;
    in >> family;
    if (family == "affine") {
        AffineUtility u;
        if (!(in >> u.slope >> u.intercept))
            throw ConfigError("config [utilities] " + key
                              + ": affine needs slope and intercept");
        return Utility(u);
    }
    if (family == "tabulated") {
        std::vector<double> xs, ys;
        std::string pair;
        while (in >> pair) {
            size_t c = pair.find(':');
            if (c == std::string::npos)
                throw ConfigError("config [utilities] " + key
                                  + ": tabulated entries are x:y pairs");
            xs.push_back(to_double("utilities", key, pair.substr(0, c)));
            ys.push_back(to_double("utilities", key, pair.substr(c + 1)));
        }
        if (xs.size() < 2)
            throw ConfigError("config [utilities] " + key
                              + ": tabulated needs at least two points");
        TabulatedUtility u;
        u.curve = MonotoneCubic(std::move(xs), std::move(ys));
        return Utility(std::move(u));
    }
    throw ConfigError("config [utilities] " + key + ": unknown family "
                      + family);
}

inline CostFn parse_cost(const std::string& key, const std::string& v) {
    std::istringstream in(v);
    std::string family;
    in >> family;
    if (family == "power") {
        PowerCost c;
        if (!(in >> c.exponent))
            throw ConfigError("config [costs] " + key + ": power needs exponent");
        if (!(in >> c.scale)) c.scale = 1.0;
        if (!(c.exponent > 0.0))
            throw ConfigError("config [costs] " + key
                              + ": exponent must be positive");
        if (!(c.scale > 0.0))
            throw ConfigError("config [costs] " + key + ": scale must be positive");
        return CostFn(c);
    }
    throw ConfigError("config [costs] " + key + ": unknown family " + family);
}

}  // namespace detail

inline ParsedConfig parse_config_text(const std::string& text) {
    using detail::to_double;
    auto data = detail::parse_ini(text);
    ParsedConfig pc;
    pc.raw_text = text;
    GameConfig& g = pc.game;

    auto get = [&](const std::string& sec, const std::string& key,
                   const std::string& fallback) {
        auto s = data.find(sec);
        if (s == data.end()) return fallback;
        auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second;
    };
    auto require = [&](const std::string& sec, const std::string& key) {
        std::string v = get(sec, key, "");
        if (v.empty())
            throw ConfigError("config missing [" + sec + "] " + key);
        return v;
    };

    g.theta_min = to_double("distribution", "theta_min",
                            require("distribution", "theta_min"));
    g.theta_max = to_double("distribution", "theta_max",
                            require("distribution", "theta_max"));
    std::string fam = get("distribution", "family", "uniform");
    if (fam == "uniform") {
        g.state_dist = StateDist(UniformDist{g.theta_min, g.theta_max});
    } else if (fam == "truncated_normal") {
        TruncNormalDist d;
        d.mu = to_double("distribution", "mu", get("distribution", "mu", "0"));
        d.sigma = to_double("distribution", "sigma",
                            get("distribution", "sigma", "1"));
        if (!(d.sigma > 0.0))
            throw ConfigError("config [distribution] sigma must be positive");
        d.lo = g.theta_min;
        d.hi = g.theta_max;
        g.state_dist = StateDist(d);
    } else {
        throw ConfigError("config [distribution] family: unknown family " + fam);
    }

    g.u_dm = detail::parse_utility("u_dm", require("utilities", "u_dm"));
    g.u_1 = detail::parse_utility("u_1", require("utilities", "u_1"));
    g.u_2 = detail::parse_utility("u_2", require("utilities", "u_2"));

    g.cost_1 = detail::parse_cost("cost_1", require("costs", "cost_1"));
    g.cost_2 = detail::parse_cost("cost_2", require("costs", "cost_2"));
    g.k_1 = to_double("costs", "k_1", get("costs", "k_1", "1"));
    g.k_2 = to_double("costs", "k_2", get("costs", "k_2", "1"));

    g.num.root_tol = to_double("numerics", "root_tol",
                               get("numerics", "root_tol", "1e-10"));
    g.num.quad_tol = to_double("numerics", "quad_tol",
                               get("numerics", "quad_tol", "1e-10"));
    g.num.reach_grid_n = static_cast<int>(to_double(
        "numerics", "reach_grid_n", get("numerics", "reach_grid_n", "512")));
    g.num.swing_grid_n = static_cast<int>(to_double(
        "numerics", "swing_grid_n", get("numerics", "swing_grid_n", "257")));
    g.num.threads = static_cast<int>(
        to_double("numerics", "threads", get("numerics", "threads", "0")));

    pc.sim.draws = static_cast<std::int64_t>(to_double(
        "simulation", "draws", get("simulation", "draws", "100000")));
    pc.sim.seed = static_cast<std::uint64_t>(
        to_double("simulation", "seed", get("simulation", "seed", "1")));
    pc.sim.bins = static_cast<int>(
        to_double("simulation", "bins", get("simulation", "bins", "64")));

    pc.game = build_config(g);
    return pc;
}

inline ParsedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace sigsolve
