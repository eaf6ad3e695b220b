// GameConfig: the complete primitive specification of the game, with
// validation of every structural assumption the solver relies on.
#pragma once

#include <cmath>
#include <string>

#include "sigsolve/families.hpp"
#include "sigsolve/numerics.hpp"

namespace sigsolve {

struct GameConfig {
    StateDist state_dist;
    double theta_min = -1.0;
    double theta_max = 1.0;
    Utility u_dm, u_1, u_2;
    CostFn cost_1, cost_2;
    double k_1 = 1.0, k_2 = 1.0;

    // computed by build_config
    double tau_1 = 0.0, tau_2 = 0.0;

    NumericsSettings num;

    double gain_1(double theta) const { return std::abs(u_1(theta)); }
    double gain_2(double theta) const { return std::abs(u_2(theta)); }
};

namespace detail {

inline void validate_basic(GameConfig& cfg) {
    if (!(cfg.theta_max > cfg.theta_min))
        throw ConfigError("state space bounds must satisfy theta_min < theta_max");
    if (!(cfg.k_1 > 0.0) || !std::isfinite(cfg.k_1))
        throw ConfigError("k_1 must be positive");
    if (!(cfg.k_2 > 0.0) || !std::isfinite(cfg.k_2))
        throw ConfigError("k_2 must be positive");
    if (!(cfg.theta_min < 0.0 && cfg.theta_max > 0.0))
        throw ConfigError("state space must contain 0 in its interior");

    // full support density
    const int n = 101;
    for (int i = 0; i <= n; ++i) {
        double t = cfg.theta_min + (cfg.theta_max - cfg.theta_min) * i / n;
        if (!(cfg.state_dist.pdf(t) > 0.0))
            throw ConfigError("state density must have full support on the state space");
    }

    if (std::abs(cfg.u_dm(0.0)) > 1e-12)
        throw ConfigError("u_dm must vanish at theta = 0 (normalized threshold)");

    // weakly increasing utilities
    const Utility* us[] = {&cfg.u_dm, &cfg.u_1, &cfg.u_2};
    for (const Utility* u : us) {
        double prev = (*u)(cfg.theta_min);
        for (int i = 1; i <= n; ++i) {
            double t = cfg.theta_min + (cfg.theta_max - cfg.theta_min) * i / n;
            double v = (*u)(t);
            if (v < prev - 1e-12)
                throw ConfigError("utilities must be weakly increasing in the state");
            prev = v;
        }
    }

    cfg.tau_1 = cfg.u_1.threshold(cfg.theta_min, cfg.theta_max);
    cfg.tau_2 = cfg.u_2.threshold(cfg.theta_min, cfg.theta_max);
    if (!(cfg.tau_1 < 0.0 && cfg.tau_2 > 0.0))
        throw ConfigError("threshold ordering violated: need tau_1 < 0 < tau_2");

    // C(theta, theta) = 0 and strict growth in |r - theta|
    for (int i = 0; i <= 10; ++i) {
        double t = cfg.theta_min + (cfg.theta_max - cfg.theta_min) * i / 10.0;
        if (std::abs(cfg.cost_1(t, t)) > 1e-12 || std::abs(cfg.cost_2(t, t)) > 1e-12)
            throw ConfigError("cost of a truthful report must be zero");
        double span = cfg.theta_max - cfg.theta_min;
        if (!(cfg.cost_1(t + 0.1 * span, t) > cfg.cost_1(t + 0.05 * span, t)) ||
            !(cfg.cost_2(t - 0.1 * span, t) > cfg.cost_2(t - 0.05 * span, t)))
            throw ConfigError("costs must increase in the size of the misreport");
    }
}

}  // namespace detail

// Exact reach evaluation by bracketed root finding; the defining equation is
// gain_j(theta) = k_j C_j(r, theta) with r on the far side of theta.

inline double upper_reach_1(const GameConfig& cfg, double theta) {
    double g = cfg.gain_1(theta);
    if (g <= 0.0) return theta;
    auto h = [&](double r) { return cfg.k_1 * cfg.cost_1(r, theta) - g; };
    double step = 0.25 * (cfg.theta_max - cfg.theta_min);
    auto [lo, hi] = expand_bracket_up(h, theta, step);
    return find_root(h, lo, hi, cfg.num.root_tol);
}

inline double lower_reach_2(const GameConfig& cfg, double theta) {
    double g = cfg.gain_2(theta);
    if (g <= 0.0) return theta;
    auto h = [&](double r) { return cfg.k_2 * cfg.cost_2(r, theta) - g; };
    double step = 0.25 * (cfg.theta_max - cfg.theta_min);
    auto [lo, hi] = expand_bracket_down(h, theta, step);
    return find_root(h, lo, hi, cfg.num.root_tol);
}

/// Smallest state whose gain sender 1 could justify by reporting r:
/// min theta with u_1(theta) = k_1 C_1(r, theta). Defined for r >= tau_1.
inline double inv_upper_reach_1(const GameConfig& cfg, double r) {
    if (r <= cfg.tau_1) {
        if (std::abs(r - cfg.tau_1) <= 1e-9) return cfg.tau_1;
        throw NumericError("inv_upper_reach_1: report not in image");
    }
    auto h = [&](double t) { return cfg.u_1(t) - cfg.k_1 * cfg.cost_1(r, t); };
    // h < 0 at tau_1, h = u_1(r) > 0 at theta = r; strictly increasing between
    return find_root(h, cfg.tau_1, r, cfg.num.root_tol);
}

/// Largest state with -u_2(theta) = k_2 C_2(r, theta). Defined for r <= tau_2.
inline double inv_lower_reach_2(const GameConfig& cfg, double r) {
    if (r >= cfg.tau_2) {
        if (std::abs(r - cfg.tau_2) <= 1e-9) return cfg.tau_2;
        throw NumericError("inv_lower_reach_2: report not in image");
    }
    auto h = [&](double t) { return -cfg.u_2(t) - cfg.k_2 * cfg.cost_2(r, t); };
    return find_root(h, r, cfg.tau_2, cfg.num.root_tol);
}

/// Finalize and validate a config. Throws ConfigError naming the violated
/// assumption. Also checks that the state space covers the conflict interval
/// [lower_reach_2(0), upper_reach_1(0)].
inline GameConfig build_config(GameConfig raw) {
    detail::validate_basic(raw);
    double hi = upper_reach_1(raw, 0.0);
    double lo = lower_reach_2(raw, 0.0);
    if (hi > raw.theta_max + 1e-12 || lo < raw.theta_min - 1e-12)
        throw ConfigError(
            "state space too small: it must cover the conflict interval "
            "[lower_reach_2(0), upper_reach_1(0)] = [" + std::to_string(lo) +
            ", " + std::to_string(hi) + "]");
    return raw;
}

}  // namespace sigsolve
