// Benchmark outcomes: the fully revealing receiver-efficient pure profile,
// its supporting beliefs, the refutation under single-sender attribution
// beliefs, and the reference welfare levels (full information, cheap talk).
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sigsolve/belief.hpp"
#include "sigsolve/reach.hpp"

namespace sigsolve {

enum class PureBeliefPolicy {
    FreSupporting,   // plus iff r_1 reaches the pooled report
    TrustSender2,    // invert sender 2's separating rule: state = r_2
    EvenSplit,       // matching reports reveal; otherwise 50/50 over {r_1, r_2}
};

struct PureProfile {
    std::function<double(double)> rule_1, rule_2;  // theta -> report
    PureBeliefPolicy beliefs = PureBeliefPolicy::FreSupporting;
    double pooled_report = 0.0;  // the r_1 pooling level for FreSupporting
};

/// DM action under a pure profile's belief policy.
inline Action pure_decide(const PureProfile& p, const GameConfig& cfg,
                          double r_1, double r_2) {
    switch (p.beliefs) {
        case PureBeliefPolicy::FreSupporting:
            return r_1 >= p.pooled_report - 1e-12 ? Action::Plus : Action::Minus;
        case PureBeliefPolicy::TrustSender2:
            return cfg.u_dm(r_2) >= 0.0 ? Action::Plus : Action::Minus;
        case PureBeliefPolicy::EvenSplit: {
            double u = std::abs(r_1 - r_2) <= 1e-12
                           ? cfg.u_dm(r_1)
                           : 0.5 * (cfg.u_dm(r_1) + cfg.u_dm(r_2));
            return u >= 0.0 ? Action::Plus : Action::Minus;
        }
    }
    return Action::Plus;
}

/// The fully revealing receiver-efficient construction: sender 1 pools on
/// upper_reach_1(0) over [0, upper_reach_1(0)], both rules identity
/// elsewhere. Requires upper_reach_1(0) < tau_2.
inline PureProfile build_fre_profile(const GameConfig& cfg, const ReachTable& rt) {
    double pool = rt.r1_bar_0();
    if (!(pool < cfg.tau_2))
        throw ConfigError("assumption upper_reach_1(0) < tau_2 violated");
    PureProfile p;
    p.pooled_report = pool;
    p.rule_1 = [pool](double theta) {
        return (theta >= 0.0 && theta <= pool) ? pool : theta;
    };
    p.rule_2 = [](double theta) { return theta; };
    p.beliefs = PureBeliefPolicy::FreSupporting;
    return p;
}

inline PureProfile build_truthful_profile() {
    PureProfile p;
    p.rule_1 = [](double theta) { return theta; };
    p.rule_2 = [](double theta) { return theta; };
    p.beliefs = PureBeliefPolicy::EvenSplit;
    return p;
}

/// Payoff gain for one sender from deviating to report r in state theta,
/// with the opponent on the profile rule.
inline double pure_deviation_gain(const PureProfile& p, const GameConfig& cfg,
                                  int sender, double theta, double r) {
    double e1 = p.rule_1(theta), e2 = p.rule_2(theta);
    auto payoff = [&](double rr) {
        double r1 = sender == 1 ? rr : e1;
        double r2 = sender == 1 ? e2 : rr;
        double win = pure_decide(p, cfg, r1, r2) == Action::Plus ? 1.0 : 0.0;
        double u = sender == 1 ? cfg.u_1(theta) : cfg.u_2(theta);
        double cost = sender == 1 ? cfg.k_1 * cfg.cost_1(rr, theta)
                                  : cfg.k_2 * cfg.cost_2(rr, theta);
        return win * u - cost;
    };
    return payoff(r) - payoff(sender == 1 ? e1 : e2);
}

struct PureDeviation {
    int sender = 0;
    double theta = 0.0;
    double report = 0.0;
    double gain = 0.0;
};

struct PureCheckResult {
    double max_gain = 0.0;
    PureDeviation best;
};

/// Grid search for profitable unilateral deviations from a pure profile.
inline PureCheckResult check_equilibrium(const PureProfile& p,
                                         const GameConfig& cfg,
                                         int state_n = 201, int report_n = 512) {
    PureCheckResult res;
    for (int i = 0; i < state_n; ++i) {
        double theta = cfg.theta_min
                     + (cfg.theta_max - cfg.theta_min) * i / double(state_n - 1);
        double e1 = p.rule_1(theta), e2 = p.rule_2(theta);
        for (int sender = 1; sender <= 2; ++sender) {
            double u = sender == 1 ? cfg.u_1(theta) : cfg.u_2(theta);
            auto payoff = [&](double r) {
                double r1 = sender == 1 ? r : e1;
                double r2 = sender == 1 ? e2 : r;
                double win = pure_decide(p, cfg, r1, r2) == Action::Plus ? 1.0 : 0.0;
                double cost = sender == 1 ? cfg.k_1 * cfg.cost_1(r, theta)
                                          : cfg.k_2 * cfg.cost_2(r, theta);
                return win * u - cost;
            };
            double eq = payoff(sender == 1 ? e1 : e2);
            for (int k = 0; k < report_n; ++k) {
                double r = cfg.theta_min
                         + (cfg.theta_max - cfg.theta_min) * k / double(report_n - 1);
                double g = payoff(r) - eq;
                if (g > res.max_gain) {
                    res.max_gain = g;
                    res.best = {sender, theta, r, g};
                }
            }
            // truthful report is always a candidate deviation
            double g = payoff(theta) - eq;
            if (g > res.max_gain) {
                res.max_gain = g;
                res.best = {sender, theta, theta, g};
            }
        }
    }
    return res;
}

struct BenchmarkWelfares {
    double w_full_info = 0.0;
    double w_aligned = 0.0;      // perfectly aligned senders: first best
    double w_verifiable = 0.0;   // verifiable reports: first best
    double w_babbling = 0.0;     // uninformative cheap talk
    double w_partition = 0.0;    // cheap talk revealing the threshold cell
};

inline double integrate_welfare(const GameConfig& cfg, double lo, double hi) {
    return integrate(
        [&](double t) { return cfg.state_dist.pdf(t) * cfg.u_dm(t); }, lo, hi,
        cfg.num.quad_tol, cfg.num.max_quad_depth);
}

inline BenchmarkWelfares benchmark_welfares(const GameConfig& cfg) {
    BenchmarkWelfares b;
    b.w_full_info = integrate_welfare(cfg, 0.0, cfg.theta_max);
    b.w_aligned = b.w_full_info;
    b.w_verifiable = b.w_full_info;
    b.w_babbling = std::max(0.0, integrate_welfare(cfg, cfg.theta_min, cfg.theta_max));
    // DM learns only which threshold cell the state is in; best fixed action
    // per cell
    b.w_partition = std::max(0.0, integrate_welfare(cfg, cfg.theta_min, cfg.tau_1))
                  + std::max(0.0, integrate_welfare(cfg, cfg.tau_1, cfg.tau_2))
                  + std::max(0.0, integrate_welfare(cfg, cfg.tau_2, cfg.theta_max));
    return b;
}

}  // namespace sigsolve
