// Brute-force certification of the computed equilibrium: expected sender
// payoffs against the opponent's mixed strategy and the DM rule, payoff
// spread on supports, deviation search, and DM-rationality spot checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sigsolve/belief.hpp"

namespace sigsolve {

/// P(DM selects plus | sender j delivers r in state theta), integrating over
/// the opponent's mixed strategy. The DM rule is monotone in the opponent's
/// report, so the continuous part reduces to one threshold plus a CDF mass.
inline double prob_plus(const StrategyProfile& pr, int sender, double r,
                        double theta) {
    int opp = 3 - sender;
    auto plus = [&](double x) {
        double r1 = sender == 1 ? r : x;
        double r2 = sender == 1 ? x : r;
        return decide(pr, r1, r2) == Action::Plus;
    };
    double p = 0.0;
    double a = pr.atom(opp, theta);
    if (a > 0.0 && plus(theta)) p += a;
    SupportInterval si = pr.support(opp, theta);
    if (si.has_continuous) {
        bool lo_plus = plus(si.lo + 1e-13);
        bool hi_plus = plus(si.hi - 1e-13);
        if (lo_plus == hi_plus) {
            // higher opponent reports favor plus; same verdict at both ends
            // means the verdict is uniform on the interval
            if (hi_plus) p += pr.cont_mass(opp, theta, si, si.lo, si.hi);
        } else {
            double lo = si.lo, hi = si.hi;
            for (int i = 0; i < 60 && hi - lo > 1e-13; ++i) {
                double mid = 0.5 * (lo + hi);
                if (plus(mid) == hi_plus) hi = mid;
                else lo = mid;
            }
            double t = 0.5 * (lo + hi);
            if (hi_plus) p += pr.cont_mass(opp, theta, si, t, si.hi);
            else p += pr.cont_mass(opp, theta, si, si.lo, t);
        }
    }
    return std::min(p, 1.0);
}

/// Expected sender payoff from delivering r in state theta.
inline double sender_payoff(const StrategyProfile& pr, int sender, double r,
                            double theta) {
    const GameConfig& cfg = pr.config();
    double win = prob_plus(pr, sender, r, theta);
    double u = sender == 1 ? cfg.u_1(theta) : cfg.u_2(theta);
    double cost = sender == 1 ? cfg.k_1 * cfg.cost_1(r, theta)
                              : cfg.k_2 * cfg.cost_2(r, theta);
    return win * u - cost;
}

struct VerifyGrids {
    int state_n = 65;
    int report_n = 512;
    int support_samples = 33;
    int dm_pairs_side = 50;
};

struct StateCheck {
    double theta = 0.0;
    double spread_1 = 0.0, spread_2 = 0.0;   // payoff spread across support
    double gain_1 = 0.0, gain_2 = 0.0;       // best deviation gain found
    double best_dev_1 = 0.0, best_dev_2 = 0.0;
};

struct VerificationReport {
    std::vector<StateCheck> states;
    double max_spread = 0.0;
    double max_gain = 0.0;
    int dm_violations = 0;
    int dm_pairs_checked = 0;
    double payoff_scale = 1.0;
    VerifyGrids grids;

    bool pass(double eps_rel = 1e-3) const {
        double eps = eps_rel * payoff_scale;
        return max_gain <= eps && max_spread <= eps && dm_violations == 0;
    }
};

inline VerificationReport verify_direct_equilibrium(const StrategyProfile& pr,
                                                    VerifyGrids grids = {}) {
    const GameConfig& cfg = pr.config();
    VerificationReport rep;
    rep.grids = grids;
    rep.payoff_scale = std::max({std::abs(cfg.u_1(cfg.theta_min)),
                                 std::abs(cfg.u_1(cfg.theta_max)),
                                 std::abs(cfg.u_2(cfg.theta_min)),
                                 std::abs(cfg.u_2(cfg.theta_max))});
    rep.states.resize(grids.state_n);

    double rep_lo = pr.swing().domain_lo();
    double rep_hi = pr.swing().domain_hi();
    double margin = 0.1 * (rep_hi - rep_lo);

    parallel_for(grids.state_n, cfg.num.threads, [&](int i) {
        double theta = cfg.theta_min
                     + (cfg.theta_max - cfg.theta_min) * i
                           / double(grids.state_n - 1);
        StateCheck sc;
        sc.theta = theta;
        for (int sender = 1; sender <= 2; ++sender) {
            double eq = sender_payoff(pr, sender, theta, theta);
            double lo_pay = eq, hi_pay = eq;
            SupportInterval si = pr.support(sender, theta);
            if (si.has_continuous) {
                // open interior: the closed endpoint ties against the
                // opponent's truth atom, where payoffs are discontinuous and
                // indifference only holds almost everywhere
                double inset = std::max(1e-6 * (si.hi - si.lo), 1e-9);
                for (int k = 0; k <= grids.support_samples
                                && si.hi - si.lo > 2.0 * inset; ++k) {
                    double r = si.lo + inset
                             + (si.hi - si.lo - 2.0 * inset) * k
                                   / double(grids.support_samples);
                    double w = sender_payoff(pr, sender, r, theta);
                    lo_pay = std::min(lo_pay, w);
                    hi_pay = std::max(hi_pay, w);
                }
            }
            double spread = hi_pay - lo_pay;
            double gain = 0.0, best = theta;
            for (int k = 0; k < grids.report_n; ++k) {
                double r = rep_lo - margin
                         + (rep_hi - rep_lo + 2.0 * margin) * k
                               / double(grids.report_n - 1);
                double g = sender_payoff(pr, sender, r, theta) - eq;
                if (g > gain) {
                    gain = g;
                    best = r;
                }
            }
            if (sender == 1) {
                sc.spread_1 = spread;
                sc.gain_1 = gain;
                sc.best_dev_1 = best;
            } else {
                sc.spread_2 = spread;
                sc.gain_2 = gain;
                sc.best_dev_2 = best;
            }
        }
        rep.states[static_cast<size_t>(i)] = sc;
    });
    for (const auto& sc : rep.states) {
        rep.max_spread = std::max({rep.max_spread, sc.spread_1, sc.spread_2});
        rep.max_gain = std::max({rep.max_gain, sc.gain_1, sc.gain_2});
    }

    // DM sequential rationality: swing-rule action vs posterior sign on a
    // grid of conflicting pairs, skipping a band around the indifference locus
    const SwingFunction& sw = pr.swing();
    int n = grids.dm_pairs_side;
    std::vector<int> viol(static_cast<size_t>(n), 0);
    parallel_for(n, cfg.num.threads, [&](int i) {
        double r1 = rep_hi * (i + 0.5) / double(n);
        for (int j = 0; j < n; ++j) {
            double r2 = rep_lo * (j + 0.5) / double(n);
            double locus = sw.eval(r2);
            if (std::abs(r1 - locus) <= 1e-4) continue;
            Posterior p = posterior(pr, r1, r2);
            Action swing_act = r1 >= locus ? Action::Plus : Action::Minus;
            if (p.on_path && p.action != swing_act) ++viol[static_cast<size_t>(i)];
        }
    });
    for (int v : viol) rep.dm_violations += v;
    rep.dm_pairs_checked = n * n;
    return rep;
}

}  // namespace sigsolve
