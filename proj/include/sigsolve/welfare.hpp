// Ex-ante DM welfare: full information, the equilibrium level and its upper
// bound, and the alternative procedure where the DM acquires her own
// (possibly noisy) signal with some probability.
#pragma once

#include <cmath>
#include <vector>

#include "sigsolve/benchmark.hpp"
#include "sigsolve/strategy.hpp"

namespace sigsolve {

inline double w_fi(const GameConfig& cfg) {
    return integrate_welfare(cfg, 0.0, cfg.theta_max);
}

/// Upper bound on equilibrium DM welfare: full information minus the loss
/// from negative states where sender 2 is truthful but sender 1 misreports.
inline double w_bar(const StrategyProfile& pr) {
    const GameConfig& cfg = pr.config();
    double correction = integrate(
        [&](double t) {
            return cfg.state_dist.pdf(t) * cfg.u_dm(t)
                 * (1.0 - pr.atom(1, t)) * pr.atom(2, t);
        },
        pr.cutoffs().theta_1, 0.0, cfg.num.quad_tol, cfg.num.max_quad_depth);
    return w_fi(cfg) + correction;
}

/// P(DM selects plus | theta) under the equilibrium profile.
inline double p_plus_given_theta(const StrategyProfile& pr, double theta) {
    const GameConfig& cfg = pr.config();
    if (!pr.mixes(theta)) return theta >= 0.0 ? 1.0 : 0.0;
    const SwingFunction& sw = pr.swing();
    auto win = [&](double r1) {
        // plus iff sender 2's report is at least the swing report of r1
        double s = sw.eval(std::clamp(r1, sw.domain_lo(), sw.domain_hi()));
        return pr.prob_geq(2, s, theta);
    };
    double p = pr.atom(1, theta) * win(theta);
    SupportInterval si = pr.support(1, theta);
    if (si.has_continuous) {
        // integrate in the image variable x = s(r): the mass element is
        // coef * C2'(x, theta) dx and the win probability depends on x only.
        // The image endpoints come from the support's exact pre-images, and
        // the endpoint substitution carries exact gaps through the cost
        // slope, which can be singular where the image meets theta.
        double a = si.img_hi;
        double b = si.img_lo;
        double coef = cfg.k_2 / (-cfg.u_2(theta));
        auto g_at = [&](double gap, double x) {
            return -coef * cfg.cost_2.d_dr_gap(gap) * pr.prob_geq(2, x, theta);
        };
        double mid = 0.5 * (a + b);
        double ha = std::sqrt(mid - a), hb = std::sqrt(b - mid);
        double da = a - theta, db = b - theta;
        p += integrate(
            [&](double u) {
                double x = a + u * u;
                return 2.0 * u * g_at(da + u * u, x);
            },
            0.0, ha, 1e-9, cfg.num.max_quad_depth);
        p += integrate(
            [&](double v) {
                double x = b - v * v;
                return 2.0 * v * g_at(db - v * v, x);
            },
            0.0, hb, 1e-9, cfg.num.max_quad_depth);
    }
    return std::min(p, 1.0);
}

/// Exact equilibrium DM welfare by nested quadrature.
inline double w_de(const StrategyProfile& pr) {
    const GameConfig& cfg = pr.config();
    const auto& c = pr.cutoffs();
    double outside = integrate_welfare(cfg, c.theta_2, cfg.theta_max);
    double inside = integrate(
        [&](double t) {
            return cfg.state_dist.pdf(t) * cfg.u_dm(t) * p_plus_given_theta(pr, t);
        },
        c.theta_1, c.theta_2, 1e-8, cfg.num.max_quad_depth);
    // negative states below theta_1 always get minus: zero contribution
    return outside + inside;
}

// ---------------------------------------------------------------------------
// Inquisitorial procedure: with probability q the DM observes sigma = theta
// + Gaussian noise (exact when noise_sd = 0) and selects plus iff the
// posterior mean payoff is nonnegative; otherwise she takes the best fixed
// action under the prior.
// ---------------------------------------------------------------------------

inline double prior_only_welfare(const GameConfig& cfg) {
    return std::max(0.0, integrate_welfare(cfg, cfg.theta_min, cfg.theta_max));
}

namespace detail {

inline double signal_threshold(const GameConfig& cfg, double sd) {
    auto post_mean = [&](double sigma) {
        return integrate(
            [&](double t) {
                double z = (sigma - t) / sd;
                return cfg.state_dist.pdf(t) * cfg.u_dm(t) * std::exp(-0.5 * z * z);
            },
            cfg.theta_min, cfg.theta_max, cfg.num.quad_tol,
            cfg.num.max_quad_depth);
    };
    double lo = cfg.theta_min - 5.0 * sd;
    double hi = cfg.theta_max + 5.0 * sd;
    if (post_mean(lo) >= 0.0) return lo;
    if (post_mean(hi) <= 0.0) return hi;
    return find_root(post_mean, lo, hi, cfg.num.root_tol);
}

}  // namespace detail

inline double w_inq(const GameConfig& cfg, double q, double noise_sd) {
    double informed;
    if (noise_sd <= 0.0) {
        informed = w_fi(cfg);
    } else {
        double sstar = detail::signal_threshold(cfg, noise_sd);
        informed = integrate(
            [&](double t) {
                // P(sigma >= sstar | theta) for Gaussian noise
                double z = (sstar - t) / (noise_sd * std::sqrt(2.0));
                return cfg.state_dist.pdf(t) * cfg.u_dm(t) * 0.5 * std::erfc(z);
            },
            cfg.theta_min, cfg.theta_max, cfg.num.quad_tol,
            cfg.num.max_quad_depth);
    }
    return q * informed + (1.0 - q) * prior_only_welfare(cfg);
}

/// Smallest signal probability q at which the inquisitorial procedure (with
/// exact signals) matches the adversarial upper bound; < 1 whenever the
/// bound is strict.
inline double crossover_q(const GameConfig& cfg, double target) {
    auto h = [&](double q) { return w_inq(cfg, q, 0.0) - target; };
    if (h(0.0) >= 0.0) return 0.0;
    if (h(1.0) <= 0.0) return 1.0;
    return find_root(h, 0.0, 1.0, 1e-12);
}

struct WelfareReport {
    double full_info = 0.0;
    double equilibrium = 0.0;
    double upper_bound = 0.0;
    double q_star = 0.0;
};

inline WelfareReport welfare_report(const StrategyProfile& pr) {
    WelfareReport w;
    w.full_info = w_fi(pr.config());
    w.equilibrium = w_de(pr);
    w.upper_bound = w_bar(pr);
    w.q_star = crossover_q(pr.config(), w.upper_bound);
    return w;
}

}  // namespace sigsolve
