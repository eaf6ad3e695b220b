// Posterior beliefs over the state given a report pair, the decision
// maker's expected payoff and action, and the vanishing-noise limit
// beliefs used for robustness checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "sigsolve/strategy.hpp"

namespace sigsolve {

enum class Action { Plus, Minus };

struct MassPoint {
    double theta = 0.0;
    double weight = 0.0;  // posterior probability of this exact state
};

struct Posterior {
    std::vector<MassPoint> masses;
    double cont_lo = 0.0, cont_hi = 0.0;  // continuous component interval
    std::function<double(double)> cont_density;  // normalized; may be null
    double cont_weight = 0.0;
    double u_dm_expected = 0.0;
    Action action = Action::Plus;
    bool on_path = false;
    bool double_deviation = false;

    bool degenerate(double tol = 1e-9) const {
        if (cont_weight > tol) return false;
        double w = 0.0;
        for (const auto& m : masses) w = std::max(w, m.weight);
        return w >= 1.0 - tol;
    }
    double support_lo() const {
        double lo = cont_weight > 0.0 ? cont_lo : 1e300;
        for (const auto& m : masses) lo = std::min(lo, m.theta);
        return lo;
    }
    double support_hi() const {
        double hi = cont_weight > 0.0 ? cont_hi : -1e300;
        for (const auto& m : masses) hi = std::max(hi, m.theta);
        return hi;
    }
    double cdf(double t) const {
        double p = 0.0;
        for (const auto& m : masses)
            if (m.theta <= t) p += m.weight;
        if (cont_weight > 0.0 && cont_density && t > cont_lo) {
            double hi = std::min(t, cont_hi);
            p += cont_weight * integrate(cont_density, cont_lo, hi, 1e-9);
        }
        return p;
    }
    double quantile(double q) const {
        double lo = support_lo(), hi = support_hi();
        if (!(hi > lo)) return lo;
        for (int i = 0; i < 100 && hi - lo > 1e-10; ++i) {
            double mid = 0.5 * (lo + hi);
            if (cdf(mid) < q) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }
};

namespace detail {

/// theta-interval on which psi_1(r_1, .) > 0, intersected with the mixing
/// region; empty (hi <= lo) when r_1 cannot arise as a misreport.
inline std::pair<double, double> psi1_interval(const StrategyProfile& pr,
                                               double r_1) {
    const auto& sw = pr.swing();
    const auto& rt = pr.reaches();
    const auto& c = pr.cutoffs();
    if (!(r_1 > c.theta_1) || !sw.in_domain(r_1)) return {0.0, -1.0};
    double s = sw.eval(std::clamp(r_1, sw.domain_lo(), sw.domain_hi()));
    double lo = std::max({s, rt.inv_upper_reach_1(r_1), c.theta_1});
    double hi = std::min({r_1, rt.inv_lower_reach_2(std::min(s, rt.config().tau_2 - 1e-12)),
                          c.theta_2});
    return {lo, hi};
}

inline std::pair<double, double> psi2_interval(const StrategyProfile& pr,
                                               double r_2) {
    const auto& sw = pr.swing();
    const auto& rt = pr.reaches();
    const auto& c = pr.cutoffs();
    if (!(r_2 < c.theta_2) || !sw.in_domain(r_2)) return {0.0, -1.0};
    double s = sw.eval(std::clamp(r_2, sw.domain_lo(), sw.domain_hi()));
    double lo = std::max({r_2, rt.inv_upper_reach_1(std::max(s, rt.config().tau_1 + 1e-12)),
                          c.theta_1});
    double hi = std::min({s, rt.inv_lower_reach_2(r_2), c.theta_2});
    return {lo, hi};
}

}  // namespace detail

/// Whether report r could be a truthful report of state r under the
/// equilibrium profile (positive truth-atom at that state).
inline bool truth_consistent(const StrategyProfile& pr, int sender, double r) {
    const GameConfig& cfg = pr.config();
    if (r < cfg.theta_min || r > cfg.theta_max) return false;
    return pr.atom(sender, r) > 0.0;
}

Posterior posterior(const StrategyProfile& pr, double r_1, double r_2);

namespace detail {

inline void finalize(Posterior& p, const GameConfig& cfg) {
    double u = 0.0;
    for (const auto& m : p.masses) u += m.weight * cfg.u_dm(m.theta);
    if (p.cont_weight > 0.0 && p.cont_density) {
        u += p.cont_weight
           * integrate([&](double t) { return p.cont_density(t) * cfg.u_dm(t); },
                       p.cont_lo, p.cont_hi, cfg.num.quad_tol,
                       cfg.num.max_quad_depth);
    }
    p.u_dm_expected = u;
    // indifference breaks toward plus; a small band absorbs quadrature noise
    p.action = u >= -1e-9 ? Action::Plus : Action::Minus;
}

inline void set_degenerate(Posterior& p, double theta) {
    p.masses = {{theta, 1.0}};
    p.cont_weight = 0.0;
    p.cont_density = nullptr;
}

/// Belief from fully trusting one sender: invert that sender's equilibrium
/// strategy at the observed report.
inline void trust_sender(Posterior& p, const StrategyProfile& pr, int sender,
                         double r) {
    const GameConfig& cfg = pr.config();
    double atom_w = 0.0;
    if (r >= cfg.theta_min && r <= cfg.theta_max)
        atom_w = cfg.state_dist.pdf(r) * pr.atom(sender, r);
    auto iv = sender == 1 ? psi1_interval(pr, r) : psi2_interval(pr, r);
    double cont_w = 0.0;
    if (iv.second > iv.first)
        cont_w = integrate(
            [&](double t) {
                return cfg.state_dist.pdf(t) * pr.density(sender, r, t);
            },
            iv.first, iv.second, cfg.num.quad_tol, cfg.num.max_quad_depth);
    double z = atom_w + cont_w;
    if (z <= 0.0) {
        set_degenerate(p, std::clamp(r, cfg.theta_min, cfg.theta_max));
        return;
    }
    if (atom_w > 0.0) p.masses.push_back({r, atom_w / z});
    if (cont_w > 0.0) {
        p.cont_lo = iv.first;
        p.cont_hi = iv.second;
        p.cont_weight = cont_w / z;
        p.cont_density = [&pr, &cfg, sender, r, cont_w](double t) {
            return cfg.state_dist.pdf(t) * pr.density(sender, r, t) / cont_w;
        };
    }
}

}  // namespace detail

/// Full Bayesian posterior for a report pair; off-path pairs get the
/// single-sender attribution policy (see README).
inline Posterior posterior(const StrategyProfile& pr, double r_1, double r_2) {
    const GameConfig& cfg = pr.config();
    Posterior p;

    // matching reports with positive truth atoms reveal the state exactly:
    // the atom-atom component dominates every density component in the limit
    if (std::abs(r_1 - r_2) <= 1e-12) {
        double t = r_1;
        if (t >= cfg.theta_min && t <= cfg.theta_max &&
            pr.atom(1, t) > 0.0 && pr.atom(2, t) > 0.0) {
            detail::set_degenerate(p, t);
            p.on_path = true;
            detail::finalize(p, cfg);
            return p;
        }
    }

    // Conflicting pairs: the belief family supporting the decision rule.
    // Density proportional to f * C1'(r_1,.) * (-C2'(r_2,.)) / (u_1 * -u_2)
    // over the reachability interval. At a swing pair this equals the
    // Bayes product of the senders' densities, and its expected payoff is a
    // positive multiple of the indifference integral that defines s, so the
    // action always agrees with the swing comparison.
    const SwingFunction& sw = pr.swing();
    if (r_2 < 0.0 && r_1 > 0.0 && sw.in_domain(r_1) && sw.in_domain(r_2)) {
        const ReachTable& rt = pr.reaches();
        double lo = std::max(r_2, rt.inv_upper_reach_1(r_1));
        double hi = std::min(r_1, rt.inv_lower_reach_2(r_2));
        if (hi > lo) {
            auto kern = [&cfg, r_1, r_2](double t) {
                return cfg.state_dist.pdf(t)
                     * cfg.k_1 * cfg.cost_1.d_dr(r_1, t)
                     * cfg.k_2 * (-cfg.cost_2.d_dr(r_2, t))
                     / (cfg.u_1(t) * -cfg.u_2(t));
            };
            // endpoint substitution t = lo + u^2 / t = hi - v^2 with exact
            // signed gaps: the cost slopes can be singular where an endpoint
            // meets a report, and recomputing gaps from t loses them
            auto kern_at = [&cfg](double g_1, double g_2, double t) {
                return cfg.state_dist.pdf(t)
                     * cfg.k_1 * cfg.cost_1.d_dr_gap(g_1)
                     * cfg.k_2 * (-cfg.cost_2.d_dr_gap(g_2))
                     / (cfg.u_1(t) * -cfg.u_2(t));
            };
            auto tilt = [&](auto weight) {
                double mid = 0.5 * (lo + hi);
                double a = std::sqrt(mid - lo), b = std::sqrt(hi - mid);
                double d1l = r_1 - lo, d2l = r_2 - lo;
                double d1r = r_1 - hi, d2r = r_2 - hi;
                double left = integrate(
                    [&](double u) {
                        double t = lo + u * u;
                        return 2.0 * u * weight(t)
                             * kern_at(d1l - u * u, d2l - u * u, t);
                    },
                    0.0, a, cfg.num.quad_tol, cfg.num.max_quad_depth);
                double right = integrate(
                    [&](double v) {
                        double t = hi - v * v;
                        return 2.0 * v * weight(t)
                             * kern_at(d1r + v * v, d2r + v * v, t);
                    },
                    0.0, b, cfg.num.quad_tol, cfg.num.max_quad_depth);
                return left + right;
            };
            double z = tilt([](double) { return 1.0; });
            if (z > 0.0) {
                double u = tilt([&cfg](double t) { return cfg.u_dm(t); }) / z;
                p.on_path = true;
                p.cont_lo = lo;
                p.cont_hi = hi;
                p.cont_weight = 1.0;
                p.cont_density = [kern, z](double t) { return kern(t) / z; };
                p.u_dm_expected = u;
                p.action = u >= -1e-9 ? Action::Plus : Action::Minus;
                return p;
            }
        }
    }

    double w1 = 0.0, w2 = 0.0;
    if (r_1 >= cfg.theta_min && r_1 <= cfg.theta_max)
        w1 = cfg.state_dist.pdf(r_1) * pr.atom(1, r_1) * pr.density(2, r_2, r_1);
    if (r_2 >= cfg.theta_min && r_2 <= cfg.theta_max)
        w2 = cfg.state_dist.pdf(r_2) * pr.atom(2, r_2) * pr.density(1, r_1, r_2);

    auto i1 = detail::psi1_interval(pr, r_1);
    auto i2 = detail::psi2_interval(pr, r_2);
    double lo = std::max(i1.first, i2.first);
    double hi = std::min(i1.second, i2.second);
    double wc = 0.0;
    if (hi > lo)
        wc = integrate(
            [&](double t) {
                return cfg.state_dist.pdf(t) * pr.density_unchecked(1, r_1, t)
                     * pr.density_unchecked(2, r_2, t);
            },
            lo, hi, cfg.num.quad_tol, cfg.num.max_quad_depth);

    double z = w1 + w2 + wc;
    if (z > 0.0) {
        p.on_path = true;
        if (w1 > 0.0) p.masses.push_back({r_1, w1 / z});
        if (w2 > 0.0) p.masses.push_back({r_2, w2 / z});
        if (wc > 0.0) {
            p.cont_lo = lo;
            p.cont_hi = hi;
            p.cont_weight = wc / z;
            p.cont_density = [&pr, &cfg, r_1, r_2, wc](double t) {
                return cfg.state_dist.pdf(t) * pr.density_unchecked(1, r_1, t)
                     * pr.density_unchecked(2, r_2, t) / wc;
            };
        }
        detail::finalize(p, cfg);
        return p;
    }

    // off the equilibrium path: attribute the deviation to one sender and
    // invert the other's strategy
    if (std::abs(r_1) <= 1e-12 && std::abs(r_2) <= 1e-12) {
        p.double_deviation = true;
        detail::set_degenerate(p, 0.0);
        p.u_dm_expected = 0.0;
        p.action = Action::Plus;
        return p;
    }
    if (r_1 >= 0.0 && r_2 >= 0.0) {
        detail::trust_sender(p, pr, 2, r_2);
    } else if (r_1 <= 0.0 && r_2 <= 0.0) {
        detail::trust_sender(p, pr, 1, r_1);
    } else {
        bool c1 = truth_consistent(pr, 1, r_1);
        bool c2 = truth_consistent(pr, 2, r_2);
        if (c1 && !c2) {
            detail::trust_sender(p, pr, 1, r_1);
        } else if (c2 && !c1) {
            detail::trust_sender(p, pr, 2, r_2);
        } else {
            // both (or neither) consistent: even mixture of the two
            // degenerate attributions
            double t1 = std::clamp(r_1, cfg.theta_min, cfg.theta_max);
            double t2 = std::clamp(r_2, cfg.theta_min, cfg.theta_max);
            p.masses = {{t1, 0.5}, {t2, 0.5}};
        }
    }
    detail::finalize(p, cfg);
    return p;
}

/// DM action rule. For conflicting pairs inside the conflict interval this
/// reduces to the swing comparison r_1 >= s(r_2); other pairs follow the
/// sign rule or the posterior.
inline Action decide(const StrategyProfile& pr, double r_1, double r_2) {
    if (r_1 >= 0.0 && r_2 >= 0.0) return Action::Plus;
    if (r_1 <= 0.0 && r_2 <= 0.0) return Action::Minus;
    const SwingFunction& sw = pr.swing();
    if (r_2 < 0.0 && r_1 > 0.0 && sw.in_domain(r_1) && sw.in_domain(r_2))
        return r_1 >= sw.eval(r_2) ? Action::Plus : Action::Minus;
    return posterior(pr, r_1, r_2).action;
}

// ---------------------------------------------------------------------------
// Vanishing observation noise: the limit posterior is a two-component
// mixture, each component attributing the pair to a misread of one sender
// and inverting the other's strategy.
// ---------------------------------------------------------------------------

struct NoiseModel {
    std::function<double(double)> g_1;  // full-support density over reports
    std::function<double(double)> g_2;
    double rate_1 = 1.0;  // relative rates eps_1/eps, eps_2/eps
    double rate_2 = 1.0;
};

inline Posterior limit_beliefs_eps(const StrategyProfile& pr, double r_1,
                                   double r_2, const NoiseModel& noise) {
    const GameConfig& cfg = pr.config();
    if (std::abs(r_1) <= 1e-12 && std::abs(r_2) <= 1e-12) {
        Posterior p;
        p.double_deviation = true;
        detail::set_degenerate(p, 0.0);
        p.u_dm_expected = 0.0;
        p.action = Action::Plus;
        return p;
    }
    // On-path pairs arise with positive probability without any noise, so
    // the unperturbed posterior dominates the attribution components in the
    // vanishing-noise limit.
    {
        Posterior p0 = posterior(pr, r_1, r_2);
        if (p0.on_path) return p0;
    }
    // component A: sender 1's report was noise, invert sender 2
    Posterior a, b;
    detail::trust_sender(a, pr, 2, r_2);
    detail::trust_sender(b, pr, 1, r_1);
    double like_a = 0.0, like_b = 0.0;
    {
        // marginal likelihood of each attribution
        double atom2 = (r_2 >= cfg.theta_min && r_2 <= cfg.theta_max)
                           ? cfg.state_dist.pdf(r_2) * pr.atom(2, r_2) : 0.0;
        auto iv2 = detail::psi2_interval(pr, r_2);
        double cont2 = iv2.second > iv2.first
            ? integrate([&](double t) {
                  return cfg.state_dist.pdf(t) * pr.density(2, r_2, t);
              }, iv2.first, iv2.second, cfg.num.quad_tol, cfg.num.max_quad_depth)
            : 0.0;
        like_a = noise.rate_1 * noise.g_1(r_1) * (atom2 + cont2);
        double atom1 = (r_1 >= cfg.theta_min && r_1 <= cfg.theta_max)
                           ? cfg.state_dist.pdf(r_1) * pr.atom(1, r_1) : 0.0;
        auto iv1 = detail::psi1_interval(pr, r_1);
        double cont1 = iv1.second > iv1.first
            ? integrate([&](double t) {
                  return cfg.state_dist.pdf(t) * pr.density(1, r_1, t);
              }, iv1.first, iv1.second, cfg.num.quad_tol, cfg.num.max_quad_depth)
            : 0.0;
        like_b = noise.rate_2 * noise.g_2(r_2) * (atom1 + cont1);
    }
    double z = like_a + like_b;
    if (z <= 0.0)
        throw NumericError("limit beliefs: zero likelihood for both attributions");
    double wa = like_a / z, wb = like_b / z;

    Posterior p;
    for (auto& m : a.masses) p.masses.push_back({m.theta, wa * m.weight});
    for (auto& m : b.masses) p.masses.push_back({m.theta, wb * m.weight});
    double ca = wa * a.cont_weight, cb = wb * b.cont_weight;
    p.cont_weight = ca + cb;
    if (p.cont_weight > 0.0) {
        p.cont_lo = std::min(ca > 0.0 ? a.cont_lo : 1e300,
                             cb > 0.0 ? b.cont_lo : 1e300);
        p.cont_hi = std::max(ca > 0.0 ? a.cont_hi : -1e300,
                             cb > 0.0 ? b.cont_hi : -1e300);
        double tot = p.cont_weight;
        auto da = a.cont_density, db = b.cont_density;
        double alo = a.cont_lo, ahi = a.cont_hi, blo = b.cont_lo, bhi = b.cont_hi;
        p.cont_density = [=](double t) {
            double v = 0.0;
            if (ca > 0.0 && t >= alo && t <= ahi) v += ca * da(t);
            if (cb > 0.0 && t >= blo && t <= bhi) v += cb * db(t);
            return v / tot;
        };
    }
    detail::finalize(p, cfg);
    return p;
}

}  // namespace sigsolve
