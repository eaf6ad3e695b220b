// Equilibrium mixed strategies: truth atoms, continuous misreporting
// densities, support intervals, closed-form CDFs, and samplers.
#pragma once

#include <algorithm>
#include <cmath>

#include "sigsolve/swing.hpp"

namespace sigsolve {

struct SupportInterval {
    double lo = 0.0, hi = 0.0;
    // Swing image of each endpoint. Where the endpoint is itself a swing
    // image of a reach, the pre-image is stored directly: re-interpolating
    // s(s(x)) would inject the table's involution error into the mass
    // identities at first order.
    double img_lo = 0.0, img_hi = 0.0;
    bool has_continuous = false;  // false => pure truth-telling {theta}
};

/// Deliberate distortions of the equilibrium profile, used by the verifier's
/// mutation tests. The continuous part is renormalized so the distribution
/// stays valid; only its shape and mass split are wrong.
struct Perturbation {
    double atom_scale_1 = 1.0, atom_scale_2 = 1.0;
    double support_stretch_1 = 1.0, support_stretch_2 = 1.0;
    bool active() const {
        return atom_scale_1 != 1.0 || atom_scale_2 != 1.0
            || support_stretch_1 != 1.0 || support_stretch_2 != 1.0;
    }
};

class StrategyProfile {
public:
    StrategyProfile(const GameConfig& cfg, const ReachTable& rt,
                    const SwingFunction& swing, TruthfulCutoffs cutoffs)
        : cfg_(&cfg), rt_(&rt), swing_(&swing), cut_(cutoffs) {}

    const GameConfig& config() const { return *cfg_; }
    const ReachTable& reaches() const { return *rt_; }
    const SwingFunction& swing() const { return *swing_; }
    const TruthfulCutoffs& cutoffs() const { return cut_; }

    void set_perturbation(const Perturbation& p) { pert_ = p; }
    const Perturbation& perturbation() const { return pert_; }

    bool mixes(double theta) const {
        return theta > cut_.theta_1 && theta < cut_.theta_2;
    }

    SupportInterval support(int sender, double theta) const {
        SupportInterval si;
        si.lo = si.hi = theta;
        si.img_lo = si.img_hi = theta;
        if (!mixes(theta)) return si;
        const SwingFunction& s = *swing_;
        if (sender == 1) {
            double st = s.eval_ext(theta);
            if (st >= theta) {
                si.lo = st;
                si.img_lo = theta;
            } else {
                si.lo = theta;
                si.img_lo = st;
            }
            double ru1 = rt_->upper_reach_1(theta);
            double s_rl2 = s.eval_ext(rt_->lower_reach_2(theta));
            if (s_rl2 <= ru1) {
                si.hi = s_rl2;
                si.img_hi = rt_->lower_reach_2(theta);
            } else {
                si.hi = ru1;
                si.img_hi = s.eval(clamp_dom(ru1));
            }
        } else {
            double rl2 = rt_->lower_reach_2(theta);
            double s_ru1 = s.eval_ext(rt_->upper_reach_1(theta));
            if (s_ru1 >= rl2) {
                si.lo = s_ru1;
                si.img_lo = rt_->upper_reach_1(theta);
            } else {
                si.lo = rl2;
                si.img_lo = s.eval(clamp_dom(rl2));
            }
            double st = s.eval_ext(theta);
            if (st <= theta) {
                si.hi = st;
                si.img_hi = theta;
            } else {
                si.hi = theta;
                si.img_hi = st;
            }
        }
        double stretch = sender == 1 ? pert_.support_stretch_1
                                     : pert_.support_stretch_2;
        if (stretch != 1.0) {
            si.hi = si.lo + stretch * (si.hi - si.lo);
            si.img_hi = s.eval(clamp_dom(si.hi));
        }
        si.has_continuous = si.hi > si.lo + 1e-14;
        return si;
    }

    /// Truth-atom mass alpha_j(theta). Shares the endpoint swing images with
    /// the continuous mass so the two halves sum to one exactly.
    double atom(int sender, double theta) const {
        if (!mixes(theta)) return 1.0;
        SupportInterval si = support(sender, theta);
        double a;
        if (sender == 1) {
            double coef = cfg_->k_2 / (-cfg_->u_2(theta));
            a = theta >= 0.0
                    ? coef * cfg_->cost_2(si.img_lo, theta)
                    : 1.0 - coef * cfg_->cost_2(si.img_hi, theta);
        } else {
            double coef = cfg_->k_1 / cfg_->u_1(theta);
            a = theta <= 0.0
                    ? coef * cfg_->cost_1(si.img_hi, theta)
                    : 1.0 - coef * cfg_->cost_1(si.img_lo, theta);
        }
        a *= sender == 1 ? pert_.atom_scale_1 : pert_.atom_scale_2;
        return std::clamp(a, 0.0, 1.0);
    }

    /// Continuous misreporting density psi_j(r, theta); 0 off the support.
    double density(int sender, double r, double theta) const {
        SupportInterval si = support(sender, theta);
        if (!si.has_continuous || r < si.lo || r > si.hi) return 0.0;
        return density_unchecked(sender, r, theta) * norm_factor(sender, theta, si);
    }

    /// Right-continuous CDF of sender j's report distribution at state theta.
    double cdf(int sender, double r, double theta) const {
        double a = atom(sender, theta);
        double p = r >= theta ? a : 0.0;
        SupportInterval si = support(sender, theta);
        if (si.has_continuous && r > si.lo)
            p += cont_mass(sender, theta, si, si.lo, std::min(r, si.hi));
        return std::min(p, 1.0);
    }

    /// P(report >= x); the atom at x counts fully (ties go to x itself).
    double prob_geq(int sender, double x, double theta) const {
        double p = x <= theta ? atom(sender, theta) : 0.0;
        SupportInterval si = support(sender, theta);
        if (si.has_continuous && x < si.hi)
            p += cont_mass(sender, theta, si, std::max(x, si.lo), si.hi);
        return std::min(p, 1.0);
    }

    double sample_report(int sender, double theta, RandomStream& rng) const {
        double a = atom(sender, theta);
        double u = rng.uniform01();
        if (u < a) return theta;
        SupportInterval si = support(sender, theta);
        if (!si.has_continuous) return theta;
        // inverse-CDF on the continuous part
        double target = (u - a) / (1.0 - a);
        double total = cont_mass(sender, theta, si, si.lo, si.hi);
        auto cm = [&](double r) {
            return cont_mass(sender, theta, si, si.lo, r) / total - target;
        };
        double lo = si.lo, hi = si.hi;
        while (hi - lo > cfg_->num.inverse_cdf_tol) {
            double mid = 0.5 * (lo + hi);
            if (cm(mid) < 0.0) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    double density_unchecked(int sender, double r, double theta) const {
        double sr = swing_->eval(clamp_dom(r));
        double sp = swing_->derivative(clamp_dom(r));
        if (sender == 1)
            return cfg_->k_2 / (-cfg_->u_2(theta)) * cfg_->cost_2.d_dr(sr, theta) * sp;
        return cfg_->k_1 / (-cfg_->u_1(theta)) * cfg_->cost_1.d_dr(sr, theta) * sp;
    }

    double cont_mass(int sender, double theta, const SupportInterval& si,
                     double a, double b) const {
        return raw_cont_mass(sender, theta, si, a, b)
             * norm_factor(sender, theta, si);
    }

    /// Closed-form integral of the density over [a, b] within the support:
    /// the density is an exact derivative of the opponent-cost composition.
    double raw_cont_mass(int sender, double theta, const SupportInterval& si,
                         double a, double b) const {
        if (!(b > a)) return 0.0;
        a = std::max(a, si.lo);
        b = std::min(b, si.hi);
        if (!(b > a)) return 0.0;
        double img_a = a <= si.lo ? si.img_lo : swing_->eval(clamp_dom(a));
        double img_b = b >= si.hi ? si.img_hi : swing_->eval(clamp_dom(b));
        if (sender == 1)
            return cfg_->k_2 / (-cfg_->u_2(theta))
                 * (cfg_->cost_2(img_b, theta) - cfg_->cost_2(img_a, theta));
        return cfg_->k_1 / cfg_->u_1(theta)
             * (cfg_->cost_1(img_a, theta) - cfg_->cost_1(img_b, theta));
    }

private:
    double clamp_dom(double r) const {
        return std::clamp(r, swing_->domain_lo(), swing_->domain_hi());
    }

    /// Rescale factor keeping atom + continuous mass = 1 under perturbation.
    double norm_factor(int sender, double theta, const SupportInterval& si) const {
        if (!pert_.active()) return 1.0;
        double raw = raw_cont_mass(sender, theta, si, si.lo, si.hi);
        if (!(raw > 0.0)) return 0.0;
        return (1.0 - atom(sender, theta)) / raw;
    }

    const GameConfig* cfg_;
    const ReachTable* rt_;
    const SwingFunction* swing_;
    TruthfulCutoffs cut_;
    Perturbation pert_;
};

}  // namespace sigsolve
