// ReachTable: tabulated reach functions with an exact root-finding path.
// The tables seed brackets so repeated evaluation stays cheap; every result
// is polished on the defining equation, so accuracy matches the exact path.
#pragma once

#include <cmath>
#include <vector>

#include "sigsolve/config.hpp"

namespace sigsolve {

class ReachTable {
public:
    static ReachTable build(const GameConfig& cfg) {
        ReachTable rt;
        rt.cfg_ = cfg;
        const int n = cfg.num.reach_grid_n;
        std::vector<double> ts(n), r1(n), r2(n);
        for (int i = 0; i < n; ++i)
            ts[i] = cfg.theta_min
                  + (cfg.theta_max - cfg.theta_min) * i / double(n - 1);
        parallel_for(n, cfg.num.threads, [&](int i) {
            r1[i] = sigsolve::upper_reach_1(cfg, ts[i]);
            r2[i] = sigsolve::lower_reach_2(cfg, ts[i]);
        });
        rt.curve_1_ = MonotoneCubic(ts, r1);
        rt.curve_2_ = MonotoneCubic(std::move(ts), r2);
        rt.r1_bar_0_ = sigsolve::upper_reach_1(cfg, 0.0);
        rt.r2_low_0_ = sigsolve::lower_reach_2(cfg, 0.0);
        return rt;
    }

    const GameConfig& config() const { return cfg_; }

    double upper_reach_1(double theta) const {
        return polish_reach(theta, cfg_.gain_1(theta), curve_1_, /*upper=*/true);
    }
    double lower_reach_2(double theta) const {
        return polish_reach(theta, cfg_.gain_2(theta), curve_2_, /*upper=*/false);
    }
    double inv_upper_reach_1(double r) const { return sigsolve::inv_upper_reach_1(cfg_, r); }
    double inv_lower_reach_2(double r) const { return sigsolve::inv_lower_reach_2(cfg_, r); }

    /// Conflict interval endpoints: the most extreme reports a type-0 sender
    /// could ever justify.
    double r1_bar_0() const { return r1_bar_0_; }
    double r2_low_0() const { return r2_low_0_; }

    const MonotoneCubic& curve_1() const { return curve_1_; }
    const MonotoneCubic& curve_2() const { return curve_2_; }

private:
    double polish_reach(double theta, double gain, const MonotoneCubic& curve,
                        bool upper) const {
        if (gain <= 0.0) return theta;
        const CostFn& c = upper ? cfg_.cost_1 : cfg_.cost_2;
        double k = upper ? cfg_.k_1 : cfg_.k_2;
        auto h = [&](double r) { return k * c(r, theta) - gain; };
        double seed = curve.eval(theta);
        double d = 2.0 * (curve.x_max() - curve.x_min())
                 / double(curve.xs().size() - 1);
        double lo = seed - d, hi = seed + d;
        if (upper) lo = std::max(lo, theta);
        else hi = std::min(hi, theta);
        if (lo < hi) {
            double flo = h(lo), fhi = h(hi);
            if (flo == 0.0) return lo;
            if (fhi == 0.0) return hi;
            if ((flo > 0.0) != (fhi > 0.0))
                return find_root(h, lo, hi, cfg_.num.root_tol);
        }
        return upper ? sigsolve::upper_reach_1(cfg_, theta)
                     : sigsolve::lower_reach_2(cfg_, theta);
    }

    GameConfig cfg_;
    MonotoneCubic curve_1_, curve_2_;
    double r1_bar_0_ = 0.0, r2_low_0_ = 0.0;
};

}  // namespace sigsolve
