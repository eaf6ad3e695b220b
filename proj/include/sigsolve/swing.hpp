// Swing-report solver: the implicit integral equation defining s(r), its
// tabulation as a strictly decreasing involution, and the truthful cutoffs.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sigsolve/reach.hpp"

namespace sigsolve {

/// Integrand of the indifference condition for a conflicting report pair:
/// f(theta) u_dm(theta) / (u_1 u_2) * dC_2/dr_2 * dC_1/dr_1.
inline double swing_integrand_at(const GameConfig& cfg, double gap_1,
                                 double gap_2, double theta) {
    double u1 = cfg.u_1(theta);
    double u2 = cfg.u_2(theta);
    return cfg.state_dist.pdf(theta) * cfg.u_dm(theta) / (u1 * u2)
         * cfg.k_2 * cfg.cost_2.d_dr_gap(gap_2)
         * cfg.k_1 * cfg.cost_1.d_dr_gap(gap_1);
}

inline double swing_integrand(const GameConfig& cfg, double r_1, double r_2,
                              double theta) {
    return swing_integrand_at(cfg, r_1 - theta, r_2 - theta, theta);
}

namespace detail {

/// Net posterior tilt of the pair (r_1, r_2): integral of swing_integrand
/// over the states that could have produced both reports. inv1 is
/// inv_upper_reach_1(r_1), precomputed by the caller.
inline double pair_tilt(const GameConfig& cfg, const ReachTable& rt, double r_1,
                        double r_2, double inv1) {
    double lo = std::max(r_2, inv1);
    double hi = std::min(r_1, rt.inv_lower_reach_2(r_2));
    if (!(hi > lo))
        throw NumericError("swing integrand: degenerate interval");
    // Substitute t = lo + u^2 / t = hi - v^2 so the cost-derivative
    // singularities at the endpoints (concave costs) integrate smoothly.
    // The gaps r_i - theta are carried through the substitution exactly;
    // recomputing them from the rounded theta would wipe out u^2 near the
    // anchors and leave pure rounding noise in the singular factors.
    double mid = 0.5 * (lo + hi);
    double a = std::sqrt(mid - lo), b = std::sqrt(hi - mid);
    double d1l = r_1 - lo, d2l = r_2 - lo;
    double left = integrate(
        [&](double u) {
            double uu = u * u;
            return 2.0 * u
                 * swing_integrand_at(cfg, d1l - uu, d2l - uu, lo + uu);
        },
        0.0, a, cfg.num.quad_tol, cfg.num.max_quad_depth);
    double d1r = r_1 - hi, d2r = r_2 - hi;
    double right = integrate(
        [&](double v) {
            double vv = v * v;
            return 2.0 * v
                 * swing_integrand_at(cfg, d1r + vv, d2r + vv, hi - vv);
        },
        0.0, b, cfg.num.quad_tol, cfg.num.max_quad_depth);
    return left + right;
}

}  // namespace detail

/// Solve the indifference equation for the swing report of r. When a bracket
/// hint is supplied (continuation along the curve), the root is searched near
/// the hint; concave costs admit spurious indifference pockets away from the
/// equilibrium branch, and the hint keeps the solver on the branch through
/// s(0) = 0.
inline double solve_swing(const GameConfig& cfg, const ReachTable& rt, double r,
                          double hint_lo = std::numeric_limits<double>::quiet_NaN(),
                          double hint_hi = std::numeric_limits<double>::quiet_NaN()) {
    const double R_hi = rt.r1_bar_0();
    const double R_lo = rt.r2_low_0();
    const double edge = 1e-12 * (R_hi - R_lo);
    if (std::abs(r) < 1e-12) return 0.0;
    if (r >= R_hi - edge) return R_lo;
    if (r <= R_lo + edge) return R_hi;
    if (r < R_lo || r > R_hi)
        throw NumericError("solve_swing: report outside the conflict interval");

    // mirror the negative case through the r_2 role
    bool mirrored = r < 0.0;
    double inset = 1e-13 * (R_hi - R_lo);
    double inv1 = mirrored ? 0.0 : rt.inv_upper_reach_1(r);
    auto g = [&](double r2) {
        return mirrored
                   ? detail::pair_tilt(cfg, rt, r2, r, rt.inv_upper_reach_1(r2))
                   : detail::pair_tilt(cfg, rt, r, r2, inv1);
    };
    double full_lo, full_hi;
    if (!mirrored) {
        full_lo = R_lo + inset;
        full_hi = -inset;
    } else {
        full_lo = inset;
        full_hi = R_hi - inset;
    }

    double lo = full_lo, hi = full_hi;
    if (std::isfinite(hint_lo) && std::isfinite(hint_hi) && hint_hi > hint_lo) {
        // Scan outward from the predicted continuation point in geometrically
        // growing windows and root-find on the sign change nearest the
        // prediction. Spurious indifference pockets sit away from the branch
        // (or, near the cusp where the conflict interval degenerates, only
        // microns beyond the branch root), so the smallest window that shows
        // a crossing isolates the branch.
        double center = std::clamp(0.5 * (hint_lo + hint_hi), full_lo, full_hi);
        double half_w = 0.5 * (hint_hi - hint_lo);
        const int ns = 16;
        for (double scale = half_w / 1024.0;; scale *= 4.0) {
            double a = std::clamp(center - scale, full_lo, full_hi);
            double b = std::clamp(center + scale, full_lo, full_hi);
            bool covers_all = a <= full_lo && b >= full_hi;
            if (b > a) {
                double best_lo = 0.0, best_hi = 0.0, best_d = -1.0;
                double px = a, pv = g(a);
                if (pv == 0.0) return a;
                for (int i = 1; i <= ns; ++i) {
                    double x = a + (b - a) * i / double(ns);
                    double v = g(x);
                    if (v == 0.0) return x;
                    if ((v > 0.0) != (pv > 0.0)) {
                        double d = std::abs(0.5 * (px + x) - center);
                        if (best_d < 0.0 || d < best_d) {
                            best_d = d;
                            best_lo = px;
                            best_hi = x;
                        }
                    }
                    px = x;
                    pv = v;
                }
                if (best_d >= 0.0)
                    return find_root(g, best_lo, best_hi,
                                     std::min(cfg.num.root_tol,
                                              cfg.num.swing_node_tol));
            }
            if (covers_all)
                throw NumericError("solve_swing: no sign change near the hint");
        }
    }

    double glo = g(lo);
    double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo > 0.0) == (ghi > 0.0))
        throw NumericError("solve_swing: no sign change in the bracket");
    double root = find_root(g, lo, hi,
                            std::min(cfg.num.root_tol, cfg.num.swing_node_tol));

    // uniqueness diagnostic on the searched bracket
    int changes = 0;
    double prev = glo;
    const int n = cfg.num.sign_scan_n;
    for (int i = 1; i <= n; ++i) {
        double x = lo + (hi - lo) * i / double(n);
        double v = (i == n) ? ghi : g(x);
        if (v != 0.0 && prev != 0.0 && (v > 0.0) != (prev > 0.0)) ++changes;
        if (v != 0.0) prev = v;
    }
    if (changes > 1)
        throw NumericError("solve_swing: multiple sign changes; assumptions violated");
    return root;
}

class SwingFunction {
public:
    static SwingFunction build(const GameConfig& cfg, const ReachTable& rt) {
        SwingFunction sf = build_nodes(cfg, rt, {});
        // The curve has derivative kinks where the binding endpoint of the
        // indifference interval switches: at the truthful cutoffs and their
        // swing images. An interpolant with a kink between nodes is only
        // first-order accurate there, so locate the kinks with direct solves
        // and rebuild with nodes on them.
        double span = sf.domain_hi_ - sf.domain_lo_;
        double eps = 1e-9 * span;
        auto direct = [&](double t) {
            double h = sf.table_.eval(std::clamp(t, sf.domain_lo_, sf.domain_hi_));
            double w = 2e-3 * span;
            return solve_swing(cfg, rt, t, h - w, h + w);
        };
        auto refine = [&](double guess, auto f, double flo, double fhi) {
            double d = 1e-3 * span;
            for (int i = 0; i < 12; ++i, d *= 2.0) {
                double a = std::max(guess - d, flo);
                double b = std::min(guess + d, fhi);
                if (b <= a) break;
                double fa = f(a), fb = f(b);
                if ((fa > 0.0) != (fb > 0.0))
                    return find_root(f, a, b, cfg.num.root_tol);
            }
            return guess;
        };
        try {
            double g2 = find_root(
                [&](double t) { return sf.table_.eval(t) - rt.lower_reach_2(t); },
                eps, sf.domain_hi_, cfg.num.root_tol);
            double g1 = find_root(
                [&](double t) { return sf.table_.eval(t) - rt.upper_reach_1(t); },
                sf.domain_lo_, -eps, cfg.num.root_tol);
            double t2 = refine(
                g2, [&](double t) { return direct(t) - rt.lower_reach_2(t); },
                1e-6 * span, sf.domain_hi_ - 1e-6 * span);
            double t1 = refine(
                g1, [&](double t) { return direct(t) - rt.upper_reach_1(t); },
                sf.domain_lo_ + 1e-6 * span, -1e-6 * span);
            // skip the rebuild when the first pass already resolves the
            // curve around the switch points (symmetric configs, where the
            // curve is linear there); extra nodes would only add slope noise
            double err = 0.0;
            for (double p : {t1, t2})
                for (double t : {p - 2e-3 * span, p, p + 2e-3 * span})
                    if (t > sf.domain_lo_ + eps && t < sf.domain_hi_ - eps
                        && std::abs(t) > eps)
                        err = std::max(err,
                                       std::abs(sf.table_.eval(t) - direct(t)));
            if (err <= 1e-7 * std::max(1.0, span)) return sf;
            // the curvature spikes in a narrow band around each switch point,
            // so cluster nodes toward it with cubically graded offsets; the
            // outermost spacing matches the cosine mesh so the interpolant's
            // node derivatives stay second order across the transition, the
            // density scales with the main grid to keep the refinement order,
            // and the spacing floor keeps root noise out of the secant slopes
            double w = span / 24.0;
            int q = std::max(8, (cfg.num.swing_grid_n - 1) / 8);
            double n1 = double(cfg.num.swing_grid_n - 1);
            double dmin = 2.0 * span / (n1 * n1);
            std::vector<double> nodes;
            for (double p : {t1, t2, rt.upper_reach_1(t1), rt.lower_reach_2(t2)}) {
                nodes.push_back(p);
                for (int i = 1; i <= q; ++i) {
                    double u = double(i) / q;
                    double off = std::max(w * u * u * u, dmin * i);
                    nodes.push_back(p - off);
                    nodes.push_back(p + off);
                }
            }
            return build_nodes(cfg, rt, nodes);
        } catch (const NumericError&) {
            return sf;
        }
    }

private:
    static SwingFunction build_nodes(const GameConfig& cfg, const ReachTable& rt,
                                     std::vector<double> extras) {
        SwingFunction sf;
        sf.domain_lo_ = rt.r2_low_0();
        sf.domain_hi_ = rt.r1_bar_0();
        int m = std::max(8, (cfg.num.swing_grid_n - 1) / 2);
        std::vector<double> rs;
        rs.reserve(2 * m + 1 + extras.size());
        // per-half cosine clustering: dense near 0 and near the endpoints
        for (int i = m; i >= 1; --i)
            rs.push_back(sf.domain_lo_ * 0.5 * (1.0 - std::cos(M_PI * i / m)));
        rs.push_back(0.0);
        for (int i = 1; i <= m; ++i)
            rs.push_back(sf.domain_hi_ * 0.5 * (1.0 - std::cos(M_PI * i / m)));
        double span = sf.domain_hi_ - sf.domain_lo_;
        for (double e : extras) {
            if (!(e > rs.front() + 1e-6 * span && e < rs.back() - 1e-6 * span)
                || std::abs(e) < 1e-6 * span)
                continue;
            auto it = std::lower_bound(rs.begin(), rs.end(), e);
            // snap a nearby interior node onto the kink instead of creating a
            // near-duplicate pair
            auto near = [&](auto p) {
                return p != rs.begin() && p != rs.end() - 1 && *p != 0.0
                       && std::abs(*p - e) < 1e-5 * span;
            };
            if (it != rs.end() && near(it)) *it = e;
            else if (it != rs.begin() && near(it - 1)) *(it - 1) = e;
            else rs.insert(it, e);
        }
        std::vector<double> ss(rs.size());
        // continuation outward from s(0) = 0, each node bracketed near the
        // prediction from the previous two roots
        size_t zero_idx = static_cast<size_t>(
            std::lower_bound(rs.begin(), rs.end(), 0.0) - rs.begin());
        ss[zero_idx] = 0.0;
        auto solve_half = [&](int step) {
            double prev_r = 0.0, prev_s = 0.0, slope = -1.0;
            for (size_t i = zero_idx + step; i < rs.size();
                 i = static_cast<size_t>(static_cast<long>(i) + step)) {
                double r = rs[i];
                double predict = prev_s + slope * (r - prev_r);
                double w = std::max(2.0 * std::abs(r - prev_r),
                                    1e-7 * (sf.domain_hi_ - sf.domain_lo_));
                try {
                    ss[i] = solve_swing(cfg, rt, r, predict - w, predict + w);
                } catch (const std::exception& e) {
                    throw NumericError("swing node r = " + std::to_string(r)
                                       + ": " + e.what());
                }
                if (std::abs(r - prev_r) > 0.0)
                    slope = (ss[i] - prev_s) / (r - prev_r);
                prev_r = r;
                prev_s = ss[i];
                if (step < 0 && i == 0) break;
            }
        };
        solve_half(+1);
        solve_half(-1);
        sf.table_ = MonotoneCubic(std::move(rs), std::move(ss));
        sf.check_structure();
        return sf;
    }

public:
    /// Assemble directly from a table; `check` skips the structure
    /// assertions (used for deliberately corrupted tables in tests).
    static SwingFunction from_table(std::vector<double> rs, std::vector<double> ss,
                                    bool check = true) {
        SwingFunction sf;
        sf.domain_lo_ = rs.front();
        sf.domain_hi_ = rs.back();
        sf.table_ = MonotoneCubic(std::move(rs), std::move(ss));
        if (check) sf.check_structure();
        return sf;
    }

    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }
    bool in_domain(double r) const {
        double tol = 1e-9 * (domain_hi_ - domain_lo_);
        return r >= domain_lo_ - tol && r <= domain_hi_ + tol;
    }

    double operator()(double r) const { return eval(r); }

    double eval(double r) const {
        if (!in_domain(r))
            throw NumericError("swing report undefined outside the conflict interval");
        return table_.eval(std::clamp(r, domain_lo_, domain_hi_));
    }

    /// +inf / -inf sentinels outside the domain, for support min/max algebra.
    double eval_ext(double r) const {
        if (r < domain_lo_) return std::numeric_limits<double>::infinity();
        if (r > domain_hi_) return -std::numeric_limits<double>::infinity();
        return table_.eval(r);
    }

    double derivative(double r) const {
        if (!in_domain(r))
            throw NumericError("swing report undefined outside the conflict interval");
        return table_.derivative(std::clamp(r, domain_lo_, domain_hi_));
    }

    /// s is an involution, so it is its own inverse.
    double inverse(double s_val) const { return eval(s_val); }

    const MonotoneCubic& table() const { return table_; }

private:
    void check_structure() const {
        const auto& xs = table_.xs();
        const auto& ys = table_.ys();
        for (size_t i = 1; i < ys.size(); ++i)
            if (!(ys[i] < ys[i - 1]))
                throw NumericError("swing table is not strictly decreasing");
        if (std::abs(eval(0.0)) > 1e-9)
            throw NumericError("swing table violates s(0) = 0");
        double span = domain_hi_ - domain_lo_;
        if (std::abs(eval(domain_hi_) - domain_lo_) > 1e-4 * std::max(1.0, span)
            || std::abs(eval(domain_lo_) - domain_hi_) > 1e-4 * std::max(1.0, span))
            throw NumericError("swing table violates the endpoint identity");
        for (size_t i = 0; i < xs.size(); ++i) {
            double back = eval(std::clamp(ys[i], domain_lo_, domain_hi_));
            if (std::abs(back - xs[i]) > 1e-3)
                throw NumericError("swing table violates the involution property");
        }
    }

    double domain_lo_ = 0.0, domain_hi_ = 0.0;
    MonotoneCubic table_;
};

struct TruthfulCutoffs {
    double theta_1 = 0.0;
    double theta_2 = 0.0;
};

inline TruthfulCutoffs compute_cutoffs(const ReachTable& rt,
                                       const SwingFunction& swing) {
    const GameConfig& cfg = rt.config();
    double eps = 1e-9 * (swing.domain_hi() - swing.domain_lo());
    TruthfulCutoffs c;
    try {
        c.theta_2 = find_root(
            [&](double t) { return swing.eval(t) - rt.lower_reach_2(t); },
            eps, swing.domain_hi(), cfg.num.root_tol);
        c.theta_1 = find_root(
            [&](double t) { return swing.eval(t) - rt.upper_reach_1(t); },
            swing.domain_lo(), -eps, cfg.num.root_tol);
    } catch (const NumericError&) {
        throw NumericError("cutoff bracket failure");
    }
    return c;
}

}  // namespace sigsolve
