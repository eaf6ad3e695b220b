// Shared numeric kernels: bracketed root finding, adaptive Simpson
// quadrature, monotone piecewise-cubic interpolation, and the settings
// record that centralizes every tolerance knob.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sigsolve {

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Single knob record for the accuracy/runtime tradeoff. `scaled(c)`
/// multiplies the tolerances, used by --tol-scale and grid-refinement tests.
struct NumericsSettings {
    double root_tol = 1e-10;       // absolute, on the abscissa
    double quad_tol = 1e-10;       // absolute, on the integral
    double swing_node_tol = 1e-12; // tighter: table slopes divide node error
    int reach_grid_n = 512;
    int swing_grid_n = 257;
    int sign_scan_n = 64;
    double inverse_cdf_tol = 1e-9;
    int max_quad_depth = 60;
    int threads = 0;               // 0 = hardware concurrency

    NumericsSettings scaled(double c) const {
        NumericsSettings s = *this;
        s.root_tol *= c;
        s.quad_tol *= c;
        s.swing_node_tol *= c;
        return s;
    }
    NumericsSettings refined(int grid_factor) const {
        NumericsSettings s = *this;
        s.reach_grid_n *= grid_factor;
        s.swing_grid_n = (s.swing_grid_n - 1) * grid_factor + 1;
        return s;
    }
};

// ---------------------------------------------------------------------------
// Root finding: bisection with secant acceleration. Requires a sign change
// on [lo, hi]; derivative-free.
// ---------------------------------------------------------------------------

template <class F>
double find_root(F&& f, double lo, double hi, double x_tol, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericError("find_root: no sign change in bracket");
    for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
        double mid = 0.5 * (lo + hi);
        // Secant proposal, accepted only if it stays well inside the bracket.
        double denom = fhi - flo;
        if (denom != 0.0) {
            double sec = lo - flo * (hi - lo) / denom;
            double margin = 0.1 * (hi - lo);
            if (sec > lo + margin && sec < hi - margin) mid = sec;
        }
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

/// Expand [start, start+step] upward until f changes sign. f(start) is the
/// reference sign. Throws if no sign change within `max_expand` doublings.
template <class F>
std::pair<double, double> expand_bracket_up(F&& f, double start, double step,
                                            int max_expand = 80) {
    double f0 = f(start);
    double a = start;
    double b = start + step;
    for (int i = 0; i < max_expand; ++i) {
        double fb = f(b);
        if (fb == 0.0 || (fb > 0.0) != (f0 > 0.0)) return {a, b};
        a = b;
        step *= 2.0;
        b = a + step;
    }
    throw NumericError("expand_bracket_up: no sign change found");
}

template <class F>
std::pair<double, double> expand_bracket_down(F&& f, double start, double step,
                                              int max_expand = 80) {
    double f0 = f(start);
    double a = start;
    double b = start - step;
    for (int i = 0; i < max_expand; ++i) {
        double fb = f(b);
        if (fb == 0.0 || (fb > 0.0) != (f0 > 0.0)) return {b, a};
        a = b;
        step *= 2.0;
        b = a - step;
    }
    throw NumericError("expand_bracket_down: no sign change found");
}

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature with depth cap. Integrands with an integrable
// endpoint singularity (concave cost families) keep refining toward the
// endpoint until the depth cap; non-finite samples are nudged inward.
// ---------------------------------------------------------------------------

namespace detail {

inline double finite_eval(const std::function<double(double)>& f, double x,
                          double a, double b) {
    double v = f(x);
    if (std::isfinite(v)) return v;
    double nudge = 1e-12 * (b - a);
    if (x <= a + nudge) return f(a + nudge);
    if (x >= b - nudge) return f(b - nudge);
    return 0.0;
}

inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb, double whole,
                          double tol, int depth, int max_depth, double ga,
                          double gb) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = finite_eval(f, lm, ga, gb);
    double frm = finite_eval(f, rm, ga, gb);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double err = (left + right - whole) / 15.0;
    if (depth >= max_depth || std::abs(err) <= tol)
        return left + right + err;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1,
                       max_depth, ga, gb)
         + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1,
                       max_depth, ga, gb);
}

}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 60) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = detail::finite_eval(f, a, a, b);
    double fm = detail::finite_eval(f, m, a, b);
    double fb = detail::finite_eval(f, b, a, b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0, max_depth, a, b);
}

// ---------------------------------------------------------------------------
// Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson limiter).
// Works for strictly increasing or strictly decreasing data; preserves the
// monotone trend of the table.
// ---------------------------------------------------------------------------

class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
        : x_(std::move(xs)), y_(std::move(ys)) {
        const size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw NumericError("MonotoneCubic: need >= 2 matching points");
        for (size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw NumericError("MonotoneCubic: abscissae not increasing");
        slope_.resize(n);
        std::vector<double> d(n - 1);
        for (size_t i = 0; i + 1 < n; ++i)
            d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        slope_[0] = d[0];
        slope_[n - 1] = d[n - 2];
        for (size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0)
                slope_[i] = 0.0;
            else {
                // weighted harmonic mean keeps the interpolant monotone
                double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
                double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
                slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // Fritsch-Carlson endpoint limiting
        for (size_t i = 0; i + 1 < n; ++i) {
            if (d[i] == 0.0) {
                slope_[i] = slope_[i + 1] = 0.0;
            } else {
                double a = slope_[i] / d[i];
                double b = slope_[i + 1] / d[i];
                double s = a * a + b * b;
                if (s > 9.0) {
                    double t = 3.0 / std::sqrt(s);
                    slope_[i] = t * a * d[i];
                    slope_[i + 1] = t * b * d[i];
                }
            }
        }
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

    double operator()(double x) const { return eval(x); }

    double eval(double x) const {
        size_t i = segment(x);
        double h = x_[i + 1] - x_[i];
        double t = (x - x_[i]) / h;
        double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        double h10 = t * (1 - t) * (1 - t);
        double h01 = t * t * (3 - 2 * t);
        double h11 = t * t * (t - 1);
        return h00 * y_[i] + h * h10 * slope_[i] + h01 * y_[i + 1]
             + h * h11 * slope_[i + 1];
    }

    double derivative(double x) const {
        size_t i = segment(x);
        double h = x_[i + 1] - x_[i];
        double t = (x - x_[i]) / h;
        double d00 = (6 * t * t - 6 * t) / h;
        double d10 = 3 * t * t - 4 * t + 1;
        double d01 = (6 * t - 6 * t * t) / h;
        double d11 = 3 * t * t - 2 * t;
        return d00 * y_[i] + d10 * slope_[i] + d01 * y_[i + 1] + d11 * slope_[i + 1];
    }

private:
    size_t segment(double x) const {
        if (x <= x_.front()) return 0;
        if (x >= x_.back()) return x_.size() - 2;
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return static_cast<size_t>(it - x_.begin()) - 1;
    }

    std::vector<double> x_, y_, slope_;
};

// ---------------------------------------------------------------------------
// Deterministic parallel map over an index range. Results are written by
// index, so the aggregation order never depends on scheduling.
// ---------------------------------------------------------------------------

template <class F>
void parallel_for(int n, int threads, F&& body) {
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int i = t; i < n; i += threads) body(i);
            } catch (...) {
                errors[static_cast<size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// FNV-1a over bytes; used for config/manifest provenance hashes.
inline std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace sigsolve
