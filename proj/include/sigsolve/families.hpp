// Parameter families for the game's primitives: state distributions,
// player utilities, and misreporting cost functions.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sigsolve/numerics.hpp"

namespace sigsolve {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic 64-bit stream; doubles are derived from the raw bits so the
// sequence does not depend on the standard library's distribution details.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
    double normal() {
        // Box-Muller; cache the second value
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    /// Independent substream for simulation shard `i`.
    RandomStream substream(std::uint64_t i) const {
        return RandomStream(seed_mix_ ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
    }

    static RandomStream seeded(std::uint64_t seed) {
        RandomStream s(seed);
        s.seed_mix_ = seed;
        return s;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_mix_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// ---------------------------------------------------------------------------
// State distributions
// ---------------------------------------------------------------------------

struct UniformDist {
    double lo = -1.0, hi = 1.0;
    double pdf(double x) const {
        return (x >= lo && x <= hi) ? 1.0 / (hi - lo) : 0.0;
    }
    double cdf(double x) const {
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        return (x - lo) / (hi - lo);
    }
    double sample(RandomStream& rng) const { return rng.uniform(lo, hi); }
};

struct TruncNormalDist {
    double mu = 0.0, sigma = 1.0;
    double lo = -1.0, hi = 1.0;

    double mass() const { return phi_cdf(hi) - phi_cdf(lo); }
    double pdf(double x) const {
        if (x < lo || x > hi) return 0.0;
        double z = (x - mu) / sigma;
        return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI)) / mass();
    }
    double cdf(double x) const {
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        return (phi_cdf(x) - phi_cdf(lo)) / mass();
    }
    double sample(RandomStream& rng) const {
        // rejection against the untruncated normal; fine for the supported
        // parameter ranges (mass bounded away from zero by validation)
        for (int i = 0; i < 100000; ++i) {
            double x = mu + sigma * rng.normal();
            if (x >= lo && x <= hi) return x;
        }
        throw NumericError("TruncNormalDist::sample: rejection failed");
    }

private:
    double phi_cdf(double x) const {
        return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
    }
};

class StateDist {
public:
    StateDist() : impl_(UniformDist{}) {}
    StateDist(UniformDist d) : impl_(d) {}
    StateDist(TruncNormalDist d) : impl_(d) {}

    double pdf(double x) const {
        return std::visit([&](const auto& d) { return d.pdf(x); }, impl_);
    }
    double cdf(double x) const {
        return std::visit([&](const auto& d) { return d.cdf(x); }, impl_);
    }
    double sample(RandomStream& rng) const {
        return std::visit([&](const auto& d) { return d.sample(rng); }, impl_);
    }

private:
    std::variant<UniformDist, TruncNormalDist> impl_;
};

// ---------------------------------------------------------------------------
// Utilities: weakly increasing functions of the state
// ---------------------------------------------------------------------------

struct AffineUtility {
    double slope = 1.0, intercept = 0.0;
    double value(double theta) const { return slope * theta + intercept; }
};

/// Monotone table with piecewise-cubic interpolation.
struct TabulatedUtility {
    MonotoneCubic curve;
    double value(double theta) const { return curve.eval(theta); }
};

class Utility {
public:
    Utility() : impl_(AffineUtility{}) {}
    Utility(AffineUtility u) : impl_(u) {}
    Utility(TabulatedUtility u) : impl_(std::move(u)) {}

    double operator()(double theta) const {
        return std::visit([&](const auto& u) { return u.value(theta); }, impl_);
    }

    /// Root of u on [lo, hi]; the player's indifference threshold.
    double threshold(double lo, double hi) const {
        double vlo = (*this)(lo);
        double vhi = (*this)(hi);
        if (vlo > 0.0 || vhi < 0.0)
            throw ConfigError("utility has no interior indifference threshold");
        return find_root([&](double t) { return (*this)(t); }, lo, hi, 1e-13);
    }

private:
    std::variant<AffineUtility, TabulatedUtility> impl_;
};

// ---------------------------------------------------------------------------
// Misreporting costs: C(theta, theta) = 0, increasing in |r - theta|.
// Power-loss family scale * |r - theta|^exponent.
// ---------------------------------------------------------------------------

struct PowerCost {
    double exponent = 2.0;
    double scale = 1.0;

    double value(double r, double theta) const {
        return scale * std::pow(std::abs(r - theta), exponent);
    }
    /// One-sided dC/dr matching the sign of r - theta; 0 at the truth for
    /// exponent > 1, +/-scale*exponent for exponent == 1, unbounded below 1.
    double d_dr(double r, double theta) const { return d_dr_gap(r - theta); }

    /// dC/dr from the signed gap r - theta. Quadrature callers that know the
    /// gap exactly use this form: recomputing the gap from a rounded theta
    /// loses all precision near the truth point and turns the integrand into
    /// noise for exponents below 1.
    double d_dr_gap(double gap) const {
        if (gap == 0.0) return 0.0;  // callers stay off the truth point
        double mag = scale * exponent * std::pow(std::abs(gap), exponent - 1.0);
        return gap > 0.0 ? mag : -mag;
    }
    bool unbounded() const { return true; }
};

class CostFn {
public:
    CostFn() : impl_(PowerCost{}) {}
    CostFn(PowerCost c) : impl_(c) {}

    double operator()(double r, double theta) const {
        return std::visit([&](const auto& c) { return c.value(r, theta); }, impl_);
    }
    double d_dr(double r, double theta) const {
        return std::visit([&](const auto& c) { return c.d_dr(r, theta); }, impl_);
    }
    double d_dr_gap(double gap) const {
        return std::visit([&](const auto& c) { return c.d_dr_gap(gap); }, impl_);
    }

private:
    std::variant<PowerCost> impl_;
};

}  // namespace sigsolve
