// Monte Carlo play of the equilibrium: sampled states and reports, the DM
// rule applied, revelation/matching statistics binned over the state.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sigsolve/belief.hpp"

namespace sigsolve {

/// Whether the report pair pins the state down exactly: the posterior has a
/// single discrete mass and no continuous component.
inline bool reveals_state(const StrategyProfile& pr, double r_1, double r_2) {
    const GameConfig& cfg = pr.config();
    if (std::abs(r_1 - r_2) <= 1e-12)
        return pr.atom(1, r_1) > 0.0 && pr.atom(2, r_1) > 0.0;
    bool w1 = cfg.state_dist.pdf(r_1) * pr.atom(1, r_1) * pr.density(2, r_2, r_1) > 0.0;
    bool w2 = cfg.state_dist.pdf(r_2) * pr.atom(2, r_2) * pr.density(1, r_1, r_2) > 0.0;
    auto i1 = detail::psi1_interval(pr, r_1);
    auto i2 = detail::psi2_interval(pr, r_2);
    bool wc = std::min(i1.second, i2.second) - std::max(i1.first, i2.first) > 1e-9;
    if (wc) return false;
    return w1 != w2;  // exactly one point-mass explanation
}

struct BinStats {
    double theta_lo = 0.0, theta_hi = 0.0;
    std::int64_t n = 0;
    std::int64_t n_reveal = 0, n_match = 0, n_plus = 0;
    double welfare_sum = 0.0;       // realized u_dm when plus is chosen
    double payoff_sum_1 = 0.0, payoff_sum_2 = 0.0;

    double p_reveal() const { return n ? double(n_reveal) / n : 0.0; }
    double p_match() const { return n ? double(n_match) / n : 0.0; }
    double p_plus() const { return n ? double(n_plus) / n : 0.0; }
};

struct SimulationStats {
    std::vector<BinStats> bins;
    std::int64_t n_draws = 0;
    std::uint64_t seed = 0;
    double dm_welfare = 0.0;  // mean realized DM payoff
};

inline SimulationStats run_sim(const StrategyProfile& pr, std::int64_t n_draws,
                               std::uint64_t seed, int n_bins = 64) {
    const GameConfig& cfg = pr.config();
    SimulationStats st;
    st.seed = seed;
    st.n_draws = n_draws;
    st.bins.resize(static_cast<size_t>(n_bins));
    double w = (cfg.theta_max - cfg.theta_min) / n_bins;
    for (int b = 0; b < n_bins; ++b) {
        st.bins[static_cast<size_t>(b)].theta_lo = cfg.theta_min + b * w;
        st.bins[static_cast<size_t>(b)].theta_hi = cfg.theta_min + (b + 1) * w;
    }

    // fixed shard count, independent of thread count, for reproducibility
    const int n_shards = 64;
    RandomStream master = RandomStream::seeded(seed);
    std::vector<std::vector<BinStats>> shard_bins(
        n_shards, std::vector<BinStats>(static_cast<size_t>(n_bins)));
    std::vector<double> shard_welfare(n_shards, 0.0);
    parallel_for(n_shards, cfg.num.threads, [&](int sh) {
        RandomStream rng = master.substream(static_cast<std::uint64_t>(sh));
        std::int64_t n = n_draws / n_shards
                       + (sh < n_draws % n_shards ? 1 : 0);
        auto& bins = shard_bins[static_cast<size_t>(sh)];
        for (std::int64_t d = 0; d < n; ++d) {
            double theta = cfg.state_dist.sample(rng);
            double r1 = pr.sample_report(1, theta, rng);
            double r2 = pr.sample_report(2, theta, rng);
            Action a = decide(pr, r1, r2);
            int b = std::min(n_bins - 1,
                             std::max(0, int((theta - cfg.theta_min) / w)));
            BinStats& bs = bins[static_cast<size_t>(b)];
            ++bs.n;
            if (reveals_state(pr, r1, r2)) ++bs.n_reveal;
            if (std::abs(r1 - r2) <= 1e-12) ++bs.n_match;
            bool plus = a == Action::Plus;
            if (plus) {
                ++bs.n_plus;
                bs.welfare_sum += cfg.u_dm(theta);
                bs.payoff_sum_1 += cfg.u_1(theta);
                bs.payoff_sum_2 += cfg.u_2(theta);
            }
            bs.payoff_sum_1 -= cfg.k_1 * cfg.cost_1(r1, theta);
            bs.payoff_sum_2 -= cfg.k_2 * cfg.cost_2(r2, theta);
            shard_welfare[static_cast<size_t>(sh)] +=
                plus ? cfg.u_dm(theta) : 0.0;
        }
    });
    for (int sh = 0; sh < n_shards; ++sh) {
        for (int b = 0; b < n_bins; ++b) {
            BinStats& dst = st.bins[static_cast<size_t>(b)];
            const BinStats& src = shard_bins[static_cast<size_t>(sh)][static_cast<size_t>(b)];
            dst.n += src.n;
            dst.n_reveal += src.n_reveal;
            dst.n_match += src.n_match;
            dst.n_plus += src.n_plus;
            dst.welfare_sum += src.welfare_sum;
            dst.payoff_sum_1 += src.payoff_sum_1;
            dst.payoff_sum_2 += src.payoff_sum_2;
        }
        st.dm_welfare += shard_welfare[static_cast<size_t>(sh)];
    }
    st.dm_welfare /= double(n_draws);
    return st;
}

struct Figure2Row {
    double theta = 0.0;
    double p_reveal = 0.0;
    double p_match = 0.0;
};

/// Analytic revelation and matching probabilities as functions of the state.
inline Figure2Row figure2_point(const StrategyProfile& pr, double theta) {
    Figure2Row row;
    row.theta = theta;
    if (!pr.mixes(theta)) {
        row.p_reveal = 1.0;
        row.p_match = 1.0;
        return row;
    }
    double a1 = pr.atom(1, theta), a2 = pr.atom(2, theta);
    // revelation happens iff the sender reporting against the conflict
    // (sender 2 for positive states, sender 1 for negative) tells the truth
    row.p_reveal = theta > 0.0 ? a2 : (theta < 0.0 ? a1 : 0.0);
    row.p_match = a1 * a2;
    return row;
}

inline std::vector<Figure2Row> figure2_data(const StrategyProfile& pr, int n = 201) {
    const GameConfig& cfg = pr.config();
    std::vector<Figure2Row> rows(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double t = cfg.theta_min + (cfg.theta_max - cfg.theta_min) * i / double(n - 1);
        rows[static_cast<size_t>(i)] = figure2_point(pr, t);
    }
    return rows;
}

}  // namespace sigsolve
