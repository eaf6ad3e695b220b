// Umbrella header and the end-to-end solve pipeline.
#pragma once

#include "sigsolve/belief.hpp"
#include "sigsolve/benchmark.hpp"
#include "sigsolve/config.hpp"
#include "sigsolve/config_io.hpp"
#include "sigsolve/families.hpp"
#include "sigsolve/numerics.hpp"
#include "sigsolve/reach.hpp"
#include "sigsolve/simulate.hpp"
#include "sigsolve/strategy.hpp"
#include "sigsolve/swing.hpp"
#include "sigsolve/verify.hpp"
#include "sigsolve/welfare.hpp"

namespace sigsolve {

/// Owns every solved object; StrategyProfile instances returned by
/// profile() reference this Solution and must not outlive it.
struct Solution {
    GameConfig cfg;
    ReachTable reaches;
    SwingFunction swing;
    TruthfulCutoffs cutoffs;

    StrategyProfile profile() const {
        return StrategyProfile(cfg, reaches, swing, cutoffs);
    }
};

inline Solution solve_model(const GameConfig& cfg) {
    Solution s;
    s.cfg = cfg;
    s.reaches = ReachTable::build(s.cfg);
    s.swing = SwingFunction::build(s.cfg, s.reaches);
    s.cutoffs = compute_cutoffs(s.reaches, s.swing);
    return s;
}

}  // namespace sigsolve
