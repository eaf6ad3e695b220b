// Shared fixtures for the test suites: canonical configs and cached
// solutions (solving is cheap but not free, so each binary solves once).
#pragma once

#include "sigsolve/sigsolve.hpp"

namespace testcfg {

using namespace sigsolve;

inline GameConfig symq_raw() {
    GameConfig g;
    g.state_dist = StateDist(UniformDist{-1.0, 1.0});
    g.theta_min = -1.0;
    g.theta_max = 1.0;
    g.u_dm = Utility(AffineUtility{1.0, 0.0});
    g.u_1 = Utility(AffineUtility{1.0, 0.5});
    g.u_2 = Utility(AffineUtility{1.0, -0.5});
    g.cost_1 = CostFn(PowerCost{2.0, 1.0});
    g.cost_2 = CostFn(PowerCost{2.0, 1.0});
    g.k_1 = 1.0;
    g.k_2 = 1.0;
    return g;
}

inline GameConfig symq() { return build_config(symq_raw()); }

inline GameConfig symq_exp(double exponent) {
    GameConfig g = symq_raw();
    g.cost_1 = CostFn(PowerCost{exponent, 1.0});
    g.cost_2 = CostFn(PowerCost{exponent, 1.0});
    return build_config(g);
}

inline GameConfig asym_k() {
    GameConfig g = symq_raw();
    g.k_2 = 2.0;
    return build_config(g);
}

inline const Solution& symq_solution() {
    static Solution s = solve_model(symq());
    return s;
}

inline const Solution& asym_solution() {
    static Solution s = solve_model(asym_k());
    return s;
}

inline const Solution& exp1_solution() {
    static Solution s = solve_model(symq_exp(1.0));
    return s;
}

inline const Solution& exp05_solution() {
    static Solution s = solve_model(symq_exp(0.5));
    return s;
}

}  // namespace testcfg
