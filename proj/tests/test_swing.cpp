#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"

using namespace sigsolve;

TEST_CASE("indifference integrand values") {
    GameConfig cfg = testcfg::symq();
    CHECK(swing_integrand(cfg, 0.3, -0.3, 0.0) == 0.0);
    // f = 1/2, u_dm = theta, u_1 u_2 = theta^2 - 0.25,
    // dC/dr terms = 2(r - theta) each
    double theta = 0.1;
    double expect = 0.5 * theta / (theta * theta - 0.25)
                  * 2.0 * (-0.3 - theta) * 2.0 * (0.3 - theta);
    CHECK(swing_integrand(cfg, 0.3, -0.3, theta)
          == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(0.06666666667).epsilon(1e-6));
    // symmetric environment: integrand is odd in theta for mirrored reports
    CHECK(swing_integrand(cfg, 0.3, -0.3, 0.1)
          == doctest::Approx(-swing_integrand(cfg, 0.3, -0.3, -0.1)).epsilon(1e-12));
}

TEST_CASE("symmetric quadratic swing is negation") {
    const Solution& sol = testcfg::symq_solution();
    double sup = 0.0;
    for (int i = 0; i <= 400; ++i) {
        double r = sol.swing.domain_lo()
                 + (sol.swing.domain_hi() - sol.swing.domain_lo()) * i / 400.0;
        sup = std::max(sup, std::abs(sol.swing.eval(r) + r));
    }
    CHECK(sup <= 1e-4);
    CHECK(std::abs(sol.swing.eval(0.3) + 0.3) <= 1e-4);
    CHECK(solve_swing(sol.cfg, sol.reaches, 0.3)
          == doctest::Approx(-0.3).epsilon(1e-7));
}

static void check_swing_structure(const Solution& sol) {
    const SwingFunction& s = sol.swing;
    double span = s.domain_hi() - s.domain_lo();
    CHECK(std::abs(s.eval(0.0)) <= 1e-9);
    CHECK(std::abs(s.eval(s.domain_hi()) - s.domain_lo()) <= 1e-4 * span);
    CHECK(std::abs(s.eval(s.domain_lo()) - s.domain_hi()) <= 1e-4 * span);
    double prev = s.eval(s.domain_lo());
    for (int i = 1; i <= 200; ++i) {
        double r = s.domain_lo() + span * i / 200.0;
        double v = s.eval(r);
        CHECK(v < prev);
        prev = v;
        CHECK(std::abs(s.eval(std::clamp(v, s.domain_lo(), s.domain_hi())) - r)
              <= 1e-3);
    }
    CHECK_THROWS_AS(s.eval(s.domain_hi() + 0.05 * span), NumericError);
}

TEST_CASE("swing structure across environments") {
    check_swing_structure(testcfg::symq_solution());
    check_swing_structure(testcfg::asym_solution());
    check_swing_structure(testcfg::exp05_solution());
}

TEST_CASE("truthful cutoffs") {
    const Solution& sol = testcfg::symq_solution();
    CHECK(sol.cutoffs.theta_2 == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(sol.cutoffs.theta_1 == doctest::Approx(-0.25).epsilon(1e-6));
    CHECK(std::abs(sol.cutoffs.theta_1 + sol.cutoffs.theta_2) <= 1e-6);

    SUBCASE("brute-force sign scan agrees") {
        auto h = [&](double t) {
            return sol.swing.eval(t) - sol.reaches.lower_reach_2(t);
        };
        double lo = 1e-6, hi = sol.swing.domain_hi();
        int crossings = 0;
        double located = 0.0;
        double prev = h(lo);
        for (int i = 1; i <= 2000; ++i) {
            double t = lo + (hi - lo) * i / 2000.0;
            double v = h(t);
            if ((v > 0.0) != (prev > 0.0)) {
                ++crossings;
                located = t;
            }
            prev = v;
        }
        CHECK(crossings == 1);
        CHECK(std::abs(located - sol.cutoffs.theta_2) <= 1e-3);
    }
    SUBCASE("cutoffs lie strictly inside both constraint intervals") {
        for (const Solution* s : {&testcfg::symq_solution(),
                                  &testcfg::asym_solution(),
                                  &testcfg::exp05_solution()}) {
            CHECK(s->cutoffs.theta_1 > s->cfg.tau_1);
            CHECK(s->cutoffs.theta_1 > s->swing.domain_lo());
            CHECK(s->cutoffs.theta_1 < 0.0);
            CHECK(s->cutoffs.theta_2 > 0.0);
            CHECK(s->cutoffs.theta_2 < s->cfg.tau_2);
            CHECK(s->cutoffs.theta_2 < s->swing.domain_hi());
        }
    }
}

TEST_CASE("grid refinement leaves the solution stable") {
    GameConfig coarse = testcfg::symq();
    coarse.num.swing_grid_n = 65;
    Solution a = solve_model(coarse);
    GameConfig fine = coarse;
    fine.num = coarse.num.refined(2);
    Solution b = solve_model(fine);
    double sup = 0.0;
    double lo = std::max(a.swing.domain_lo(), b.swing.domain_lo());
    double hi = std::min(a.swing.domain_hi(), b.swing.domain_hi());
    for (int i = 0; i <= 200; ++i) {
        double r = lo + (hi - lo) * i / 200.0;
        sup = std::max(sup, std::abs(a.swing.eval(r) - b.swing.eval(r)));
    }
    CHECK(sup <= 1e-4);
    CHECK(std::abs(a.cutoffs.theta_2 - b.cutoffs.theta_2) <= 1e-6);
}
