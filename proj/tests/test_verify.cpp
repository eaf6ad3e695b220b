#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "common.hpp"

using namespace sigsolve;

TEST_CASE("expected sender payoffs") {
    StrategyProfile p = testcfg::symq_solution().profile();

    SUBCASE("sender 2 is indifferent between truth and the deepest misreport") {
        double truth = sender_payoff(p, 2, 0.1, 0.1);
        CHECK(truth == doctest::Approx(-0.4).epsilon(1e-9));
        double deep = sender_payoff(p, 2, p.reaches().lower_reach_2(0.1), 0.1);
        CHECK(deep == doctest::Approx(-0.4).epsilon(1e-3));
    }
    SUBCASE("sender 1 payoff is constant across the mixing support") {
        SupportInterval si = p.support(1, 0.1);
        double base = sender_payoff(p, 1, 0.1, 0.1);
        for (int k = 0; k <= 20; ++k) {
            double r = si.lo + (si.hi - si.lo) * k / 20.0;
            CHECK(std::abs(sender_payoff(p, 1, r, 0.1) - base) <= 1e-4);
        }
    }
    SUBCASE("win probability is monotone in own report") {
        double prev = prob_plus(p, 1, 0.0, 0.1);
        for (int k = 1; k <= 20; ++k) {
            double r = 0.7 * k / 20.0;
            double w = prob_plus(p, 1, r, 0.1);
            CHECK(w >= prev - 1e-9);
            prev = w;
        }
        CHECK(prob_plus(p, 1, 0.71, 0.1) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("the solved profile certifies as an equilibrium") {
    StrategyProfile p = testcfg::symq_solution().profile();
    VerifyGrids g;
    g.state_n = 33;
    g.report_n = 256;
    g.dm_pairs_side = 25;
    VerificationReport rep = verify_direct_equilibrium(p, g);
    CHECK(rep.pass());
    CHECK(rep.dm_violations == 0);
    CHECK(rep.dm_pairs_checked == 625);
    CHECK(rep.max_gain <= 1e-3 * rep.payoff_scale);
    CHECK(rep.max_spread <= 1e-3 * rep.payoff_scale);
}

namespace {

// a mutation counts as detected if it shows up in either the deviation
// gains or the on-support payoff spread
double violation(const VerificationReport& rep) {
    return std::max(rep.max_gain, rep.max_spread);
}

VerifyGrids small_grids() {
    VerifyGrids g;
    g.state_n = 17;
    g.report_n = 128;
    g.support_samples = 17;
    g.dm_pairs_side = 0;
    return g;
}

double mutated_violation(const Solution& sol, const Perturbation& pert) {
    StrategyProfile p = sol.profile();
    p.set_perturbation(pert);
    return violation(verify_direct_equilibrium(p, small_grids()));
}

}  // namespace

TEST_CASE("mutated profiles are rejected") {
    const Solution& sol = testcfg::symq_solution();
    VerifyGrids g = small_grids();
    double clean = violation(verify_direct_equilibrium(sol.profile(), g));
    double floor = 1e-3 * 1.5;

    Perturbation shrink;
    shrink.atom_scale_1 = 0.9;
    shrink.atom_scale_2 = 0.9;
    Perturbation grow;
    grow.atom_scale_1 = 1.1;
    grow.atom_scale_2 = 1.1;
    Perturbation stretch;
    stretch.support_stretch_1 = 1.05;
    stretch.support_stretch_2 = 1.05;
    for (const Perturbation* pert : {&shrink, &grow, &stretch}) {
        double viol = mutated_violation(sol, *pert);
        CHECK(viol > 10.0 * clean);
        CHECK(viol > floor);
    }
    // scaled-down atoms leave a large direct deviation gain
    StrategyProfile ps = sol.profile();
    ps.set_perturbation(shrink);
    CHECK(verify_direct_equilibrium(ps, g).max_gain > 1e-2);

    SUBCASE("a shifted swing table is rejected") {
        for (double shift : {0.02, -0.02}) {
            std::vector<double> xs = sol.swing.table().xs();
            std::vector<double> ys = sol.swing.table().ys();
            for (double& y : ys) y += shift;
            SwingFunction bad = SwingFunction::from_table(xs, ys, false);
            StrategyProfile p(sol.cfg, sol.reaches, bad, sol.cutoffs);
            double viol = violation(verify_direct_equilibrium(p, g));
            CHECK(viol > 10.0 * clean);
            CHECK(viol > floor);
        }
    }
}
