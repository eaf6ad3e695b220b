#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"

using namespace sigsolve;

namespace {

// wider sender-2 alignment so the pooled report stays credible
GameConfig fre_config() {
    GameConfig g = testcfg::symq_raw();
    g.u_2 = Utility(AffineUtility{1.0, -0.9});
    return build_config(g);
}

}  // namespace

TEST_CASE("fully revealing profile construction") {
    GameConfig cfg = fre_config();
    ReachTable rt = ReachTable::build(cfg);
    PureProfile fre = build_fre_profile(cfg, rt);
    double pool = std::sqrt(0.5);
    CHECK(fre.pooled_report == doctest::Approx(pool).epsilon(1e-9));
    CHECK(fre.rule_1(0.0) == doctest::Approx(pool).epsilon(1e-9));
    CHECK(fre.rule_1(0.3) == doctest::Approx(pool).epsilon(1e-9));
    CHECK(fre.rule_1(-0.3) == -0.3);
    CHECK(fre.rule_1(0.9) == 0.9);
    CHECK(fre.rule_2(0.3) == 0.3);

    SUBCASE("construction requires a credible pooled report") {
        GameConfig symq = testcfg::symq();
        ReachTable rts = ReachTable::build(symq);
        CHECK_THROWS_AS(build_fre_profile(symq, rts), ConfigError);
    }
    SUBCASE("receiver efficiency on path") {
        for (int i = 0; i < 1000; ++i) {
            double t = -1.0 + 2.0 * (i + 0.5) / 1000.0;
            Action a = pure_decide(fre, cfg, fre.rule_1(t), fre.rule_2(t));
            CHECK(a == (t >= 0.0 ? Action::Plus : Action::Minus));
        }
    }
}

TEST_CASE("fully revealing profile survives its own beliefs") {
    GameConfig cfg = fre_config();
    ReachTable rt = ReachTable::build(cfg);
    PureProfile fre = build_fre_profile(cfg, rt);
    PureCheckResult res = check_equilibrium(fre, cfg, 201, 512);
    CHECK(res.max_gain <= 1e-6);
    // boundary state is exactly indifferent between pooling and truth
    CHECK(pure_deviation_gain(fre, cfg, 1, 0.0, 0.0)
          == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("single-sender attribution breaks the revealing profile") {
    GameConfig cfg = fre_config();
    ReachTable rt = ReachTable::build(cfg);
    PureProfile fre = build_fre_profile(cfg, rt);
    fre.beliefs = PureBeliefPolicy::TrustSender2;
    double pool = fre.pooled_report;
    double theta = pool / 2.0;
    double gain = pure_deviation_gain(fre, cfg, 1, theta, theta);
    double predicted = cfg.k_1 * cfg.cost_1(pool, theta);
    CHECK(std::abs(gain - predicted) <= 1e-6);
    CHECK(gain > 0.1);
}

TEST_CASE("truthful profile is not an equilibrium") {
    GameConfig cfg = testcfg::symq();
    PureProfile truthful = build_truthful_profile();
    double gain = pure_deviation_gain(truthful, cfg, 1, -0.01, 0.01);
    CHECK(gain == doctest::Approx(0.49 - 0.0004).epsilon(1e-9));
    PureCheckResult res = check_equilibrium(truthful, cfg, 101, 101);
    CHECK(res.max_gain > 0.1);
}

TEST_CASE("reference welfare levels") {
    BenchmarkWelfares b = benchmark_welfares(testcfg::symq());
    CHECK(b.w_full_info == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(b.w_aligned == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(b.w_verifiable == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(b.w_babbling == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b.w_partition == doctest::Approx(0.1875).epsilon(1e-9));
}
