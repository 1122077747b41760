#include "doctest.h"

#include "superman/xor_bench.hpp"

using namespace superman;

TEST_CASE("fourier-motzkin decides simple systems") {
    // x < 1 and -x < -2 is infeasible; x < 1 and -x < 0 is feasible.
    LinearConstraint upper{{1}, 1, true};
    LinearConstraint lower{{-1}, -2, true};
    CHECK_FALSE(system_feasible({upper, lower}, 1));
    LinearConstraint positive{{-1}, 0, true};
    CHECK(system_feasible({upper, positive}, 1));
}

TEST_CASE("feasible relaxation of the xor system") {
    // Dropping one of the four threshold constraints leaves a satisfiable
    // system.
    auto lt = [](std::vector<long long> c, long long r) {
        return LinearConstraint{std::move(c), r, true};
    };
    std::vector<LinearConstraint> sys = {
        lt({1, 0, 1, 0, -1}, 0),
        lt({0, -1, -1, 0, 1}, 0),
        lt({-1, 0, 0, -1, 1}, 0),
    };
    CHECK(system_feasible(std::move(sys), 5));
}

TEST_CASE("xor threshold systems are infeasible") {
    CHECK(feature_xor_thresholds_infeasible());
    CHECK(set_xor_thresholds_infeasible());
}

TEST_CASE("non-strict boundary version is feasible") {
    // With <= everywhere, a = b = c = d = tau = 0 satisfies the system, so
    // the contradiction hinges on strictness.
    auto le = [](std::vector<long long> c, long long r) {
        return LinearConstraint{std::move(c), r, false};
    };
    std::vector<LinearConstraint> sys = {
        le({1, 0, 1, 0, -1}, 0),
        le({0, -1, -1, 0, 1}, 0),
        le({-1, 0, 0, -1, 1}, 0),
        le({0, 1, 0, 1, -1}, 0),
    };
    CHECK(system_feasible(std::move(sys), 5));
}

TEST_CASE("grouped feature xor trains to a perfect table") {
    XorTrainSettings settings = feature_xor_settings();
    const XorTrainOutcome o = train_feature_xor(true, 3, settings);
    CHECK(o.reached_perfect);
    CHECK(o.steps_to_perfect <= settings.max_steps);
}

TEST_CASE("singleton feature xor never beats three of four") {
    XorTrainSettings settings = feature_xor_settings();
    settings.max_steps = 400;
    const XorTrainOutcome o = train_feature_xor(false, 3, settings);
    CHECK_FALSE(o.reached_perfect);
    CHECK(o.best_accuracy <= 0.75);
}

TEST_CASE("paired set xor trains to a perfect table") {
    const XorTrainOutcome o = train_set_xor(true, 0);
    CHECK(o.reached_perfect);
}

TEST_CASE("singleton set xor never beats three of four") {
    XorTrainSettings settings = set_xor_settings();
    settings.max_steps = 400;
    const XorTrainOutcome o = train_set_xor(false, 0, settings);
    CHECK_FALSE(o.reached_perfect);
    CHECK(o.best_accuracy <= 0.75);
}
