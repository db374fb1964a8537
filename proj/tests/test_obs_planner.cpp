#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "magnav/errors.hpp"
#include "magnav/obs_planner.hpp"
#include "test_helpers.hpp"

using namespace magnav;
using test_helpers::Quadratic;
using test_helpers::constant_map;
using test_helpers::sample_map;

namespace {

GridMap random_source_map(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> cx(-2.0, 2.0), cy(-1.5, 1.5);
  std::uniform_real_distribution<double> amp(20.0, 60.0), sig(0.5, 1.0);
  std::uniform_int_distribution<int> nsrc(2, 3);
  std::uniform_int_distribution<int> flip(0, 1);
  std::vector<GaussianSource> sources;
  int n = nsrc(gen);
  for (int k = 0; k < n; ++k)
    sources.push_back(
        {cx(gen), cy(gen), flip(gen) ? amp(gen) : -amp(gen), sig(gen)});
  return generate_gaussian_map(sources, {-3.0, -2.5, 3.0, 2.5}, 0.25, 0.0);
}

ObsPlannerConfig base_config() {
  ObsPlannerConfig cfg;
  cfg.horizon = 3;
  cfg.action_set = {deg2rad(-45.0), deg2rad(-22.0), 0.0, deg2rad(22.0),
                    deg2rad(45.0)};
  cfg.v = 0.2;
  cfg.dt = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("recursive search equals flat enumeration on random problems") {
  std::mt19937_64 gen(4711);
  std::uniform_real_distribution<double> px(-2.0, 2.0), py(-1.5, 1.5);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 10; ++trial) {
    GridMap map = random_source_map(gen);
    for (int horizon = 1; horizon <= 4; ++horizon) {
      ObsPlannerConfig cfg = base_config();
      cfg.horizon = horizon;
      cfg.goal_x = px(gen);
      cfg.goal_y = py(gen);
      cfg.weights.w_obs = (trial % 2) ? 1.5 : 0.0;
      cfg.include_terminal = (trial % 3 == 0);
      Pose est{px(gen), py(gen), ang(gen)};

      bool a_threw = false, b_threw = false;
      PlanResult a, b;
      try {
        a = plan(map, est, cfg);
      } catch (const NoFeasiblePlan&) {
        a_threw = true;
      }
      try {
        b = brute_force_plan(map, est, cfg);
      } catch (const NoFeasiblePlan&) {
        b_threw = true;
      }
      REQUIRE(a_threw == b_threw);
      if (!a_threw) {
        CHECK(a.first_control == b.first_control);
        CHECK(a.path.total_cost == b.path.total_cost);
      }
    }
  }
}

TEST_CASE("zero weights tie every sequence and the straight one wins") {
  GridMap map = constant_map(100.0);
  ObsPlannerConfig cfg = base_config();
  cfg.weights.w_goal = 0.0;
  cfg.weights.w_obs = 0.0;
  PlanResult r = plan(map, {3.0, 2.5, 0.0}, cfg);
  CHECK(r.first_control == 0.0);
  CHECK(r.path.total_cost == 0.0);
  for (double c : r.path.controls) CHECK(c == 0.0);
}

TEST_CASE("exact magnitude ties fall to the earlier action") {
  GridMap map = constant_map(100.0);
  ObsPlannerConfig cfg = base_config();
  cfg.action_set = {-0.3, 0.3};
  cfg.weights.w_goal = 0.0;
  cfg.weights.w_obs = 0.0;
  PlanResult r = plan(map, {3.0, 2.5, 0.0}, cfg);
  CHECK(r.first_control == -0.3);
}

TEST_CASE("one-step horizon without terminal cost is vacuous") {
  GridMap map = constant_map(100.0);
  ObsPlannerConfig cfg = base_config();
  cfg.horizon = 1;
  cfg.include_terminal = false;
  cfg.goal_x = -3.0;
  PlanResult r = plan(map, {3.0, 2.5, 0.7}, cfg);
  CHECK(r.path.total_cost == 0.0);
  CHECK(r.first_control == 0.0);
}

TEST_CASE("greedy one-step horizon feels the post-turn heading") {
  // h = x + y^2: det of the observability gramian is (v hyy sin theta')^2,
  // zero when the new heading stays east. The greedy planner must pick a
  // turning action; the two turn directions agree only to ~1e-15 (stencil
  // rounding decides the sign), so only the magnitude is pinned.
  Quadratic q{0.0, 1.0, 0.0, 0.0, 0.0, 1.0};
  GridMap map = sample_map(q, -2.0, -2.0, 0.25, 17, 17);
  ObsPlannerConfig cfg = base_config();
  cfg.horizon = 1;
  cfg.include_terminal = true;
  cfg.action_set = {-kPi / 4.0, 0.0, kPi / 4.0};
  cfg.weights.w_goal = 0.0;
  cfg.weights.w_obs = 1.0;
  PlanResult r = plan(map, {0.0, 0.5, 0.0}, cfg);
  CHECK(std::abs(r.first_control) == kPi / 4.0);
  // det = (0.4 sin(pi/4))^2 = 0.08, cost = 1 / 0.08.
  CHECK(r.path.total_cost == doctest::Approx(12.5).epsilon(1e-9));
}

TEST_CASE("a cornered vehicle with no turn available has no plan") {
  GridMap map = constant_map(0.0, 0.0, 0.0, 0.25, 9, 9);  // x, y in [0, 2]
  ObsPlannerConfig cfg = base_config();
  cfg.action_set = {0.0};
  cfg.horizon = 3;
  cfg.weights.w_obs = 0.0;
  Pose est{1.9, 1.0, 0.0};  // 0.6 m of eastward travel leaves the map
  CHECK_THROWS_AS(plan(map, est, cfg), NoFeasiblePlan);
  CHECK_THROWS_AS(brute_force_plan(map, est, cfg), NoFeasiblePlan);
}

TEST_CASE("the derivative stencil narrows the feasible area when scored") {
  GridMap map = constant_map(0.0, 0.0, 0.0, 0.25, 17, 17);  // [0, 4]^2
  ObsPlannerConfig cfg = base_config();
  cfg.action_set = {0.0};
  cfg.horizon = 1;
  cfg.include_terminal = true;
  Pose est{3.7, 2.0, 0.0};  // successor at x = 3.9, inside hull, in margin
  cfg.weights.w_obs = 1.5;
  CHECK_THROWS_AS(plan(map, est, cfg), NoFeasiblePlan);
  cfg.weights.w_obs = 0.0;
  CHECK_NOTHROW(plan(map, est, cfg));
}

TEST_CASE("an unobservable flat field does not disturb goal seeking") {
  GridMap map = constant_map(100.0, -3.0, -2.5, 0.25, 25, 21);
  ObsPlannerConfig cfg = base_config();
  cfg.goal_x = 2.0;
  cfg.goal_y = 1.5;
  Pose est{-2.0, -1.5, 0.3};
  cfg.weights.w_obs = 0.0;
  PlanResult plain = plan(map, est, cfg);
  cfg.weights.w_obs = 1.5;
  PlanResult capped = plan(map, est, cfg);
  CHECK(capped.first_control == plain.first_control);
  // Two scored states each pay the capped observation cost.
  CHECK(capped.path.total_cost ==
        doctest::Approx(plain.path.total_cost + 2.0 * 1.5e12).epsilon(1e-12));
}

TEST_CASE("planned states replay from planned controls") {
  std::mt19937_64 gen(88);
  GridMap map = random_source_map(gen);
  ObsPlannerConfig cfg = base_config();
  cfg.horizon = 4;
  cfg.goal_x = 1.0;
  cfg.goal_y = 1.0;
  Pose est{-1.0, -1.0, 0.4};
  PlanResult r = plan(map, est, cfg);
  REQUIRE(r.path.controls.size() == 4);
  REQUIRE(r.path.states.size() == 4);
  CHECK(r.first_control == r.path.controls[0]);
  Pose state = est;
  for (size_t k = 0; k < 4; ++k) {
    ControlInput u{cfg.v, r.path.controls[k] / cfg.dt};
    state = step_deterministic(state, u, cfg.dt);
    CHECK(state.x == r.path.states[k].x);
    CHECK(state.y == r.path.states[k].y);
    CHECK(state.theta == r.path.states[k].theta);
  }
}

TEST_CASE("planner input validation") {
  GridMap map = constant_map(0.0);
  ObsPlannerConfig cfg = base_config();
  cfg.horizon = 0;
  CHECK_THROWS_AS(plan(map, {1.0, 1.0, 0.0}, cfg), InvalidArgument);
  cfg.horizon = 2;
  cfg.action_set.clear();
  CHECK_THROWS_AS(plan(map, {1.0, 1.0, 0.0}, cfg), InvalidArgument);
  cfg = base_config();
  CHECK_THROWS_AS(plan(map, {99.0, 1.0, 0.0}, cfg), InvalidArgument);
}

TEST_CASE("flat enumeration refuses oversized search spaces") {
  GridMap map = constant_map(0.0);
  ObsPlannerConfig cfg = base_config();
  cfg.horizon = 10;
  cfg.action_set = {-0.2, -0.1, 0.0, 0.1, 0.2, 0.3};
  CHECK_THROWS_AS(brute_force_plan(map, {1.0, 1.0, 0.0}, cfg),
                  InvalidArgument);
}
