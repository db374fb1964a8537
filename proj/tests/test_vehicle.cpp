#include "doctest.h"

#include <cmath>

#include "magnav/errors.hpp"
#include "magnav/vehicle.hpp"
#include "test_helpers.hpp"

using namespace magnav;

TEST_CASE("deterministic step matches the closed form") {
  Pose p{1.0, -2.0, deg2rad(30.0)};
  ControlInput u{0.2, deg2rad(10.0)};
  Pose out = step_deterministic(p, u, 1.0);
  CHECK(out.x == doctest::Approx(1.0 + 0.2 * std::cos(deg2rad(30.0)))
                     .epsilon(1e-15));
  CHECK(out.y == doctest::Approx(-2.0 + 0.2 * std::sin(deg2rad(30.0)))
                     .epsilon(1e-15));
  CHECK(out.theta == doctest::Approx(deg2rad(40.0)).epsilon(1e-12));
}

TEST_CASE("position advances along the heading before the turn") {
  // A quarter turn commanded from heading 0 must still move straight east.
  Pose p{0.0, 0.0, 0.0};
  ControlInput u{1.0, kPi / 2.0};
  Pose out = step_deterministic(p, u, 1.0);
  CHECK(out.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out.y == 0.0);
  CHECK(out.theta == doctest::Approx(kPi / 2.0).epsilon(1e-15));
}

TEST_CASE("heading wraps into (-pi, pi] with -pi mapped to +pi") {
  Pose p{0.0, 0.0, -kPi / 2.0};
  ControlInput u{0.0, -kPi / 2.0};
  Pose out = step_deterministic(p, u, 1.0);
  CHECK(out.theta == kPi);

  Pose q{0.0, 0.0, deg2rad(170.0)};
  ControlInput u2{0.0, deg2rad(20.0)};
  Pose out2 = step_deterministic(q, u2, 1.0);
  CHECK(out2.theta == doctest::Approx(deg2rad(-170.0)).epsilon(1e-12));
}

TEST_CASE("step rejects bad arguments") {
  Pose p;
  CHECK_THROWS_AS(step_deterministic(p, {-0.1, 0.0}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(step_deterministic(p, {0.1, 0.0}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(step_deterministic(p, {0.1, 0.0}, -1.0), InvalidArgument);
}

TEST_CASE("zero noise makes the noisy step bit-identical") {
  Pose p{0.3, 0.4, 0.5};
  ControlInput u{0.25, 0.1};
  NoiseConfig noise;
  noise.sigma_xy_per_step = 0.0;
  noise.sigma_theta_per_step = 0.0;
  Rng rng(7);
  Pose a = step_noisy(p, u, 1.0, noise, rng);
  Pose b = step_deterministic(p, u, 1.0);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.theta == b.theta);
}

TEST_CASE("zero commanded motion consumes no randomness") {
  NoiseConfig noise;  // nonzero per-step sigmas
  Rng rng(42), fresh(42);
  Pose p{1.0, 1.0, 0.7};
  Pose out = step_noisy(p, {0.0, 0.0}, 1.0, noise, rng);
  CHECK(out.x == p.x);
  CHECK(out.y == p.y);
  CHECK(out.theta == p.theta);
  CHECK(rng() == fresh());  // stream untouched
}

TEST_CASE("noise scales with motion and draws in x, y, theta order") {
  NoiseConfig noise;
  noise.sigma_xy_per_step = 0.01;
  noise.sigma_theta_per_step = deg2rad(1.0);
  ControlInput u{0.1, deg2rad(20.0)};
  Pose p{0.0, 0.0, 0.0};

  Rng rng(123);
  Pose out = step_noisy(p, u, 1.0, noise, rng);

  // Replay the same stream by hand: 0.1 m translated doubles the 5 cm
  // reference, 20 deg rotated doubles the 10 deg reference.
  Rng replay(123);
  Pose base = step_deterministic(p, u, 1.0);
  double ex = gaussian_draw(replay, 0.02);
  double ey = gaussian_draw(replay, 0.02);
  double et = gaussian_draw(replay, 2.0 * deg2rad(1.0));
  CHECK(out.x == base.x + ex);
  CHECK(out.y == base.y + ey);
  CHECK(out.theta == wrap_angle(base.theta + et));
}

TEST_CASE("pure rotation adds no position noise") {
  NoiseConfig noise;
  Rng rng(5);
  Pose p{0.5, 0.5, 0.0};
  Pose out = step_noisy(p, {0.0, deg2rad(30.0)}, 1.0, noise, rng);
  CHECK(out.x == p.x);
  CHECK(out.y == p.y);
  CHECK(out.theta != deg2rad(30.0));  // theta noise was applied
}

TEST_CASE("measurement returns the exact field when sigma_z is zero") {
  GridMap map(0.0, 0.0, 1.0, 2, 2, {1.0, 2.0, 3.0, 4.0}, 10.0, 0.2);
  Pose pose{0.5, 0.5, 0.3};
  Rng rng(1), fresh(1);
  double z = measure(map, pose, 0.0, rng);
  CHECK(z == map.field_with_heading(pose));
  CHECK(rng() == fresh());
}

TEST_CASE("noisy measurement is field plus one gaussian draw") {
  GridMap map(0.0, 0.0, 1.0, 2, 2, {1.0, 2.0, 3.0, 4.0});
  Pose pose{0.5, 0.5, 0.0};
  Rng rng(9), replay(9);
  double z = measure(map, pose, 5.0, rng);
  CHECK(z == map.field_with_heading(pose) + gaussian_draw(replay, 5.0));
}

TEST_CASE("measurement rejects negative sigma") {
  GridMap map(0.0, 0.0, 1.0, 2, 2, {1.0, 2.0, 3.0, 4.0});
  Rng rng(1);
  CHECK_THROWS_AS(measure(map, {0.5, 0.5, 0.0}, -1.0, rng), InvalidArgument);
}

TEST_CASE("measurement off the map raises OutOfBounds") {
  GridMap map(0.0, 0.0, 1.0, 2, 2, {1.0, 2.0, 3.0, 4.0});
  Rng rng(1);
  CHECK_THROWS_AS(measure(map, {5.0, 0.5, 0.0}, 0.0, rng), OutOfBounds);
}
