#include <doctest.h>

#include <cmath>
#include <vector>

#include "binoloc/angles.hpp"
#include "binoloc/motion.hpp"

using namespace binoloc;

namespace {

double stddev(const std::vector<double>& v)
{
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return std::sqrt(sq / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_SUITE("motion")
{
  TEST_CASE("sensor_position examples")
  {
    const LeverArm arm{0.3, 0.0};
    Vec2 s = sensor_position({0, 0, 0}, arm);
    CHECK(s.x == doctest::Approx(0.3));
    CHECK(s.y == doctest::Approx(0.0));
    s = sensor_position({0, 0, kPi / 2}, arm);
    CHECK(s.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.y == doctest::Approx(0.3));
    s = sensor_position({1, 2, kPi}, arm);
    CHECK(s.x == doctest::Approx(0.7));
    CHECK(s.y == doctest::Approx(2.0));
  }

  TEST_CASE("sensor_position is an isometry in the arm")
  {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
      const Pose p{uniform(rng, -10, 10), uniform(rng, -10, 10), uniform(rng, -10, 10)};
      const LeverArm arm{uniform(rng, -1, 1), uniform(rng, -1, 1)};
      CHECK(distance(sensor_position(p, arm), p.position()) == doctest::Approx(std::hypot(arm.dx, arm.dy)));
    }
  }

  TEST_CASE("lever arm must be non-zero")
  {
    CHECK_THROWS(LeverArm{0.0, 0.0}.validate());
    CHECK_NOTHROW(LeverArm{0.3, 0.0}.validate());
  }

  TEST_CASE("noise-free velocity model is exact unicycle integration")
  {
    const MotionNoiseParams none{};
    Rng rng(1);
    Pose p = sample_velocity_motion({0, 0, 0}, {1.0, 0.0}, 1.0, none, rng);
    CHECK(p.x == doctest::Approx(1.0));
    CHECK(p.y == doctest::Approx(0.0));
    CHECK(p.phi == doctest::Approx(0.0));
    p = sample_velocity_motion({0, 0, 0}, {0.0, kPi / 2}, 1.0, none, rng);
    CHECK(p.x == doctest::Approx(0.0));
    CHECK(p.y == doctest::Approx(0.0));
    CHECK(p.phi == doctest::Approx(kPi / 2));
    // Quarter circle of radius 1.
    p = sample_velocity_motion({0, 0, 0}, {kPi / 2, kPi / 2}, 1.0, none, rng);
    CHECK(p.x == doctest::Approx(1.0));
    CHECK(p.y == doctest::Approx(1.0));
    // Near-zero turn rate takes the series branch and stays continuous.
    const Pose a = sample_velocity_motion({0, 0, 0}, {0.3, 1e-9}, 0.05, none, rng);
    const Pose b = sample_velocity_motion({0, 0, 0}, {0.3, 1e-5}, 0.05, none, rng);
    CHECK(a.x == doctest::Approx(b.x).epsilon(1e-9));
    CHECK(a.y == doctest::Approx(b.y).epsilon(1e-6));
    CHECK_THROWS(sample_velocity_motion({0, 0, 0}, {0.3, 0}, 0.0, none, rng));
  }

  TEST_CASE("velocity model linear noise matches its variance")
  {
    // Along-track displacement / dt is v + N(0, a1 v^2 + a2 w^2) up to a
    // cos(w dt / 2) factor that is 1 - 1e-4 here.
    const auto params = viking_mi_422p();
    const double v = 0.3, w = 0.6, dt = 0.05;
    Rng rng(42);
    std::vector<double> vx(100000);
    for (auto& x : vx) x = sample_velocity_motion({0, 0, 0}, {v, w}, dt, params, rng).x / dt;
    const double expected = std::sqrt(params.velocity[0] * v * v + params.velocity[1] * w * w);
    CHECK(stddev(vx) == doctest::Approx(expected).epsilon(0.03));
  }

  TEST_CASE("noise-free odometry model reproduces the increment")
  {
    const MotionNoiseParams none{};
    Rng rng(1);
    Pose p = sample_odometry_motion({0, 0, 0}, {0, 0, 0}, {1, 0, 0}, none, rng);
    CHECK(p.x == doctest::Approx(1.0));
    CHECK(p.y == doctest::Approx(0.0));
    p = sample_odometry_motion({2, 3, kPi / 2}, {0, 0, 0}, {1, 0, 0}, none, rng);
    CHECK(p.x == doctest::Approx(2.0));
    CHECK(p.y == doctest::Approx(4.0));
    CHECK(p.phi == doctest::Approx(kPi / 2));
    p = sample_odometry_motion({2, 3, 0.4}, {5, 5, 1}, {5, 5, 1}, none, rng);
    CHECK(p == Pose{2, 3, 0.4});
    // Increment expressed in a rotated odometry frame.
    p = sample_odometry_motion({0, 0, 0}, {1, 1, kPi / 2}, {1, 2, kPi}, none, rng);
    CHECK(p.x == doctest::Approx(1.0));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.phi == doctest::Approx(kPi / 2));
  }

  TEST_CASE("odometry translation noise matches alpha_3 trans")
  {
    const auto params = viking_mi_422p();
    Rng rng(42);
    std::vector<double> trans(100000);
    for (auto& t : trans) {
      const Pose p = sample_odometry_motion({0, 0, 0}, {0, 0, 0}, {1, 0, 0}, params, rng);
      t = std::hypot(p.x, p.y);
    }
    CHECK(stddev(trans) == doctest::Approx(params.odometry[2] * 1.0).epsilon(0.03));
  }

  TEST_CASE("samplers are deterministic for a seed")
  {
    const auto params = viking_mi_422p();
    Rng a(77), b(77);
    for (int i = 0; i < 100; ++i) {
      CHECK(sample_velocity_motion({1, 2, 3}, {0.3, 0.2}, 0.05, params, a) ==
            sample_velocity_motion({1, 2, 3}, {0.3, 0.2}, 0.05, params, b));
      CHECK(sample_odometry_motion({1, 2, 3}, {0, 0, 0}, {0.1, 0.02, 0.1}, params, a) ==
            sample_odometry_motion({1, 2, 3}, {0, 0, 0}, {0.1, 0.02, 0.1}, params, b));
    }
  }

  TEST_CASE("headings come back wrapped")
  {
    const MotionNoiseParams none{};
    Rng rng(1);
    const Pose p = sample_velocity_motion({0, 0, 3.0}, {0.0, 1.0}, 1.0, none, rng);
    CHECK(p.phi == doctest::Approx(4.0 - kTwoPi));
  }

  TEST_CASE("presets")
  {
    const auto v = motion_preset("viking-mi-422p");
    CHECK(v.velocity[0] == 0.0346);
    CHECK(v.odometry[3] == 0.0173);
    const auto z = motion_preset("noise-free");
    for (double a : z.velocity) CHECK(a == 0.0);
    CHECK_THROWS(motion_preset("bogus"));
    MotionNoiseParams bad{};
    bad.odometry[1] = -0.1;
    CHECK_THROWS(bad.validate());
  }
}
