#include <cmath>

#include <doctest.h>

#include "spinrc/rk4.hpp"
#include "spinrc/stno.hpp"

using namespace spinrc;

namespace {

// STNO power equation used as the convergence-study testbed.
double power_rhs(double p) {
  const double gamma_g = 0.028, q = 2.0, sigma_i = 1.0, i = 0.056;
  return 2.0 * p * (-gamma_g * (1.0 + q * p) + sigma_i * i * (1.0 - p));
}

double integrate_power(double p0, double duration, double dt) {
  return rk4_integrate_scalar(power_rhs, p0, duration, dt);
}

}  // namespace

TEST_CASE("rk4: zero rhs leaves the state unchanged") {
  auto rhs = [](const detail::Vec<3>& s) -> detail::Vec<3> {
    (void)s;
    return {0.0, 0.0, 0.0};
  };
  detail::Vec<3> y{1.5, -2.0, 0.25};
  detail::Vec<3> out = rk4_integrate<3>(rhs, y, 7.3, 0.1);
  CHECK(out[0] == 1.5);
  CHECK(out[1] == -2.0);
  CHECK(out[2] == 0.25);
}

TEST_CASE("rk4: constant rhs integrates exactly to state + c*T") {
  auto rhs = [](const detail::Vec<2>& s) -> detail::Vec<2> {
    (void)s;
    return {2.0, -0.5};
  };
  detail::Vec<2> out = rk4_integrate<2>(rhs, {1.0, 1.0}, 10.0, 0.7);
  CHECK(out[0] == doctest::Approx(1.0 + 2.0 * 10.0).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(1.0 - 0.5 * 10.0).epsilon(1e-14));
}

TEST_CASE("rk4: final partial step lands exactly on the duration") {
  // Linear rhs dy/dt = 1 with dt that does not divide the duration.
  auto rhs = [](const detail::Vec<1>& s) -> detail::Vec<1> {
    (void)s;
    return {1.0};
  };
  detail::Vec<1> out = rk4_integrate<1>(rhs, {0.0}, 1.0, 0.3);
  CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rk4: single step matches a one-step integrate") {
  auto rhs = [](const detail::Vec<1>& s) -> detail::Vec<1> { return {-0.3 * s[0]}; };
  detail::Vec<1> a = rk4_step<1>(rhs, {2.0}, 0.5);
  detail::Vec<1> b = rk4_integrate<1>(rhs, {2.0}, 0.5, 0.5);
  CHECK(a[0] == b[0]);
}

TEST_CASE("rk4: scalar wrapper agrees with the vector form") {
  auto scalar_rhs = [](double y) { return std::sin(y) - 0.2 * y; };
  auto vec_rhs = [&](const detail::Vec<1>& s) -> detail::Vec<1> { return {scalar_rhs(s[0])}; };
  double a = rk4_integrate_scalar(scalar_rhs, 0.7, 5.0, 0.05);
  double b = rk4_integrate<1>(vec_rhs, {0.7}, 5.0, 0.05)[0];
  CHECK(a == b);
}

TEST_CASE("rk4: convergence on the STNO power equation") {
  const double p0 = 0.05;
  const double duration = 50.0;
  // Reference solution at dt three orders finer than the coarsest step.
  const double ref = integrate_power(p0, duration, 1e-3);

  double e1 = std::abs(integrate_power(p0, duration, 1.0) - ref);
  double e2 = std::abs(integrate_power(p0, duration, 0.5) - ref);
  double e3 = std::abs(integrate_power(p0, duration, 0.25) - ref);
  REQUIRE(e1 > 0.0);
  REQUIRE(e2 > 0.0);
  REQUIRE(e3 > 0.0);

  SUBCASE("halving dt shrinks the error by a factor of at least 12") {
    CHECK(e1 / e2 >= 12.0);
    CHECK(e2 / e3 >= 12.0);
  }
  SUBCASE("empirical order is at least 3.5") {
    CHECK(std::log2(e1 / e2) >= 3.5);
    CHECK(std::log2(e2 / e3) >= 3.5);
  }
}
