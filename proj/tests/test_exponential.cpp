#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stj/error.hpp"
#include "stj/exponential.hpp"
#include "stj/grid.hpp"
#include "support/fixtures.hpp"

using namespace stj;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("lambda tilde and q") {
  auto g = fx::G1();
  CHECK(lambda_tilde(ExpSpec::constant(1, -1), g, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(lambda_tilde(ExpSpec::constant(0, -1), g, 0) == 0);
  CHECK(lambda_tilde(ExpSpec::constant(1.5, -1), g, 0.3) == 1.5);
  CHECK(code_of([&] { lambda_tilde(ExpSpec::constant(-1, -1), g, 0); }) == Errc::BranchViolation);
  CHECK(q_transform(ExpSpec::constant(1, -1), g, 0) == -0.5);
  CHECK(q_transform(ExpSpec::constant(0, -1), g, 0) == 0);
  CHECK(q_transform(ExpSpec::constant(0.8, -1), g, 1.5) == -0.8);
  CHECK(code_of([&] { q_transform(ExpSpec::constant(-1, -1), g, 0); }) == Errc::BranchViolation);
}

TEST_CASE("fixture values") {
  auto g = fx::G1();
  auto s = ExpSpec::constant(1, -1);
  CHECK(exp_g(s, g, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(std::abs(exp_g(s, g, 2) - 2 * std::exp(2.5)) <= 1e-10);
  CHECK(exp_g(s, g, -1) == 1);
  CHECK(exp_g_right(s, g, 0) == doctest::Approx(2 * exp_g(s, g, 0)).epsilon(1e-15));
}

TEST_CASE("residuals") {
  auto g = fx::G1();
  auto grid = sample_grid(g, 50, 0).t;
  auto r = verify_exp(ExpSpec::constant(1, -1), g, grid);
  CHECK(r.integral_residual <= 1e-8);
  CHECK(r.jump_residual <= 1e-14 * exp_g(ExpSpec::constant(1, -1), g, 0));
  CHECK(r.inverse_residual <= 1e-10);
  auto z = verify_exp(ExpSpec::constant(0, 0.2), g, grid);
  CHECK(z.integral_residual == 0);
  CHECK(z.jump_residual == 0);
}

TEST_CASE("variable rate agrees with the closed form") {
  auto g = fx::G1();
  auto c = ExpSpec::constant(0.7, 0.2);
  auto v = ExpSpec::variable(constant(0.7), 0.2);
  for (double t : {-1.0, -0.4, 0.0, 0.2, 0.6, 1.3, 2.0}) CHECK(exp_g(v, g, t) == doctest::Approx(exp_g(c, g, t)).epsilon(1e-10));
  auto lin = ExpSpec::variable(polynomial({0.5, 0.25}), -1);
  auto r = verify_exp(lin, g, sample_grid(g, 30, 0).t);
  CHECK(r.integral_residual <= 1e-8);
  CHECK(r.jump_residual <= 1e-12);
}

TEST_CASE("property: forward, backward, jumps, q involution") {
  fx::Rng r(61);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = fx::random_derivator(r);
    double lam = r.uniform(-0.4, 2);
    double alpha = r.uniform(g.lo(), g.hi());
    bool ok = true;
    for (const auto& j : g.jumps()) ok = ok && 1 + lam * j.size > 0;
    if (!ok) continue;
    auto s = ExpSpec::constant(lam, alpha);
    CHECK(exp_g(s, g, alpha) == 1);
    for (double t : fx::random_points(r, g.lo(), g.hi(), 15)) {
      double e = exp_g(s, g, t);
      CHECK(e > 0);
      CHECK(std::abs(e * exp_g(ExpSpec::constant(lam, t), g, alpha) - 1) <= 1e-10);
    }
    for (const auto& j : g.jumps()) {
      if (j.at >= g.hi()) continue;
      double e = exp_g(s, g, j.at);
      CHECK(exp_g_right(s, g, j.at) == doctest::Approx(e * (1 + lam * j.size)).epsilon(1e-14));
      auto q = q_spec(s, g);
      CHECK(q_transform(q, g, j.at) == doctest::Approx(lam).epsilon(1e-14));
    }
  }
}

TEST_CASE("lambda plus") {
  CHECK(choose_lambda_plus(fx::G1(), 2) == 1);
  auto big = Derivator::build({0, 3}, {0, 3}, {{1, 2}});
  CHECK(choose_lambda_plus(big, 0) == 0.25);
  auto small = Derivator::build({0, 3}, {0, 3}, {{1, 0.2}, {2, 0.4}});
  CHECK(choose_lambda_plus(small, 0) == 1);
  // jumps left of the tail start do not count
  CHECK(choose_lambda_plus(big, 1.5) == 1);
  CHECK(tail_constant(1) == doctest::Approx(4));
}

TEST_CASE("decaying exponential stays in (0, 1]") {
  auto g = Derivator::build({0, 5}, {0, 2}, {{1, 0.7}, {2.5, 3}});
  double lp = choose_lambda_plus(g, 0);
  auto s = ExpSpec::constant(-lp, 0);
  double prev = 1;
  for (int i = 0; i <= 100; ++i) {
    double e = exp_g(s, g, 5.0 * i / 100);
    CHECK(e > 0);
    CHECK(e <= prev);
    prev = e;
  }
}

TEST_CASE("extension operator") {
  auto g = Derivator::build({-2, 0, 1, 3}, {-2, 0, 0.5, 2}, {{-1, 0.5}, {0.5, 1}, {2, 2}});
  SobolevFunction one{-0.5, 1.5, 1, constant(0)};
  auto r = extend(one, g, {-2, 3}, 2);
  CHECK(r.core_max_diff == 0);
  for (double t : {-0.5, 0.0, 0.5, 1.0, 1.5}) CHECK(r.Pf(t) == 1);
  CHECK(r.lambda_minus == 1);
  CHECK(r.lambda_plus == 0.25);
  CHECK(r.off_core_ok);
  CHECK(r.off_core_sup <= 1);
  CHECK(r.w_ok);
  CHECK(r.lp_ok);
  CHECK(r.sup_ok);
  CHECK(r.boundary_left == 0);
  CHECK(r.boundary_right == 0);
  SobolevFunction zero{-0.5, 1.5, 0, constant(0)};
  auto z = extend(zero, g, {-2, 3}, 1);
  for (double t : {-2.0, -1.0, 0.7, 2.5, 3.0}) CHECK(z.Pf(t) == 0);
  CHECK(z.w_Pf == 0);
  CHECK(code_of([&] { extend(one, g, {-0.5, 3}, 2); }) == Errc::WindowTooSmall);
}
