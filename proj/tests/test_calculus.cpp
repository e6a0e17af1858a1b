#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stj/calculus.hpp"
#include "stj/error.hpp"
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

TEST_CASE("integrals on G1") {
  auto g = fx::G1();
  CHECK(integrate(constant(1), g, -1, 2) == doctest::Approx(3.5).epsilon(1e-13));
  CHECK(integrate(polynomial({0, 1}), g, -1, 2) == doctest::Approx(1.125).epsilon(1e-13));
  CHECK(integrate(polynomial({3, 2, 1}), g, 0.3, 0.3) == 0);
  CHECK(integrate(constant(0), g, -1, 2) == 0);
  // the atom at 0 counts on [0, d) but not on [c, 0)
  CHECK(integrate(constant(1), g, 0, 0.5) == doctest::Approx(1.5));
  CHECK(integrate(constant(1), g, -1, 0) == doctest::Approx(1.0));
  CHECK(integrate_atoms(polynomial({2}), g, -1, 2) == doctest::Approx(2.0));
  CHECK(code_of([&] { integrate(constant(1), g, -2, 1); }) == Errc::OutOfWindow);
}

TEST_CASE("direct Riemann-Stieltjes oracle") {
  auto g = fx::G1();
  CHECK(integrate_direct(polynomial({0, 1}), g, -1, 2, 100000) == doctest::Approx(1.125).epsilon(1e-4));
  CHECK(integrate_direct(indicator(0, 0.5), g, -1, 2, 1000) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(integrate_direct(constant(0), g, -1, 2, 1000) == 0);
  CHECK(integrate_direct_extrapolated(polynomial({0, 1}), g, -1, 2, 1000) == doctest::Approx(1.125).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature") {
  CHECK(gk_integrate([](double x) { return std::sqrt(x); }, {0, 1}) == doctest::Approx(2.0 / 3).epsilon(1e-11));
  CHECK(gk_integrate([](double x) { return x < 0.3 ? 1.0 : 2.0; }, {0, 0.3, 1}) == doctest::Approx(1.7).epsilon(1e-14));
  CHECK(code_of([] { gk_integrate([](double x) { return 1 / x; }, {0, 1}); }) == Errc::QuadratureFailure);
}

TEST_CASE("extrapolation to zero") {
  auto v = extrapolate_to_zero([](double h) { return 2 + 3 * h + h * h; }, 0.1, 1e-12);
  REQUIRE(v);
  CHECK(*v == doctest::Approx(2).epsilon(1e-12));
  CHECK(!extrapolate_to_zero([](double h) { return std::sin(1 / h); }, 0.1, 1e-9));
}

TEST_CASE("right limits") {
  auto g = fx::G1();
  CHECK(*right_limit(of_derivator(g), g, 0) == 1);
  auto undeclared = of_derivator(g);
  undeclared.right_limits.clear();
  CHECK(*right_limit(undeclared, g, 0, 1e-9, false) == doctest::Approx(1).epsilon(1e-9));
  CHECK(!right_limit(oscillating(0), fx::unit_jump(), 0));
}

TEST_CASE("g-derivative branches") {
  auto g = fx::G1();
  CHECK(g_derivative(of_derivator(g), g, 0) == doctest::Approx(1));
  CHECK(g_derivative(polynomial({0, 1}), g, 0) == doctest::Approx(0).epsilon(1e-9));
  CHECK(g_derivative(polynomial({0, 1}), g, 0.7) == doctest::Approx(1).epsilon(1e-8));
  CHECK(g_derivative(polynomial({0, 0, 1}), g, -0.3) == doctest::Approx(-0.6).epsilon(1e-8));
  CHECK(g_derivative(polynomial({0, 0, 1}), g, 1.5) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(code_of([&] { g_derivative(polynomial({0, 1}), g, 0.5); }) == Errc::DegenerateDenominator);
  CHECK(code_of([&] { g_derivative(polynomial({0, 1}), g, 1); }) == Errc::DegenerateDenominator);
  CHECK(code_of([&] { g_derivative(oscillating(0), fx::unit_jump(), 0); }) == Errc::NoLimit);
  auto id = fx::identity(-1, 1);
  GFunction kink;
  kink.f = [](double t) { return std::abs(t - 0.25); };
  CHECK(code_of([&] { g_derivative(kink, id, 0.25); }) == Errc::NoLimit);
}

TEST_CASE("FTC on G1") {
  auto g = fx::G1();
  GFunction u = ftc_build({-1, 2, 0, constant(1)}, g);
  for (double t : {-1.0, -0.5, 0.0, 0.25, 0.7, 1.0, 1.5, 2.0}) CHECK(u(t) == doctest::Approx(g.eval(t) + 1).epsilon(1e-13));
  CHECK(*u.declared_right_limit(0) - u(0) == doctest::Approx(1).epsilon(1e-13));
  GFunction z = ftc_build({-1, 2, 0.7, constant(0)}, g);
  for (double t : {-1.0, 0.0, 0.9, 2.0}) CHECK(z(t) == 0.7);
}

TEST_CASE("norms") {
  auto g = fx::G1();
  CHECK(lp_norm(constant(1), g, 1, -1, 2) == doctest::Approx(3.5));
  for (double p : {1.0, 2.0, 7.0, kInf}) CHECK(lp_norm(constant(0), g, p, -1, 2) == 0);
  CHECK(lp_norm(indicator(0, 0, true, true), g, 2, -1, 2) == doctest::Approx(1).epsilon(1e-12));
  CHECK(lp_norm(of_derivator(g), g, kInf, -1, 2) == doctest::Approx(2.5));
  CHECK(sobolev_norm({-1, 2, 1, constant(0)}, g, 1) == doctest::Approx(3.5));
  CHECK(sobolev_norm({-1, 2, 0, constant(0)}, g, 2) == 0);
  CHECK(sobolev_norm({-1, 2, 0, constant(1)}, g, kInf) == doctest::Approx(4.5));
  CHECK(code_of([&] { lp_norm(constant(1), g, 0.5, -1, 2); }) == Errc::InvalidArgument);
}

TEST_CASE("embedding") {
  auto g = fx::G1();
  auto e = embedding_check({-1, 2, 0, constant(1)}, g, 1);
  CHECK(e.sup_u == doctest::Approx(3.5));
  CHECK(e.pass);
  CHECK(e.sup_u <= 2 * 1 * (e.lp_u + 3.5));
  auto z = embedding_check({-1, 2, 0, constant(0)}, g, 2);
  CHECK(z.sup_u == 0);
  CHECK(z.bound == 0);
  CHECK(z.pass);
  CHECK(embedding_constant(1, 3.5) == doctest::Approx(2.0));
  CHECK(std::isinf(embedding_constant(2, 0)));
}

TEST_CASE("property: decomposition identity and oracle agreement") {
  fx::Rng r(77);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = fx::random_derivator(r);
    auto f = fx::random_piecewise_poly(r, g);
    auto ab = fx::random_points(r, g.lo(), g.hi(), 2);
    double lhs = integrate(f, g, ab[0], ab[1]);
    double rhs = integrate_continuous_part(f, g, ab[0], ab[1]) + integrate_atoms(f, g, ab[0], ab[1]);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)));
    double oracle = integrate_direct_extrapolated(f, g, ab[0], ab[1], 20000);
    CHECK(std::abs(lhs - oracle) <= 1e-6 * (1 + std::abs(lhs)));
    // linearity
    auto h = fx::random_piecewise_poly(r, g);
    double lin = integrate(f + scale(h, 2.5), g, ab[0], ab[1]);
    CHECK(std::abs(lin - lhs - 2.5 * integrate(h, g, ab[0], ab[1])) <= 1e-9 * (1 + std::abs(lin)));
    // integrating 1 recovers the measure
    CHECK(std::abs(integrate(constant(1), g, ab[0], ab[1]) - measure(g, {{ab[0], ab[1]}})) <= 1e-12 * (1 + std::abs(lhs)));
  }
}

TEST_CASE("property: FTC outputs are constant on constancy intervals and left-continuous") {
  fx::Rng r(5150);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = fx::random_derivator(r);
    auto dens = fx::random_piecewise_poly(r, g);
    GFunction u = ftc_build({g.lo(), g.hi(), r.uniform(-1, 1), dens}, g);
    for (const auto& iv : g.classify().constancy_intervals) {
      // an atom at iv.lo enters just right of it
      double v0 = u(iv.lo + (iv.hi - iv.lo) / 5.0);
      for (int i = 2; i <= 5; ++i) CHECK(u(iv.lo + (iv.hi - iv.lo) * i / 5.0) == doctest::Approx(v0).epsilon(1e-13));
    }
    for (double t : fx::random_points(r, g.lo() + 1e-3, g.hi(), 10)) CHECK(std::abs(u(t - 1e-10) - u(t)) <= 1e-8);
    for (const auto& j : g.jumps())
      if (j.at < g.hi()) CHECK(*u.declared_right_limit(j.at) - u(j.at) == doctest::Approx(dens(j.at) * j.size).epsilon(1e-12));
  }
}

TEST_CASE("property: Lp norms increase with p on a probability measure") {
  fx::Rng r(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto g0 = fx::random_derivator(r);
    double total = measure(g0, {{g0.lo(), g0.hi()}});
    std::vector<double> cv;
    for (double v : g0.cont_values()) cv.push_back(v / total);
    std::vector<Jump> js;
    for (auto j : g0.jumps()) js.push_back({j.at, j.size / total});
    auto g = Derivator::build(g0.breakpoints(), cv, js);
    auto f = fx::random_piecewise_poly(r, g);
    double prev = 0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
      double n = lp_norm(f, g, p, g.lo(), g.hi());
      CHECK(n >= prev * (1 - 1e-10));
      prev = n;
    }
  }
}
