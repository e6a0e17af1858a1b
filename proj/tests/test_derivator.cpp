#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stj/derivator.hpp"
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

TEST_CASE("G1 evaluation") {
  auto g = fx::G1();
  CHECK(g.eval(0) == 0);
  CHECK(g.eval_right(0) == 1);
  CHECK(g.delta(0) == 1);
  CHECK(g.delta(0.7) == 0);
  CHECK(g.eval(1.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.eval(2) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(g.eval(-1) == -1);
  CHECK(code_of([&] { g.eval(2.5); }) == Errc::OutOfWindow);
  CHECK(code_of([&] { g.eval_right(2); }) == Errc::OutOfWindow);
}

TEST_CASE("construction errors") {
  CHECK(code_of([] { Derivator::build({0, 1, 2}, {0, -1, 0}); }) == Errc::NonMonotone);
  CHECK(code_of([] { Derivator::build({-1, 0.5, 1, 2}, {-1, 0.5, 0.5, 1.5}, {{2, 1}}); }) == Errc::JumpOutOfWindow);
  CHECK(code_of([] { Derivator::build({0, 1}, {0, 1}, {{0.5, 1}, {0.5, 2}}); }) == Errc::DuplicateJump);
  CHECK(code_of([] { Derivator::build({0, 1}, {0, 1}, {{0.5, 0}}); }) == Errc::NonPositiveJump);
  CHECK(code_of([] { Derivator::build({0, 0}, {0, 1}); }) == Errc::InvalidBreakpoints);
  CHECK(code_of([] { Derivator::build({0, 1}, {0}); }) == Errc::InvalidBreakpoints);
  CHECK(is_validation(code_of([] { Derivator::build({0, 1}, {1, 0}); })));
}

TEST_CASE("classification") {
  auto pc = fx::G1().classify();
  CHECK(pc.jump_points == std::vector<double>{0});
  REQUIRE(pc.constancy_intervals.size() == 1);
  CHECK(pc.constancy_intervals[0] == Interval{0.5, 1});
  CHECK(pc.n_minus == std::vector<double>{0.5});
  CHECK(pc.n_plus == std::vector<double>{1});

  auto strict = Derivator::build({0, 1, 3}, {0, 2, 3});
  auto ps = strict.classify();
  CHECK(ps.jump_points.empty());
  CHECK(ps.constancy_intervals.empty());
  CHECK(ps.n_minus.empty());
  CHECK(ps.n_plus.empty());

  // flat on [0.5, 1] with an atom inside
  auto split_flat = Derivator::build({0, 0.5, 1, 2}, {0, 0.5, 0.5, 1.5}, {{0.7, 1}});
  auto pf = split_flat.classify();
  REQUIRE(pf.constancy_intervals.size() == 2);
  CHECK(pf.constancy_intervals[0] == Interval{0.5, 0.7});
  CHECK(pf.constancy_intervals[1] == Interval{0.7, 1});
  CHECK(std::find(pf.n_minus.begin(), pf.n_minus.end(), 0.7) == pf.n_minus.end());
  CHECK(std::find(pf.n_plus.begin(), pf.n_plus.end(), 0.7) == pf.n_plus.end());
  CHECK(split_flat.in_N(0.5));
  CHECK(!split_flat.in_N(0.7));
}

TEST_CASE("flat pieces touching the window ends stay out of N") {
  auto g = Derivator::build({0, 1, 2, 3}, {0, 0, 1, 1});
  auto pc = g.classify();
  CHECK(pc.constancy_intervals.size() == 2);
  CHECK(pc.n_plus == std::vector<double>{1});
  CHECK(pc.n_minus == std::vector<double>{2});
}

TEST_CASE("pseudoinverse on G1") {
  auto gamma = fx::G1().pseudoinverse();
  CHECK(gamma(-1) == -1);
  CHECK(gamma(0.2) == doctest::Approx(0.2));
  CHECK(gamma(0.5) == 0.5);
  CHECK(gamma(0.75) == doctest::Approx(1.25));
  CHECK(gamma(1.5) == 2);
  CHECK(code_of([&] { gamma(1.6); }) == Errc::OutOfRange);
  auto id = fx::identity(-3, 5).pseudoinverse();
  for (double x : {-3.0, -1.0, 0.0, 2.5, 5.0}) CHECK(id(x) == x);
}

TEST_CASE("measure") {
  auto g = fx::G1();
  CHECK(measure(g, {{-1, 2}}) == doctest::Approx(3.5));
  CHECK(measure(g, {{0.3, 0.3}}) == 0);
  CHECK(measure(g, {{0.5, 1}}) == 0);
  CHECK(measure(g, {{0, 0.5}}) == doctest::Approx(1.5));
  CHECK(code_of([&] { measure(g, {{0, 1}, {0.5, 1.5}}); }) == Errc::OverlappingIntervals);
  CHECK(code_of([&] { measure(g, {{-2, 1}}); }) == Errc::OutOfWindow);
}

TEST_CASE("split on fixtures") {
  auto g = fx::G1();
  auto s = g.split();
  CHECK(s.continuous.jumps().empty());
  CHECK(s.jump.jumps() == g.jumps());
  CHECK(s.jump.eval(0) == 0);
  CHECK(s.jump.eval(0.1) == 1);
  CHECK(s.continuous.eval(-1) == 0);
  CHECK(s.continuous.eval(0.75) == s.continuous.eval(0.5));

  auto smooth = Derivator::build({0, 1}, {0, 2});
  auto ss = smooth.split();
  for (double t : {0.0, 0.3, 1.0}) CHECK(ss.jump.eval(t) == 0);

  auto pure = Derivator::build({0, 1}, {0, 0}, {{0.25, 1}, {0.5, 2}});
  auto sp = pure.split();
  for (double t : {0.0, 0.3, 0.9}) CHECK(sp.continuous.eval(t) == 0);
}

TEST_CASE("property: monotone, split identity, pseudoinverse laws, measure decomposition") {
  fx::Rng r(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = fx::random_derivator(r);
    auto pts = fx::random_points(r, g.lo(), g.hi(), 300);
    for (double t : g.events(g.lo(), g.hi())) pts.push_back(t);
    std::sort(pts.begin(), pts.end());
    auto parts = g.split();
    double prev = -1e300;
    for (double t : pts) {
      double v = g.eval(t);
      CHECK(v >= prev);
      prev = v;
      CHECK(std::abs(parts.continuous.eval(t) + parts.jump.eval(t) + parts.offset - v) <= 1e-12 * (1 + std::abs(v)));
    }
    // left continuity on the breakpoint-refined grid
    for (double t : pts) {
      if (t == g.lo()) continue;
      double h = std::min(1e-9, (t - g.lo()) / 2);
      CHECK(std::abs(g.eval(t - h) - g.eval(t)) <= 1e-8);
    }
    auto gamma = g.pseudoinverse();
    double last_gamma = -1e300;
    for (int i = 0; i <= 200; ++i) {
      double x = i == 200 ? gamma.hi() : gamma.lo() + (gamma.hi() - gamma.lo()) * i / 200.0;
      double t = gamma(x);
      CHECK(std::abs(g.cont(t) - x) <= 1e-12 * (1 + std::abs(x)));
      if (i > 0 && gamma.hi() > gamma.lo()) CHECK(t > last_gamma);
      last_gamma = t;
    }
    auto pc = parts.continuous.classify();  // flats of g^C
    for (double t : pts) {
      double back = gamma(g.cont(t));
      CHECK(back <= t + 1e-12);
      bool in_c = false;
      for (const auto& iv : pc.constancy_intervals) in_c = in_c || (t > iv.lo && t < iv.hi);
      // points of N+ and the right ends of boundary flats map back to the flat's left end
      bool right_end = false;
      for (const auto& iv : pc.constancy_intervals) right_end = right_end || t == iv.hi;
      if (!in_c && !right_end) CHECK(std::abs(back - t) <= 1e-12 * (1 + std::abs(t)));
    }
    // random union of disjoint intervals
    auto cuts = fx::random_points(r, g.lo(), g.hi(), 6);
    std::vector<Interval> E{{cuts[0], cuts[1]}, {cuts[2], cuts[3]}, {cuts[4], cuts[5]}};
    double lhs = measure(g, E);
    double rhs = measure(parts.continuous, E);
    for (const auto& j : g.jumps())
      for (const auto& iv : E)
        if (j.at >= iv.lo && j.at < iv.hi) rhs += j.size;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(lhs)));
  }
}
