#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "stj/derivator.hpp"
#include "stj/function.hpp"

namespace fx {

using namespace stj;

inline Derivator G1() { return Derivator::build({-1, 0.5, 1, 2}, {-1, 0.5, 0.5, 1.5}, {{0, 1}}); }

// g(t) = t for t <= 0, t + 1 for t > 0, on [-1, 1]
inline Derivator unit_jump(double lo = -1, double hi = 1) {
  return Derivator::build({lo, hi}, {lo, hi}, {{0, 1}});
}

inline Derivator identity(double lo, double hi) { return Derivator::build({lo, hi}, {lo, hi}); }

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }
inline bool near_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(unsigned long long seed) : eng(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
  bool coin(double p) { return uniform(0, 1) < p; }
};

struct DerivatorShape {
  int max_pieces = 5;
  int max_jumps = 3;
  double flat_prob = 0.25;
  double jump_at_breakpoint_prob = 0.3;
  double min_jump = 0.1, max_jump = 2.0;
};

// random piecewise-linear g^C (some flat pieces) plus a few atoms
inline Derivator random_derivator(Rng& r, const DerivatorShape& s = {}) {
  const double A = r.uniform(-2, 0), B = A + r.uniform(1, 4);
  const int pieces = r.integer(1, s.max_pieces);
  std::vector<double> bp{A};
  for (int i = 1; i < pieces; ++i) bp.push_back(r.uniform(A, B));
  bp.push_back(B);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<double> cv{r.uniform(-1, 1)};
  bool any_rise = false;
  for (std::size_t i = 1; i < bp.size(); ++i) {
    double slope = r.coin(s.flat_prob) ? 0.0 : r.uniform(0.2, 2.0);
    if (i + 1 == bp.size() && !any_rise) slope = r.uniform(0.2, 2.0);
    any_rise = any_rise || slope > 0;
    cv.push_back(cv.back() + slope * (bp[i] - bp[i - 1]));
  }
  std::vector<Jump> js;
  const int nj = r.integer(0, s.max_jumps);
  for (int k = 0; k < nj; ++k) {
    double d = r.coin(s.jump_at_breakpoint_prob) ? bp[static_cast<std::size_t>(r.integer(0, static_cast<int>(bp.size()) - 2))]
                                                 : r.uniform(A, B);
    bool dup = false;
    for (const auto& j : js) dup = dup || std::abs(j.at - d) < 1e-3;
    if (!dup && d < B) js.push_back({d, r.uniform(s.min_jump, s.max_jump)});
  }
  return Derivator::build(bp, cv, js);
}

// left-continuous piecewise polynomial (degree <= 3) with right limits declared at its breaks
inline GFunction random_piecewise_poly(Rng& r, const Derivator& g, int max_breaks = 2, int max_degree = 3) {
  std::vector<double> breaks;
  const int nb = r.integer(0, max_breaks);
  for (int i = 0; i < nb; ++i) {
    if (!g.jumps().empty() && r.coin(0.3))
      breaks.push_back(g.jumps()[static_cast<std::size_t>(r.integer(0, static_cast<int>(g.jumps().size()) - 1))].at);
    else
      breaks.push_back(r.uniform(g.lo(), g.hi()));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<std::vector<double>> coeffs;
  for (std::size_t i = 0; i <= breaks.size(); ++i) {
    std::vector<double> c;
    const int deg = r.integer(0, max_degree);
    for (int k = 0; k <= deg; ++k) c.push_back(r.uniform(-2, 2));
    coeffs.push_back(c);
  }
  return piecewise_polynomial(breaks, coeffs);
}

inline std::vector<double> random_points(Rng& r, double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(r.uniform(lo, hi));
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace fx
