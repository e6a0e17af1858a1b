#include "stj/grid.hpp"

#include <algorithm>
#include <cmath>

#include "stj/error.hpp"

namespace stj {

SampleGrid sample_grid(const Derivator& g, int n, int cluster_n, double ratio) {
  if (n < 2) fail(Errc::InvalidArgument, "sample_n must be at least 2");
  SampleGrid s;
  s.uniform_n = n;
  s.cluster_n = cluster_n;
  s.cluster_ratio = ratio;
  const double A = g.lo(), B = g.hi();
  for (int i = 0; i < n; ++i) s.t.push_back(i + 1 == n ? B : A + (B - A) * i / (n - 1));
  auto ev = g.events(A, B);
  s.t.insert(s.t.end(), ev.begin(), ev.end());
  for (const auto& iv : g.classify().constancy_intervals) {
    s.t.push_back(iv.lo);
    s.t.push_back(iv.hi);
  }
  for (const auto& j : g.jumps()) {
    auto nx = std::upper_bound(ev.begin(), ev.end(), j.at);
    double next = nx == ev.end() ? B : *nx;
    double h = std::min(next - j.at, (B - A) / (n - 1));
    for (int k = 0; k < cluster_n; ++k) {
      h *= ratio;
      double t = j.at + h;
      if (t > j.at) s.t.push_back(t);
    }
  }
  std::sort(s.t.begin(), s.t.end());
  s.t.erase(std::unique(s.t.begin(), s.t.end()), s.t.end());
  for (double t : s.t) s.gv.push_back(g.eval(t));
  return s;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  if (n == 1) return {hi};
  for (int i = 0; i < n; ++i)
    out.push_back(i == 0 ? lo : i + 1 == n ? hi : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
  return out;
}

std::vector<double> default_delta_grid() { return log_grid(1e-16, 1.0, 33); }

double grid_resolution(const SampleGrid& grid, const Derivator& g) {
  double r = 0;
  for (std::size_t i = 0; i + 1 < grid.t.size(); ++i) {
    double a = grid.t[i], b = grid.t[i + 1];
    bool jump_between = false;
    for (const auto& j : g.jumps())
      if (j.at >= a && j.at < b) jump_between = true;
    if (!jump_between) r = std::max(r, grid.gv[i + 1] - grid.gv[i]);
  }
  return 2 * r;
}

}  // namespace stj
