#pragma once

#include <vector>

#include "stj/derivator.hpp"

namespace stj {

struct SampleGrid {
  std::vector<double> t;   // sorted, unique
  std::vector<double> gv;  // g(t)
  int uniform_n = 0;
  int cluster_n = 0;
  double cluster_ratio = 0;
};

// uniform points, breakpoints, jumps, constancy endpoints and a geometric cluster just
// right of every jump (d + h0 r^k)
SampleGrid sample_grid(const Derivator& g, int n, int cluster_n = 200, double ratio = 0.9);

std::vector<double> log_grid(double lo, double hi, int n);
// 10^-16 ... 10^0, half-decade steps; the bottom sits below the finest cluster spacing
std::vector<double> default_delta_grid();

// twice the largest g-distance between consecutive samples not separated by a jump:
// below this scale the grid cannot see variation
double grid_resolution(const SampleGrid& grid, const Derivator& g);

}  // namespace stj
