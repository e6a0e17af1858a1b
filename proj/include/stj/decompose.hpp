#pragma once

#include <optional>
#include <vector>

#include "stj/derivator.hpp"
#include "stj/function.hpp"

namespace stj {

struct JumpEntry {
  double d = 0;
  double f_left = 0;   // f(d)
  double f_right = 0;  // f(d+)
  double delta_f = 0;
  bool declared = false;  // right limit taken from the declared table
};

struct JumpSeries {
  std::vector<JumpEntry> atoms;     // by position
  std::vector<std::size_t> order;   // indices into atoms by decreasing |delta_f|
  double sum_abs = 0;
  std::optional<double> error_bar;  // bound on the mass beyond the stored atoms; nullopt if unknown
  bool decomposable = false;
  bool extrapolated = false;        // some right limit was not declared
};

// Throws NoRightLimit when some jump point has no right limit.
JumpSeries jump_series(const GFunction& f, const Derivator& g, double tol = 1e-9);

struct AdditiveSplit {
  GFunction fB, fC;
  JumpSeries jumps;
  double jump_sum = 0;
  std::vector<std::pair<double, double>> continuity_residuals;  // (d, |fC(d+) - fC(d)|)
  double max_residual = 0;
  double integral_discrepancy = 0;  // running sum vs integral of h = df/dg on D_g
  double reconstruction_error = 0;  // max |fB + fC - f| over the sample grid
};

AdditiveSplit additive_split(const GFunction& f, const Derivator& g, double tol = 1e-9);

double dc_norm(const GFunction& f, const Derivator& g, double tol = 1e-9);

struct MultiplicativeSplit {
  GFunction phi, psi;
  double alpha = 0;
  double log_sum = 0;
  std::vector<double> d_gf;
  std::vector<std::pair<double, double>> phi_steps;  // (d, phi(d+)) in position order
  double form_discrepancy = 0;   // max spread of the three expressions for phi
  std::vector<std::pair<double, double>> psi_residuals;  // (d, |psi(d+) - psi(d)|)
  double max_psi_residual = 0;
  double reconstruction_error = 0;  // max |phi psi - f|
  double phi_min = 0;
  double positivity_bound = 0;      // exp(-log_sum)
};

// Real mode: log_alpha differences reduce to ln|f(d+)| - ln|f(d)|; alpha is recorded but any
// sign change across an atom is a BranchViolation.
MultiplicativeSplit multiplicative_split(const GFunction& f, const Derivator& g, double alpha = 0,
                                         double tol = 1e-9);

}  // namespace stj
