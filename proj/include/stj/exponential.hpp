#pragma once

#include <optional>
#include <vector>

#include "stj/calculus.hpp"
#include "stj/derivator.hpp"
#include "stj/function.hpp"

namespace stj {

struct ExpSpec {
  GFunction lam;             // rate lambda(t)
  std::optional<double> c;   // set when lambda is the constant c (closed-form path)
  double alpha = 0;

  static ExpSpec constant(double c, double alpha);
  static ExpSpec variable(GFunction lam, double alpha);
};

double lambda_tilde(const ExpSpec& s, const Derivator& g, double t);
double q_transform(const ExpSpec& s, const Derivator& g, double t);
// ExpSpec of q(lambda) with the same anchor
ExpSpec q_spec(const ExpSpec& s, const Derivator& g);

// forward for t >= alpha, backward (inverse of the forward from t) for t < alpha; the backward
// value is also computed through q(lambda) and the two must agree
double exp_g(const ExpSpec& s, const Derivator& g, double t);
// exp_g(t+) = exp_g(t) (1 + lambda(t) dg(t))
double exp_g_right(const ExpSpec& s, const Derivator& g, double t);
GFunction exp_g_function(const ExpSpec& s, const Derivator& g);

struct ExpResidualReport {
  double integral_residual = 0;  // max over grid pairs of |e(y) - e(x) - int_x^y lambda e dmu_g|
  double jump_residual = 0;      // max over atoms of |e(d+) - e(d)(1 + lambda dg)|
  double inverse_residual = 0;   // max over grid of |e(alpha, t) e(t, alpha) - 1|
  std::size_t pairs = 0;
};

ExpResidualReport verify_exp(const ExpSpec& s, const Derivator& g, const std::vector<double>& grid,
                             double tol = 1e-12);

double choose_lambda_plus(const Derivator& g, double tail_start);

struct ExtensionResult {
  double a = 0, b = 0;
  Interval window;
  double p = 1;
  double lambda_minus = 1, lambda_plus = 1;
  double C_lambda_minus = 0, C_lambda_plus = 0, C_embed = 0, C_tilde = 0;
  GFunction Pf;       // on window
  GFunction density;  // of Pf
  // measured
  double core_max_diff = 0;      // must be exactly 0
  double off_core_sup = 0;
  double off_core_bound = 0;     // max(|f(a)|, |f(b)|)
  double lp_Pf = 0, lp_f = 0;
  double w_Pf = 0, w_f = 0;
  double sup_Pf = 0, sup_f = 0;
  double boundary_left = 0, boundary_right = 0;  // |P-f(a) - f(a)|, |P+f(b) - f(b)|
  double concat_residual = 0;
  bool lp_ok = false, w_ok = false, sup_ok = false, off_core_ok = false;
};

// C(lambda) = (1 + lambda) max(1, 2 / lambda), the W^{1,p} bound of an exponential tail
double tail_constant(double lambda);

ExtensionResult extend(const SobolevFunction& s, const Derivator& g, Interval window, double p);

}  // namespace stj
