#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "stj/derivator.hpp"
#include "stj/function.hpp"

namespace stj {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadOptions {
  double tol = 1e-10;
  int max_intervals = 5000;
};

// Globally adaptive Gauss-Kronrod (7/15) over the sorted points `pts`; the integrand is never
// evaluated at any of them, so one-sided discontinuities there are harmless.
double gk_integrate(const std::function<double(double)>& F, const std::vector<double>& pts,
                    const QuadOptions& opt = {});

// Lebesgue-Stieltjes integral over [c, d): Lebesgue part through the pseudoinverse plus atoms.
double integrate(const GFunction& f, const Derivator& g, double c, double d, double tol = 1e-10);
double integrate_lebesgue_part(const GFunction& f, const Derivator& g, double c, double d,
                               double tol = 1e-10);
double integrate_atoms(const GFunction& f, const Derivator& g, double c, double d);
// same continuous part computed in the t variable, slope-weighted per linear piece
double integrate_continuous_part(const GFunction& f, const Derivator& g, double c, double d,
                                 double tol = 1e-10);

// left-tag Riemann-Stieltjes sum on n uniform cells refined by breakpoints, jumps and kinks
double integrate_direct(const GFunction& f, const Derivator& g, double c, double d, long n);
// Richardson combination 2 S(bisected grid) - S(grid) of the sum above
double integrate_direct_extrapolated(const GFunction& f, const Derivator& g, double c, double d,
                                     long n);

// Richardson extrapolation of q(h) as h -> 0+ over h0 / 2^j; nullopt if the Cauchy test fails
std::optional<double> extrapolate_to_zero(const std::function<double(double)>& q, double h0,
                                          double tol, int max_levels = 26, int max_order = 5);

// declared value if present (and allowed), else extrapolated
std::optional<double> right_limit(const GFunction& f, const Derivator& g, double d, double tol = 1e-9,
                                  bool use_declared = true);

struct DerivOptions {
  double tol = 1e-9;
  bool use_declared = true;
};

double g_derivative(const GFunction& f, const Derivator& g, double t, const DerivOptions& opt = {});

// u(t) = base + signed integral of the density from a to t, valid on the whole window
GFunction ftc_build(const SobolevFunction& s, const Derivator& g, double tol = 1e-13);

double sup_norm(const GFunction& f, const Derivator& g, double c, double d, int n = 2001);
double lp_norm(const GFunction& f, const Derivator& g, double p, double c, double d, double tol = 1e-10);
double sobolev_norm(const SobolevFunction& s, const Derivator& g, double p);

struct EmbeddingReport {
  double p = 1;
  double mu = 0;        // mu_g([a, b))
  double sup_u = 0;     // ||u||_0
  double lp_u = 0;
  double lp_density = 0;
  double C = 0;         // C(p, mu)
  double bound = 0;     // 2 C (||u||_p + ||u~||_p)
  bool pass = false;
};

EmbeddingReport embedding_check(const SobolevFunction& s, const Derivator& g, double p);
// the constant 2 C(p, mu) of the embedding of W^{1,p}_g into BC_g
double embedding_constant(double p, double mu);

}  // namespace stj
