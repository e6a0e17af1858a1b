#pragma once

#include <optional>
#include <vector>

#include "stj/derivator.hpp"
#include "stj/function.hpp"
#include "stj/grid.hpp"

namespace stj {

struct ModulusReport {
  std::vector<double> deltas;
  std::vector<double> omega;                  // uniform modulus per delta
  std::vector<double> t;                      // sample points
  std::vector<std::vector<double>> pointwise; // pointwise[i][k]: modulus at t[i], deltas[k]
  std::size_t members = 0;
  SampleGrid grid;

  // first delta in the grid that is >= x (the last one if none)
  std::size_t index_at_least(double x) const;
  double max_pointwise(std::size_t k) const;
};

ModulusReport g_modulus(const std::vector<GFunction>& family, const Derivator& g,
                        const SampleGrid& grid, std::vector<double> deltas, int threads = 1);
ModulusReport g_modulus(const std::vector<GFunction>& family, const Derivator& g,
                        std::vector<double> deltas, int sample_n, int threads = 1);

struct RightLimitEntry {
  double d = 0;
  std::optional<double> value;  // nullopt: no limit
  bool declared = false;
};

std::vector<RightLimitEntry> right_limit_table(const GFunction& f, const Derivator& g, double tol = 1e-9);

struct RegulatedReport {
  bool regulated = true;
  std::vector<double> witnesses;  // jump points without a right limit
  std::vector<RightLimitEntry> table;
};

RegulatedReport is_regulated(const GFunction& f, const Derivator& g, double tol = 1e-9);

// sup of g^{-1}(x) over the whole window; x must lie in g([A, B])
double sigma(const Derivator& g, double x);

struct FactorizationOptions {
  double recon_tol = 1e-9;
  double limit_tol = 1e-9;
  int sample_n = 400;
  // uniform precondition: omega(uniform_delta) <= uniform_eps; non-positive means automatic
  double uniform_delta = 0;
  double uniform_eps = 0;
};

struct FactorizationResult {
  std::vector<double> x;      // nodes of the piecewise-linear tilde_f
  std::vector<double> value;
  std::vector<std::pair<double, double>> sigma_table;  // (x, sigma(x))
  std::vector<Interval> gaps;                          // (g(d), g(d+)) filled linearly
  double max_error = 0;                                // over sample points
  double uniform_delta = 0, uniform_omega = 0;

  double operator()(double x) const;
};

FactorizationResult factorize(const GFunction& f, const Derivator& g, const FactorizationOptions& opt = {});

enum class FitMode { LeastSquares, ChebyshevNodes };

struct WeierstrassFit {
  std::vector<double> coefficients;  // monomial, increasing degree, in the variable g
  std::vector<double> chebyshev;     // in the normalized variable
  double x_lo = 0, x_hi = 0;         // normalization range
  double sup_error = 0;              // over the fit samples
  double condition = 0;

  double operator()(double x) const;  // Clenshaw on the Chebyshev form
};

WeierstrassFit weierstrass_fit(const GFunction& f, const Derivator& g, int degree, int sample_n = 400,
                               FitMode mode = FitMode::LeastSquares);

}  // namespace stj
