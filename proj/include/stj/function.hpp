#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stj/derivator.hpp"

namespace stj {

using Eval = std::function<double(double)>;

struct GFunction {
  Eval f;
  std::map<double, double> right_limits;  // declared f(d+)
  Eval gderiv;                            // declared f'_g, may be empty
  std::vector<double> kinks;              // points where f may be non-smooth
  std::optional<double> jump_tail;        // bound on jump mass beyond the stored atoms
  std::string label;

  double operator()(double t) const { return f(t); }
  std::optional<double> declared_right_limit(double d) const;
};

struct SobolevFunction {
  double a = 0;
  double b = 0;
  double base_value = 0;  // u(a)
  GFunction density;      // u tilde
};

GFunction constant(double c);
// coefficients in increasing degree
GFunction polynomial(std::vector<double> coeffs);
double horner(const std::vector<double>& coeffs, double x);

// left-continuous: piece i lives on (breaks[i-1], breaks[i]], the first piece also covers
// everything left of breaks[0], the last one everything right of breaks.back()
GFunction piecewise(std::vector<double> breaks, std::vector<GFunction> pieces);
GFunction piecewise_polynomial(std::vector<double> breaks, std::vector<std::vector<double>> coeffs);

// h o g with right limits h(g(d+)) declared at every jump (h assumed continuous)
GFunction compose_with_g(Eval h, const Derivator& g, std::string label = "h(g)");

GFunction indicator(double lo, double hi, bool include_lo = true, bool include_hi = false);

// left-continuous step function: value[0] on t <= at[0], value[k] on (at[k-1], at[k]], ...
GFunction step_table(std::vector<double> at, std::vector<double> values);

// sin(1/(t-d)) for t > d, t for t <= d
GFunction oscillating(double d);

GFunction operator+(const GFunction& a, const GFunction& b);
GFunction operator-(const GFunction& a, const GFunction& b);
GFunction scale(const GFunction& a, double c);
GFunction abs_pow(const GFunction& a, double p);

}  // namespace stj

namespace stj {
// g itself as a GFunction, right limits and g-derivative 1 declared
GFunction of_derivator(const Derivator& g);
}  // namespace stj
