#include "stj/function.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "stj/error.hpp"

namespace stj {

namespace {

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// right limits of a pointwise combination at every point declared by either side
template <class Op>
std::map<double, double> combine_limits(const GFunction& a, const GFunction& b, Op op) {
  std::map<double, double> out;
  for (const auto& [d, va] : a.right_limits) {
    if (auto vb = b.declared_right_limit(d)) out[d] = op(va, *vb);
  }
  for (const auto& [d, vb] : b.right_limits) {
    if (out.count(d)) continue;
    if (auto va = a.declared_right_limit(d)) out[d] = op(*va, vb);
  }
  return out;
}

}  // namespace

std::optional<double> GFunction::declared_right_limit(double d) const {
  auto it = right_limits.find(d);
  if (it == right_limits.end()) return std::nullopt;
  return it->second;
}

double horner(const std::vector<double>& c, double x) {
  double s = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
  return s;
}

GFunction constant(double c) {
  GFunction f;
  f.f = [c](double) { return c; };
  f.gderiv = [](double) { return 0.0; };
  f.label = "const";
  return f;
}

GFunction polynomial(std::vector<double> coeffs) {
  GFunction f;
  f.f = [c = std::move(coeffs)](double t) { return horner(c, t); };
  f.label = "poly";
  return f;
}

GFunction piecewise(std::vector<double> breaks, std::vector<GFunction> pieces) {
  if (pieces.size() != breaks.size() + 1)
    fail(Errc::InvalidArgument, "piecewise needs one more piece than breaks");
  if (!std::is_sorted(breaks.begin(), breaks.end()) ||
      std::adjacent_find(breaks.begin(), breaks.end()) != breaks.end())
    fail(Errc::InvalidArgument, "piecewise breaks must be strictly increasing");
  GFunction f;
  std::vector<double> kinks = breaks;
  for (const auto& p : pieces) kinks = merged(kinks, p.kinks);
  // right limit at each break comes from the next piece
  for (std::size_t i = 0; i < breaks.size(); ++i) f.right_limits[breaks[i]] = pieces[i + 1](breaks[i]);
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (const auto& [d, v] : pieces[i].right_limits) {
      bool inside = (i == 0 || d > breaks[i - 1]) && (i == breaks.size() || d < breaks[i]);
      if (inside) f.right_limits[d] = v;
    }
  auto br = std::make_shared<const std::vector<double>>(std::move(breaks));
  auto pc = std::make_shared<const std::vector<GFunction>>(std::move(pieces));
  f.f = [br, pc](double t) {
    auto it = std::lower_bound(br->begin(), br->end(), t);
    return (*pc)[static_cast<std::size_t>(it - br->begin())](t);
  };
  f.kinks = std::move(kinks);
  f.label = "piecewise";
  return f;
}

GFunction piecewise_polynomial(std::vector<double> breaks, std::vector<std::vector<double>> coeffs) {
  std::vector<GFunction> pieces;
  for (auto& c : coeffs) pieces.push_back(polynomial(std::move(c)));
  return piecewise(std::move(breaks), std::move(pieces));
}

GFunction compose_with_g(Eval h, const Derivator& g, std::string label) {
  GFunction f;
  for (const auto& j : g.jumps()) f.right_limits[j.at] = h(g.eval_right(j.at));
  f.kinks = g.events(g.lo(), g.hi());
  f.f = [h = std::move(h), g](double t) { return h(g.eval(t)); };
  f.label = std::move(label);
  return f;
}

GFunction indicator(double lo, double hi, bool include_lo, bool include_hi) {
  GFunction f;
  f.f = [=](double t) {
    bool left = include_lo ? t >= lo : t > lo;
    bool right = include_hi ? t <= hi : t < hi;
    return (left && right) ? 1.0 : 0.0;
  };
  f.kinks = lo == hi ? std::vector<double>{lo} : std::vector<double>{lo, hi};
  if (lo < hi) {
    f.right_limits[lo] = 1.0;
    f.right_limits[hi] = 0.0;
  } else {
    f.right_limits[lo] = 0.0;
  }
  f.label = "indicator";
  return f;
}

GFunction step_table(std::vector<double> at, std::vector<double> values) {
  if (values.size() != at.size() + 1) fail(Errc::InvalidArgument, "step table needs one more value than steps");
  std::vector<GFunction> pieces;
  for (double v : values) pieces.push_back(constant(v));
  GFunction f = piecewise(std::move(at), std::move(pieces));
  f.label = "step_table";
  return f;
}

GFunction oscillating(double d) {
  GFunction f;
  f.f = [d](double t) { return t > d ? std::sin(1.0 / (t - d)) : t; };
  f.kinks = {d};
  f.label = "oscillating";
  return f;
}

GFunction operator+(const GFunction& a, const GFunction& b) {
  GFunction f;
  f.f = [fa = a.f, fb = b.f](double t) { return fa(t) + fb(t); };
  f.right_limits = combine_limits(a, b, [](double x, double y) { return x + y; });
  if (a.gderiv && b.gderiv) f.gderiv = [x = a.gderiv, y = b.gderiv](double t) { return x(t) + y(t); };
  f.kinks = merged(a.kinks, b.kinks);
  if (a.jump_tail && b.jump_tail) f.jump_tail = *a.jump_tail + *b.jump_tail;
  f.label = a.label + "+" + b.label;
  return f;
}

GFunction scale(const GFunction& a, double c) {
  GFunction f;
  f.f = [fa = a.f, c](double t) { return c * fa(t); };
  for (const auto& [d, v] : a.right_limits) f.right_limits[d] = c * v;
  if (a.gderiv) f.gderiv = [x = a.gderiv, c](double t) { return c * x(t); };
  f.kinks = a.kinks;
  if (a.jump_tail) f.jump_tail = std::abs(c) * *a.jump_tail;
  f.label = a.label;
  return f;
}

GFunction operator-(const GFunction& a, const GFunction& b) { return a + scale(b, -1.0); }

GFunction abs_pow(const GFunction& a, double p) {
  GFunction f;
  f.f = [fa = a.f, p](double t) { return p == 1.0 ? std::abs(fa(t)) : std::pow(std::abs(fa(t)), p); };
  for (const auto& [d, v] : a.right_limits) f.right_limits[d] = std::pow(std::abs(v), p);
  f.kinks = a.kinks;
  f.label = "|" + a.label + "|^p";
  return f;
}

}  // namespace stj

namespace stj {

GFunction of_derivator(const Derivator& g) {
  GFunction f;
  for (const auto& j : g.jumps()) f.right_limits[j.at] = g.eval_right(j.at);
  f.kinks = g.events(g.lo(), g.hi());
  f.f = [g](double t) { return g.eval(t); };
  f.gderiv = [](double) { return 1.0; };
  f.label = "g";
  return f;
}

}  // namespace stj
