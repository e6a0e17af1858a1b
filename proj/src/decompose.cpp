#include "stj/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "stj/calculus.hpp"
#include "stj/error.hpp"
#include "stj/grid.hpp"

namespace stj {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// f(d+) of a function with no declared limits, or +inf when it does not settle
double residual_at(const GFunction& h, const Derivator& g, double d, double tol) {
  auto r = right_limit(h, g, d, tol, false);
  return r ? std::abs(*r - h(d)) : kInf;
}

}  // namespace

JumpSeries jump_series(const GFunction& f, const Derivator& g, double tol) {
  JumpSeries js;
  for (const auto& j : g.jumps()) {
    JumpEntry e;
    e.d = j.at;
    e.f_left = f(j.at);
    if (auto v = f.declared_right_limit(j.at)) {
      e.f_right = *v;
      e.declared = true;
    } else {
      auto r = right_limit(f, g, j.at, tol, false);
      if (!r) fail(Errc::NoRightLimit, "f has no right limit at " + num(j.at));
      e.f_right = *r;
      js.extrapolated = true;
    }
    e.delta_f = e.f_right - e.f_left;
    js.atoms.push_back(e);
  }
  js.order.resize(js.atoms.size());
  std::iota(js.order.begin(), js.order.end(), 0);
  std::stable_sort(js.order.begin(), js.order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(js.atoms[a].delta_f) > std::abs(js.atoms[b].delta_f);
  });
  for (std::size_t k : js.order) js.sum_abs += std::abs(js.atoms[k].delta_f);
  if (f.jump_tail) js.error_bar = *f.jump_tail;
  else if (!g.tail_bound() || *g.tail_bound() == 0) js.error_bar = 0.0;
  js.decomposable = std::isfinite(js.sum_abs) && js.error_bar.has_value();
  return js;
}

AdditiveSplit additive_split(const GFunction& f, const Derivator& g, double tol) {
  AdditiveSplit s;
  s.jumps = jump_series(f, g, tol);
  if (!s.jumps.decomposable)
    fail(Errc::NotDecomposable, s.jumps.error_bar ? "jump sum is not finite"
                                                  : "jump mass beyond the stored atoms is unknown");
  s.jump_sum = s.jumps.sum_abs;

  auto steps = std::make_shared<std::vector<std::pair<double, double>>>();
  double run = 0;
  for (const auto& e : s.jumps.atoms) {
    run += e.delta_f;
    steps->emplace_back(e.d, run);
  }
  const double a = g.lo();
  auto fb_eval = [steps, a](double t) {
    // sum over d in [a, t)
    double v = 0;
    for (const auto& [d, cum] : *steps) {
      if (d >= a && d < t) v = cum;
      else if (d >= t) break;
    }
    return v;
  };
  s.fB.f = fb_eval;
  for (const auto& [d, cum] : *steps) s.fB.right_limits[d] = cum;
  s.fB.gderiv = {};
  s.fB.kinks = g.events(g.lo(), g.hi());
  s.fB.label = "fB";

  s.fC.f = [ff = f.f, fb_eval](double t) { return ff(t) - fb_eval(t); };
  s.fC.kinks = f.kinks;
  s.fC.label = "fC";

  // fB as the integral of h = df/dg on the jump points
  GFunction h;
  auto hv = std::make_shared<std::vector<std::pair<double, double>>>();
  for (const auto& e : s.jumps.atoms) hv->emplace_back(e.d, e.delta_f / g.delta(e.d));
  h.f = [hv](double t) {
    for (const auto& [d, v] : *hv)
      if (d == t) return v;
    return 0.0;
  };
  h.kinks = s.fB.kinks;

  SampleGrid grid = sample_grid(g, 401, 40);
  for (double t : grid.t) {
    double fb = s.fB(t), fc = s.fC(t);
    s.reconstruction_error = std::max(s.reconstruction_error, std::abs(fb + fc - f(t)));
  }
  for (double t : g.events(g.lo(), g.hi()))
    s.integral_discrepancy = std::max(s.integral_discrepancy, std::abs(integrate(h, g, g.lo(), t) - s.fB(t)));
  for (const auto& e : s.jumps.atoms) {
    double r = residual_at(s.fC, g, e.d, tol);
    s.continuity_residuals.emplace_back(e.d, r);
    s.max_residual = std::max(s.max_residual, r);
  }
  return s;
}

double dc_norm(const GFunction& f, const Derivator& g, double tol) {
  auto js = jump_series(f, g, tol);
  if (!js.decomposable) fail(Errc::NotDecomposable, "jump series not summable or tail unknown");
  GFunction withlimits = f;
  for (const auto& e : js.atoms) withlimits.right_limits[e.d] = e.f_right;
  return sup_norm(withlimits, g, g.lo(), g.hi()) + js.sum_abs;
}

MultiplicativeSplit multiplicative_split(const GFunction& f, const Derivator& g, double alpha, double tol) {
  MultiplicativeSplit m;
  m.alpha = alpha;
  auto js = jump_series(f, g, tol);
  SampleGrid grid = sample_grid(g, 401, 40);

  struct Atom {
    double d, ratio, logdiff, rel;  // rel = df / f
  };
  std::vector<Atom> atoms;
  for (const auto& e : js.atoms) {
    double thresh = e.declared ? 0.0 : tol * std::max(1.0, std::abs(e.f_left));
    if (!(std::abs(e.delta_f) > thresh)) continue;
    if (e.f_left == 0 || e.f_right == 0)
      fail(Errc::ZeroNearJump, "f or its right limit vanishes at " + num(e.d));
    std::size_t near = 0;
    for (double t : grid.t) {
      if (t <= e.d) continue;
      if (g.events(e.d, t).size() > 1 && t != e.d) break;  // left the piece after d
      if (f(t) == 0) fail(Errc::ZeroNearJump, "f vanishes at " + num(t) + " just right of " + num(e.d));
      if (++near > 40) break;
    }
    double ratio = e.f_right / e.f_left;
    if (!(ratio > 0))
      fail(Errc::BranchViolation, "f changes sign across " + num(e.d) + " (real-mode logarithm cut)");
    double ld = std::log(std::abs(e.f_right)) - std::log(std::abs(e.f_left));
    atoms.push_back({e.d, ratio, ld, e.delta_f / e.f_left});
    m.d_gf.push_back(e.d);
  }
  for (const auto& a : atoms) m.log_sum += std::abs(a.logdiff);
  if (!std::isfinite(m.log_sum) || m.log_sum > 700)
    fail(Errc::LogSumDiverges, "sum of log jumps " + num(m.log_sum));
  m.positivity_bound = std::exp(-m.log_sum);

  // three expressions for phi after each atom: product, exp of log sum, running recursion
  auto steps = std::make_shared<std::vector<std::pair<double, double>>>();
  double prod = 1, logs = 0, rec = 1;
  for (const auto& a : atoms) {
    double before = rec;
    prod *= a.ratio;
    logs += a.logdiff;
    rec = before + a.rel * before;
    double viaexp = std::exp(logs);
    double spread = std::max({std::abs(prod - viaexp), std::abs(prod - rec), std::abs(viaexp - rec)});
    m.form_discrepancy = std::max(m.form_discrepancy, spread / std::max(1.0, std::abs(prod)));
    steps->emplace_back(a.d, prod);
  }
  if (m.form_discrepancy > tol)
    fail(Errc::NumericalInconsistency, "expressions for phi disagree by " + num(m.form_discrepancy));
  m.phi_steps = *steps;

  auto phi_eval = [steps](double t) {
    double v = 1;
    for (const auto& [d, p] : *steps) {
      if (d < t) v = p;
      else break;
    }
    return v;
  };
  m.phi.f = phi_eval;
  for (const auto& [d, p] : *steps) m.phi.right_limits[d] = p;
  m.phi.kinks = g.events(g.lo(), g.hi());
  m.phi.label = "phi";
  m.psi.f = [ff = f.f, phi_eval](double t) { return ff(t) / phi_eval(t); };
  for (const auto& e : js.atoms) {
    auto it = std::find_if(steps->begin(), steps->end(), [&](const auto& s) { return s.first == e.d; });
    m.psi.right_limits[e.d] = e.f_right / (it != steps->end() ? it->second : phi_eval(e.d));
  }
  m.psi.kinks = f.kinks;
  m.psi.label = "psi";

  m.phi_min = kInf;
  for (double t : grid.t) {
    double p = phi_eval(t);
    m.phi_min = std::min(m.phi_min, p);
    m.reconstruction_error = std::max(m.reconstruction_error, std::abs(p * m.psi(t) - f(t)));
  }
  for (const auto& e : js.atoms) {
    double r = residual_at(m.psi, g, e.d, tol);
    m.psi_residuals.emplace_back(e.d, r);
    m.max_psi_residual = std::max(m.max_psi_residual, r);
  }
  return m;
}

}  // namespace stj
