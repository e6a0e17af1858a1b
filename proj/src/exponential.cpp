#include "stj/exponential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

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

double lam_at(const ExpSpec& s, double t) { return s.c ? *s.c : s.lam(t); }

double log_factor(double lam, double dg, double d) {
  double z = 1 + lam * dg;
  if (!(z > 0))
    fail(Errc::BranchViolation, "1 + lambda dg = " + num(z) + " at " + num(d) + " (real mode needs > 0)");
  return std::log1p(lam * dg);
}

// integral of lambda tilde over [from, to), from <= to
double log_integral(const ExpSpec& s, const Derivator& g, double from, double to) {
  if (from == to) return 0.0;
  double cont = s.c ? *s.c * (g.cont(to) - g.cont(from)) : integrate_lebesgue_part(s.lam, g, from, to, 1e-13);
  double atoms = 0;
  for (const auto& j : g.jumps())
    if (j.at >= from && j.at < to) atoms += log_factor(lam_at(s, j.at), j.size, j.at);
  return cont + atoms;
}

// the same integral for q(lambda), written out on both parts
double log_integral_q(const ExpSpec& s, const Derivator& g, double from, double to) {
  if (from == to) return 0.0;
  double cont = s.c ? -*s.c * (g.cont(to) - g.cont(from))
                    : -integrate_lebesgue_part(s.lam, g, from, to, 1e-13);
  double atoms = 0;
  for (const auto& j : g.jumps())
    if (j.at >= from && j.at < to) {
      double lam = lam_at(s, j.at);
      double z = 1 + lam * j.size;
      if (z == 0) fail(Errc::BranchViolation, "1 + lambda dg = 0 at " + num(j.at));
      atoms += log_factor(-lam / z, j.size, j.at);
    }
  return cont + atoms;
}

void check_t(const Derivator& g, double t) {
  if (!g.contains(t)) fail(Errc::OutOfWindow, "exp_g evaluated at " + num(t));
}

}  // namespace

ExpSpec ExpSpec::constant(double c, double alpha) {
  ExpSpec s;
  s.lam = stj::constant(c);
  s.c = c;
  s.alpha = alpha;
  return s;
}

ExpSpec ExpSpec::variable(GFunction lam, double alpha) {
  ExpSpec s;
  s.lam = std::move(lam);
  s.alpha = alpha;
  return s;
}

double lambda_tilde(const ExpSpec& s, const Derivator& g, double t) {
  check_t(g, t);
  double lam = lam_at(s, t);
  double dg = g.delta(t);
  if (dg == 0) return lam;
  return log_factor(lam, dg, t) / dg;
}

double q_transform(const ExpSpec& s, const Derivator& g, double t) {
  check_t(g, t);
  double lam = lam_at(s, t);
  double z = 1 + lam * g.delta(t);
  if (z == 0) fail(Errc::BranchViolation, "1 + lambda dg = 0 at " + num(t));
  return -lam / z;
}

ExpSpec q_spec(const ExpSpec& s, const Derivator& g) {
  GFunction q;
  q.f = [s, g](double t) { return q_transform(s, g, t); };
  q.kinks = g.events(g.lo(), g.hi());
  q.label = "q(" + s.lam.label + ")";
  return ExpSpec::variable(std::move(q), s.alpha);
}

double exp_g(const ExpSpec& s, const Derivator& g, double t) {
  check_t(g, t);
  check_t(g, s.alpha);
  if (t >= s.alpha) return std::exp(log_integral(s, g, s.alpha, t));
  double inv = std::exp(-log_integral(s, g, t, s.alpha));
  double viaq = std::exp(log_integral_q(s, g, t, s.alpha));
  if (std::abs(inv - viaq) > 1e-10 * std::abs(inv))
    fail(Errc::NumericalInconsistency,
         "backward exponential: inverse form " + num(inv) + " vs q-transform form " + num(viaq));
  return inv;
}

double exp_g_right(const ExpSpec& s, const Derivator& g, double t) {
  check_t(g, t);
  if (t >= g.hi()) fail(Errc::OutOfWindow, "right limit at the window end");
  double dg = g.delta(t);
  double atom = dg == 0 ? 0.0 : log_factor(lam_at(s, t), dg, t);
  if (t >= s.alpha) return std::exp(log_integral(s, g, s.alpha, t) + atom);
  return std::exp(-(log_integral(s, g, t, s.alpha) - atom));
}

GFunction exp_g_function(const ExpSpec& s, const Derivator& g) {
  GFunction e;
  e.f = [s, g](double t) { return exp_g(s, g, t); };
  for (const auto& j : g.jumps()) e.right_limits[j.at] = exp_g_right(s, g, j.at);
  e.gderiv = [s, g](double t) { return lam_at(s, t) * exp_g(s, g, t); };
  e.kinks = g.events(g.lo(), g.hi());
  e.kinks.push_back(s.alpha);
  e.kinks.insert(e.kinks.end(), s.lam.kinks.begin(), s.lam.kinks.end());
  std::sort(e.kinks.begin(), e.kinks.end());
  e.kinks.erase(std::unique(e.kinks.begin(), e.kinks.end()), e.kinks.end());
  e.label = "exp_g";
  return e;
}

ExpResidualReport verify_exp(const ExpSpec& s, const Derivator& g, const std::vector<double>& grid_in,
                             double tol) {
  ExpResidualReport r;
  std::vector<double> grid = grid_in;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  GFunction e = exp_g_function(s, g);
  GFunction integrand;
  integrand.f = [&](double t) { return lam_at(s, t) * e(t); };
  integrand.kinks = e.kinks;

  std::vector<double> ev, cum{0.0};
  for (double t : grid) ev.push_back(e(t));
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    cum.push_back(cum.back() + integrate(integrand, g, grid[i], grid[i + 1], tol));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      double lhs = ev[j] - ev[i];
      double rhs = cum[j] - cum[i];
      r.integral_residual = std::max(r.integral_residual, std::abs(lhs - rhs));
      ++r.pairs;
    }
  for (const auto& jp : g.jumps()) {
    if (jp.at >= g.hi()) continue;
    double expect = e(jp.at) * (1 + lam_at(s, jp.at) * jp.size);
    r.jump_residual = std::max(r.jump_residual, std::abs(exp_g_right(s, g, jp.at) - expect));
  }
  for (double t : grid) {
    ExpSpec back = s;
    back.alpha = t;
    r.inverse_residual = std::max(r.inverse_residual, std::abs(exp_g(s, g, t) * exp_g(back, g, s.alpha) - 1));
  }
  return r;
}

double choose_lambda_plus(const Derivator& g, double tail_start) {
  double m = 0;
  for (const auto& j : g.jumps())
    if (j.at >= tail_start && j.size >= 0.5) m = std::max(m, j.size);
  if (g.tail_bound() && *g.tail_bound() >= 0.5) m = std::max(m, *g.tail_bound());
  return m > 0 ? 1 / (2 * m) : 1.0;
}

double tail_constant(double lambda) { return (1 + lambda) * std::max(1.0, 2 / lambda); }

ExtensionResult extend(const SobolevFunction& s, const Derivator& g, Interval W, double p) {
  if (!(s.a < s.b)) fail(Errc::InvalidArgument, "need a < b");
  if (!(W.lo >= g.lo() && W.hi <= g.hi()))
    fail(Errc::OutOfWindow, "extension window must lie inside the derivator window");
  if (!(W.lo < s.a && s.b < W.hi))
    fail(Errc::WindowTooSmall, "[a, b] must lie in the interior of the extension window");
  if (!(p >= 1)) fail(Errc::InvalidArgument, "p must be in [1, inf]");

  ExtensionResult r;
  r.a = s.a;
  r.b = s.b;
  r.window = W;
  r.p = p;
  GFunction u = ftc_build(s, g);
  const double fa = u(s.a), fb = u(s.b);
  r.lambda_minus = 1.0;
  r.lambda_plus = choose_lambda_plus(g, s.b);
  const ExpSpec left = ExpSpec::constant(r.lambda_minus, s.a);
  const ExpSpec right = ExpSpec::constant(-r.lambda_plus, s.b);
  const double a = s.a, b = s.b;

  r.Pf.f = [=](double t) {
    if (t < a) return fa * exp_g(left, g, t);
    if (t > b) return fb * exp_g(right, g, t);
    return u(t);
  };
  const double lm = r.lambda_minus, lp = r.lambda_plus;
  auto du = s.density;
  r.density.f = [=](double t) {
    if (t < a) return lm * fa * exp_g(left, g, t);
    if (t >= b) return -lp * fb * exp_g(right, g, t);
    return du(t);
  };
  for (const auto& j : g.jumps()) {
    if (j.at < W.lo || j.at >= W.hi) continue;
    double v;
    if (j.at < a) v = fa * exp_g_right(left, g, j.at);
    else if (j.at < b) v = *u.declared_right_limit(j.at);
    else v = fb * exp_g_right(right, g, j.at);
    r.Pf.right_limits[j.at] = v;
  }
  std::vector<double> kinks = u.kinks;
  kinks.push_back(a);
  kinks.push_back(b);
  for (double k : s.density.kinks) kinks.push_back(k);
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  r.Pf.kinks = kinks;
  r.density.kinks = kinks;
  r.Pf.label = "Pf";
  r.density.label = "Pf~";

  const double mu = measure(g, {{a, b}});
  r.C_lambda_minus = tail_constant(r.lambda_minus);
  r.C_lambda_plus = tail_constant(r.lambda_plus);
  r.C_embed = embedding_constant(p, mu);
  r.C_tilde = 1 + r.C_embed * (r.C_lambda_minus + r.C_lambda_plus);

  SampleGrid grid = sample_grid(g, 801);
  for (double t : grid.t) {
    if (t < W.lo || t > W.hi) continue;
    double v = r.Pf(t);
    if (t >= a && t <= b) r.core_max_diff = std::max(r.core_max_diff, std::abs(v - u(t)));
    else r.off_core_sup = std::max(r.off_core_sup, std::abs(v));
  }
  for (const auto& [d, v] : r.Pf.right_limits)
    if (d < a || d >= b) r.off_core_sup = std::max(r.off_core_sup, std::abs(v));
  r.off_core_bound = std::max(std::abs(fa), std::abs(fb));
  r.off_core_ok = r.off_core_sup <= r.off_core_bound * (1 + 1e-12);

  r.lp_Pf = lp_norm(r.Pf, g, p, W.lo, W.hi);
  r.lp_f = lp_norm(u, g, p, a, b);
  r.w_Pf = r.lp_Pf + lp_norm(r.density, g, p, W.lo, W.hi);
  r.w_f = r.lp_f + lp_norm(s.density, g, p, a, b);
  r.sup_Pf = sup_norm(r.Pf, g, W.lo, W.hi);
  r.sup_f = sup_norm(u, g, a, b);
  r.lp_ok = r.lp_Pf <= r.C_tilde * r.lp_f;
  r.w_ok = r.w_Pf <= r.C_tilde * r.w_f;
  r.sup_ok = r.sup_Pf <= r.C_tilde * r.sup_f;
  r.boundary_left = std::abs(fa * exp_g(left, g, a) - fa);
  r.boundary_right = std::abs(fb * exp_g(right, g, b) - fb);

  std::vector<double> pts;
  for (int i = 0; i <= 40; ++i) pts.push_back(i == 40 ? W.hi : W.lo + (W.hi - W.lo) * i / 40.0);
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> cum{0.0};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    cum.push_back(cum.back() + integrate(r.density, g, pts[i], pts[i + 1], 1e-12));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      r.concat_residual = std::max(r.concat_residual, std::abs(r.Pf(pts[j]) - r.Pf(pts[i]) - (cum[j] - cum[i])));
  return r;
}

}  // namespace stj
