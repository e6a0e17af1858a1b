#include "stj/calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <queue>
#include <sstream>

#include "stj/error.hpp"

namespace stj {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, err, absval;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk15(const std::function<double(double)>& F, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = F(c);
  double rk = fc * kWgk[7], rg = fc * kWg[3], ra = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = F(c - x), f2 = F(c + x);
    rk += kWgk[j] * (f1 + f2);
    ra += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
  }
  Segment s{a, b, h * rk, std::abs(h * (rk - rg)), std::abs(h) * ra};
  if (!std::isfinite(s.value)) fail(Errc::QuadratureFailure, "non-finite integrand value");
  return s;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_interval(const Derivator& g, double c, double d) {
  if (!(c >= g.lo() && d <= g.hi()) || !(c <= d))
    fail(Errc::OutOfWindow, "[" + num(c) + ", " + num(d) + ") not inside [" + num(g.lo()) + ", " +
                                num(g.hi()) + "]");
}

// breakpoints, jumps and declared kinks in [c, d], together with c and d
std::vector<double> cut_points(const GFunction& f, const Derivator& g, double c, double d) {
  std::vector<double> pts = g.events(c, d);
  for (double k : f.kinks)
    if (k >= c && k <= d) pts.push_back(k);
  pts.push_back(c);
  pts.push_back(d);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// nearest event strictly to the right (left) of t, or the window end
double gap_right(const GFunction& f, const Derivator& g, double t) {
  double best = g.hi() - t;
  for (double e : cut_points(f, g, g.lo(), g.hi()))
    if (e > t) {
      best = std::min(best, e - t);
      break;
    }
  return best;
}

double gap_left(const GFunction& f, const Derivator& g, double t) {
  double best = t - g.lo();
  auto pts = cut_points(f, g, g.lo(), g.hi());
  for (auto it = pts.rbegin(); it != pts.rend(); ++it)
    if (*it < t) {
      best = std::min(best, t - *it);
      break;
    }
  return best;
}

double step0(const Derivator& g, double gap) { return std::min(0.5 * gap, (g.hi() - g.lo()) / 16.0); }

double jump_branch(const GFunction& f, const Derivator& g, double d, const DerivOptions& opt) {
  auto r = right_limit(f, g, d, opt.tol, true);
  if (!r) fail(Errc::NoLimit, "right limit of f at jump " + num(d) + " does not settle");
  return (*r - f(d)) / g.delta(d);
}

std::optional<double> one_sided(const GFunction& f, const Derivator& g, double t, int side,
                                const DerivOptions& opt) {
  const double ft = f(t), gt = g.eval(t);
  double gap = side > 0 ? gap_right(f, g, t) : gap_left(f, g, t);
  double h0 = step0(g, gap);
  auto q = [&](double h) {
    double s = t + side * h;
    return (f(s) - ft) / (g.eval(s) - gt);
  };
  return extrapolate_to_zero(q, h0, opt.tol);
}

}  // namespace

double gk_integrate(const std::function<double(double)>& F, const std::vector<double>& pts,
                    const QuadOptions& opt) {
  std::priority_queue<Segment> heap;
  double total = 0, err = 0, absval = 0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i + 1] > pts[i])) continue;
    Segment s = gk15(F, pts[i], pts[i + 1]);
    total += s.value;
    err += s.err;
    absval += s.absval;
    heap.push(s);
    ++count;
  }
  auto target = [&] { return std::max(opt.tol, 50 * std::numeric_limits<double>::epsilon() * absval); };
  while (!heap.empty() && err > target()) {
    if (count >= opt.max_intervals)
      fail(Errc::QuadratureFailure, "error estimate " + num(err) + " above " + num(target()) + " after " +
                                        std::to_string(count) + " subintervals");
    Segment s = heap.top();
    heap.pop();
    double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b))
      fail(Errc::QuadratureFailure, "subinterval collapsed near " + num(s.a));
    Segment l = gk15(F, s.a, m), r = gk15(F, m, s.b);
    total += l.value + r.value - s.value;
    err += l.err + r.err - s.err;
    absval += l.absval + r.absval - s.absval;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // re-sum to avoid drift from the running updates
  double sum = 0;
  std::vector<Segment> segs;
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : segs) sum += s.value;
  (void)total;
  return sum;
}

double integrate_atoms(const GFunction& f, const Derivator& g, double c, double d) {
  check_interval(g, c, d);
  double s = 0;
  for (const auto& j : g.jumps())
    if (j.at >= c && j.at < d) s += f(j.at) * j.size;
  return s;
}

double integrate_lebesgue_part(const GFunction& f, const Derivator& g, double c, double d, double tol) {
  check_interval(g, c, d);
  if (c == d) return 0.0;
  std::vector<double> xs;
  for (double t : cut_points(f, g, c, d)) xs.push_back(g.cont(t));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.size() < 2) return 0.0;
  const Pseudoinverse gamma = g.pseudoinverse();
  auto F = [&](double x) { return f(gamma(x)); };
  return gk_integrate(F, xs, {tol, 5000});
}

double integrate(const GFunction& f, const Derivator& g, double c, double d, double tol) {
  return integrate_lebesgue_part(f, g, c, d, tol) + integrate_atoms(f, g, c, d);
}

double integrate_continuous_part(const GFunction& f, const Derivator& g, double c, double d, double tol) {
  check_interval(g, c, d);
  if (c == d) return 0.0;
  auto pts = cut_points(f, g, c, d);
  auto F = [&](double t) { return g.slope_right(t) * f(t); };
  return gk_integrate(F, pts, {tol, 5000});
}

namespace {

std::vector<double> direct_grid(const GFunction& f, const Derivator& g, double c, double d, long n) {
  std::vector<double> pts = cut_points(f, g, c, d);
  pts.reserve(pts.size() + static_cast<std::size_t>(n) + 1);
  for (long i = 1; i < n; ++i) pts.push_back(c + (d - c) * static_cast<double>(i) / static_cast<double>(n));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double left_sum(const GFunction& f, const Derivator& g, const std::vector<double>& pts) {
  long double s = 0;
  double gprev = g.eval(pts.front());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double gnext = g.eval(pts[i + 1]);
    s += static_cast<long double>(f(pts[i])) * (gnext - gprev);
    gprev = gnext;
  }
  return static_cast<double>(s);
}

}  // namespace

double integrate_direct(const GFunction& f, const Derivator& g, double c, double d, long n) {
  check_interval(g, c, d);
  if (c == d) return 0.0;
  return left_sum(f, g, direct_grid(f, g, c, d, std::max(1L, n)));
}

double integrate_direct_extrapolated(const GFunction& f, const Derivator& g, double c, double d, long n) {
  check_interval(g, c, d);
  if (c == d) return 0.0;
  auto coarse = direct_grid(f, g, c, d, std::max(1L, n));
  std::vector<double> fine;
  fine.reserve(2 * coarse.size());
  for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
    fine.push_back(coarse[i]);
    fine.push_back(0.5 * (coarse[i] + coarse[i + 1]));
  }
  fine.push_back(coarse.back());
  return 2 * left_sum(f, g, fine) - left_sum(f, g, coarse);
}

std::optional<double> extrapolate_to_zero(const std::function<double(double)>& q, double h0, double tol,
                                          int max_levels, int max_order) {
  if (!(h0 > 0)) return std::nullopt;
  std::vector<double> prev_row, row;
  double prev_est = 0;
  int agree = 0;
  for (int j = 0; j < max_levels; ++j) {
    double h = std::ldexp(h0, -j);
    double v = q(h);
    if (!std::isfinite(v)) return std::nullopt;
    row.assign(1, v);
    int order = std::min(j, max_order);
    for (int k = 1; k <= order; ++k) {
      double fac = std::ldexp(1.0, k) - 1.0;
      row.push_back(row[k - 1] + (row[k - 1] - prev_row[k - 1]) / fac);
    }
    double est = row.back();
    if (j > 0) {
      if (std::abs(est - prev_est) <= tol * std::max(1.0, std::abs(est))) {
        if (++agree >= 2) return est;
      } else {
        agree = 0;
      }
    }
    prev_est = est;
    prev_row = row;
  }
  return std::nullopt;
}

std::optional<double> right_limit(const GFunction& f, const Derivator& g, double d, double tol,
                                  bool use_declared) {
  if (use_declared)
    if (auto v = f.declared_right_limit(d)) return v;
  if (!(d >= g.lo() && d < g.hi())) fail(Errc::OutOfWindow, "right limit at " + num(d));
  double h0 = step0(g, gap_right(f, g, d));
  return extrapolate_to_zero([&](double h) { return f(d + h); }, h0, tol);
}

double g_derivative(const GFunction& f, const Derivator& g, double t, const DerivOptions& opt) {
  if (!g.contains(t)) fail(Errc::OutOfWindow, "derivative requested at " + num(t));
  if (opt.use_declared && f.gderiv) return f.gderiv(t);
  if (g.is_jump(t)) return jump_branch(f, g, t, opt);
  if (auto iv = g.constancy_interval_at(t)) {
    double b = iv->hi;
    if (g.is_jump(b)) return jump_branch(f, g, b, opt);
    if (b >= g.hi()) fail(Errc::DegenerateDenominator, "constancy interval ends at the window end");
    auto r = one_sided(f, g, b, +1, opt);
    if (!r) fail(Errc::NoLimit, "right quotient at " + num(b) + " does not settle");
    return *r;
  }
  const bool has_left = t > g.lo(), has_right = t < g.hi();
  if (g.in_N(t) || (has_left && g.slope_left(t) == 0) || (has_right && g.slope_right(t) == 0))
    fail(Errc::DegenerateDenominator, "g is locally constant on one side of " + num(t));
  std::optional<double> L, R;
  if (has_left) {
    L = one_sided(f, g, t, -1, opt);
    if (!L) fail(Errc::NoLimit, "left quotients at " + num(t) + " do not settle");
  }
  if (has_right) {
    R = one_sided(f, g, t, +1, opt);
    if (!R) fail(Errc::NoLimit, "right quotients at " + num(t) + " do not settle");
  }
  if (L && R) {
    if (std::abs(*L - *R) > 1e3 * opt.tol * std::max(1.0, std::abs(*L)))
      fail(Errc::NoLimit, "one-sided quotients at " + num(t) + " disagree: " + num(*L) + " vs " + num(*R));
    return 0.5 * (*L + *R);
  }
  return L ? *L : *R;
}

GFunction ftc_build(const SobolevFunction& s, const Derivator& g, double tol) {
  if (!(s.a >= g.lo() && s.b <= g.hi() && s.a < s.b))
    fail(Errc::OutOfWindow, "Sobolev interval [" + num(s.a) + ", " + num(s.b) + ") must lie in the window");
  struct Data {
    std::vector<double> nodes, cum;
    Derivator g;
    GFunction du;
    double tol;
  };
  auto data = std::make_shared<Data>();
  data->g = g;
  data->du = s.density;
  data->tol = tol;
  data->nodes = cut_points(s.density, g, g.lo(), g.hi());
  data->nodes.push_back(s.a);
  data->nodes.push_back(s.b);
  std::sort(data->nodes.begin(), data->nodes.end());
  data->nodes.erase(std::unique(data->nodes.begin(), data->nodes.end()), data->nodes.end());
  data->cum.assign(data->nodes.size(), 0.0);
  for (std::size_t k = 0; k + 1 < data->nodes.size(); ++k)
    data->cum[k + 1] = data->cum[k] + integrate(s.density, g, data->nodes[k], data->nodes[k + 1], tol);
  auto ia = std::lower_bound(data->nodes.begin(), data->nodes.end(), s.a) - data->nodes.begin();
  const double shift = s.base_value - data->cum[static_cast<std::size_t>(ia)];
  for (auto& v : data->cum) v += shift;

  GFunction u;
  u.f = [data](double t) {
    const auto& n = data->nodes;
    if (!(t >= n.front() && t <= n.back())) fail(Errc::OutOfWindow, "u(" + num(t) + ")");
    auto k = static_cast<std::size_t>(std::upper_bound(n.begin(), n.end(), t) - n.begin()) - 1;
    if (n[k] == t) return data->cum[k];
    return data->cum[k] + integrate(data->du, data->g, n[k], t, data->tol);
  };
  for (const auto& j : g.jumps()) u.right_limits[j.at] = u.f(j.at) + s.density(j.at) * j.size;
  u.gderiv = s.density.f;
  u.kinks = data->nodes;
  u.label = "ftc(" + s.density.label + ")";
  return u;
}

double sup_norm(const GFunction& f, const Derivator& g, double c, double d, int n) {
  check_interval(g, c, d);
  auto pts = cut_points(f, g, c, d);
  for (int i = 0; i < n; ++i) pts.push_back(i + 1 == n ? d : c + (d - c) * i / std::max(1, n - 1));
  double m = 0;
  for (double t : pts) m = std::max(m, std::abs(f(t)));
  for (const auto& [at, v] : f.right_limits)
    if (at >= c && at < d) m = std::max(m, std::abs(v));
  return m;
}

double lp_norm(const GFunction& f, const Derivator& g, double p, double c, double d, double tol) {
  if (!(p >= 1)) fail(Errc::InvalidArgument, "p must be in [1, inf]");
  if (std::isinf(p)) return sup_norm(f, g, c, d);
  double I = integrate(abs_pow(f, p), g, c, d, tol);
  return std::pow(std::max(0.0, I), 1.0 / p);
}

double sobolev_norm(const SobolevFunction& s, const Derivator& g, double p) {
  GFunction u = ftc_build(s, g);
  return lp_norm(u, g, p, s.a, s.b) + lp_norm(s.density, g, p, s.a, s.b);
}

double embedding_constant(double p, double mu) {
  if (!(mu > 0)) return kInf;
  double cv;
  if (p == 1) cv = 1.0;
  else if (std::isinf(p)) cv = mu;
  else cv = std::pow(mu, p / (p - 1));
  double cua = std::isinf(p) ? 1.0 : std::pow(mu, -1.0 / p);
  return 2 * std::max(cv, cua);
}

EmbeddingReport embedding_check(const SobolevFunction& s, const Derivator& g, double p) {
  EmbeddingReport r;
  r.p = p;
  GFunction u = ftc_build(s, g);
  r.mu = measure(g, {{s.a, s.b}});
  r.sup_u = sup_norm(u, g, s.a, s.b);
  r.lp_u = lp_norm(u, g, p, s.a, s.b);
  r.lp_density = lp_norm(s.density, g, p, s.a, s.b);
  double two_c = embedding_constant(p, r.mu);
  r.C = two_c / 2;
  double rhs = r.lp_u + r.lp_density;
  r.bound = rhs == 0 ? 0.0 : two_c * rhs;
  r.pass = r.sup_u <= r.bound;
  return r;
}

}  // namespace stj
