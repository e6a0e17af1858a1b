#include "stj/gfunc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "stj/calculus.hpp"
#include "stj/error.hpp"

namespace stj {

std::size_t ModulusReport::index_at_least(double x) const {
  auto it = std::lower_bound(deltas.begin(), deltas.end(), x);
  if (it == deltas.end()) return deltas.size() - 1;
  return static_cast<std::size_t>(it - deltas.begin());
}

double ModulusReport::max_pointwise(std::size_t k) const {
  double m = 0;
  for (const auto& row : pointwise) m = std::max(m, row[k]);
  return m;
}

namespace {

void member_modulus(const GFunction& f, const SampleGrid& grid, const std::vector<double>& deltas,
                    std::vector<double>& omega, std::vector<std::vector<double>>& pw) {
  const std::size_t n = grid.t.size(), D = deltas.size();
  std::vector<double> fv(n);
  for (std::size_t i = 0; i < n; ++i) fv[i] = f(grid.t[i]);
  omega.assign(D, 0.0);
  pw.assign(n, std::vector<double>(D, 0.0));
  const double dmax = deltas.back();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double gap = grid.gv[j] - grid.gv[i];
      if (gap >= dmax) break;  // g is monotone along the grid
      std::size_t k = static_cast<std::size_t>(std::upper_bound(deltas.begin(), deltas.end(), gap) - deltas.begin());
      double diff = std::abs(fv[i] - fv[j]);
      pw[i][k] = std::max(pw[i][k], diff);
      pw[j][k] = std::max(pw[j][k], diff);
      omega[k] = std::max(omega[k], diff);
    }
  }
  for (std::size_t k = 1; k < D; ++k) {
    omega[k] = std::max(omega[k], omega[k - 1]);
    for (auto& row : pw) row[k] = std::max(row[k], row[k - 1]);
  }
}

}  // namespace

ModulusReport g_modulus(const std::vector<GFunction>& family, const Derivator& g, const SampleGrid& grid,
                        std::vector<double> deltas, int threads) {
  (void)g;
  if (deltas.empty()) fail(Errc::InvalidArgument, "empty delta grid");
  for (double d : deltas)
    if (!(d > 0)) fail(Errc::InvalidArgument, "deltas must be positive");
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  ModulusReport r;
  r.deltas = deltas;
  r.t = grid.t;
  r.grid = grid;
  r.members = family.size();
  r.omega.assign(deltas.size(), 0.0);
  r.pointwise.assign(grid.t.size(), std::vector<double>(deltas.size(), 0.0));

  const std::size_t m = family.size();
  std::vector<std::vector<double>> om(m);
  std::vector<std::vector<std::vector<double>>> pw(m);
  const std::size_t nt = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), m));
  if (nt == 1) {
    for (std::size_t i = 0; i < m; ++i) member_modulus(family[i], grid, deltas, om[i], pw[i]);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nt; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < m; i += nt) member_modulus(family[i], grid, deltas, om[i], pw[i]);
      });
    for (auto& th : pool) th.join();
  }
  // fixed-order reduction
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      r.omega[k] = std::max(r.omega[k], om[i][k]);
      for (std::size_t p = 0; p < grid.t.size(); ++p) r.pointwise[p][k] = std::max(r.pointwise[p][k], pw[i][p][k]);
    }
  return r;
}

ModulusReport g_modulus(const std::vector<GFunction>& family, const Derivator& g, std::vector<double> deltas,
                        int sample_n, int threads) {
  return g_modulus(family, g, sample_grid(g, sample_n), std::move(deltas), threads);
}

std::vector<RightLimitEntry> right_limit_table(const GFunction& f, const Derivator& g, double tol) {
  std::vector<RightLimitEntry> out;
  for (const auto& j : g.jumps()) {
    RightLimitEntry e;
    e.d = j.at;
    if (auto v = f.declared_right_limit(j.at)) {
      e.value = v;
      e.declared = true;
    } else {
      e.value = right_limit(f, g, j.at, tol, false);
    }
    out.push_back(e);
  }
  return out;
}

RegulatedReport is_regulated(const GFunction& f, const Derivator& g, double tol) {
  RegulatedReport r;
  r.table = right_limit_table(f, g, tol);
  for (const auto& e : r.table)
    if (!e.value) {
      r.regulated = false;
      r.witnesses.push_back(e.d);
    }
  return r;
}

double sigma(const Derivator& g, double x) {
  auto ev = g.events(g.lo(), g.hi());
  // on (e_i, e_{i+1}] g is affine with values (g(e_i+), g(e_{i+1})]; g(t) and g(e_i+) are summed in
  // different orders, so the second pass admits a few ulps of slack
  for (double slack : {0.0, 8 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))}) {
    for (std::size_t i = ev.size() - 1; i-- > 0;) {
      double a = ev[i], b = ev[i + 1];
      double lo = g.eval_right(a), hi = g.eval(b);
      if (std::abs(x - hi) <= slack || x == hi) return b;
      if (lo == hi) continue;
      if (x >= lo - slack && x <= hi) {
        // g(a+) itself: reached only by rounding just right of a jump
        if (x <= lo && g.eval(a) != lo) return std::nextafter(a, b);
        double t = a + (x - lo) / (hi - lo) * (b - a);
        return std::clamp(t, a, b);
      }
    }
    if (std::abs(x - g.eval(g.lo())) <= slack) return g.lo();
  }
  fail(Errc::OutOfRange, "value not attained by g");
}

double FactorizationResult::operator()(double xq) const {
  if (xq <= x.front()) return value.front();
  if (xq >= x.back()) return value.back();
  auto it = std::lower_bound(x.begin(), x.end(), xq);
  std::size_t j = static_cast<std::size_t>(it - x.begin());
  if (x[j] == xq) return value[j];
  double r = (xq - x[j - 1]) / (x[j] - x[j - 1]);
  return value[j - 1] + r * (value[j] - value[j - 1]);
}

FactorizationResult factorize(const GFunction& f, const Derivator& g, const FactorizationOptions& opt) {
  auto reg = is_regulated(f, g, opt.limit_tol);
  if (!reg.regulated) {
    std::string w;
    for (double d : reg.witnesses) w += (w.empty() ? "" : ", ") + std::to_string(d);
    fail(Errc::NotRegulated, "no right limit at jump point(s) " + w);
  }
  SampleGrid grid = sample_grid(g, opt.sample_n);
  FactorizationResult r;
  {
    double delta = opt.uniform_delta > 0 ? opt.uniform_delta : std::max(grid_resolution(grid, g), 1e-12);
    auto mod = g_modulus({f}, g, grid, {delta});
    double lo = kInf, hi = -kInf;
    for (double t : grid.t) {
      double v = f(t);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double eps = opt.uniform_eps > 0 ? opt.uniform_eps : 0.5 * (hi - lo) + 1e-12;
    r.uniform_delta = delta;
    r.uniform_omega = mod.omega[0];
    if (mod.omega[0] > eps)
      fail(Errc::NotUniform, "modulus " + std::to_string(mod.omega[0]) + " at delta " + std::to_string(delta) +
                                 " exceeds " + std::to_string(eps));
  }

  std::vector<std::pair<double, double>> nodes;
  for (double t : grid.t) {
    double x = g.eval(t);
    double s = sigma(g, x);
    r.sigma_table.emplace_back(x, s);
    nodes.emplace_back(x, f(s));
  }
  for (const auto& e : reg.table) {
    double xl = g.eval(e.d), xr = g.eval_right(e.d);
    nodes.emplace_back(xr, *e.value);
    r.gaps.push_back({xl, xr});
  }
  std::stable_sort(nodes.begin(), nodes.end(), [](auto& a, auto& b) { return a.first < b.first; });
  for (const auto& [x, v] : nodes) {
    if (!r.x.empty() && r.x.back() == x) continue;
    r.x.push_back(x);
    r.value.push_back(v);
  }
  std::sort(r.sigma_table.begin(), r.sigma_table.end());
  r.sigma_table.erase(std::unique(r.sigma_table.begin(), r.sigma_table.end()), r.sigma_table.end());

  for (double t : grid.t) r.max_error = std::max(r.max_error, std::abs(r(g.eval(t)) - f(t)));
  if (!(r.max_error <= opt.recon_tol))
    fail(Errc::ReconstructionError, "reconstruction error " + std::to_string(r.max_error));
  return r;
}

namespace {

double clenshaw(const std::vector<double>& c, double z) {
  double b1 = 0, b2 = 0;
  for (std::size_t k = c.size(); k-- > 1;) {
    double b0 = 2 * z * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return z * b1 - b2 + c[0];
}

}  // namespace

double WeierstrassFit::operator()(double x) const {
  double z = x_hi > x_lo ? (2 * x - (x_hi + x_lo)) / (x_hi - x_lo) : 0.0;
  return clenshaw(chebyshev, z);
}

WeierstrassFit weierstrass_fit(const GFunction& f, const Derivator& g, int degree, int sample_n, FitMode mode) {
  if (degree < 0) fail(Errc::InvalidArgument, "degree must be non-negative");
  SampleGrid grid = sample_grid(g, sample_n);
  std::vector<double> xs = grid.gv, ys;
  for (double t : grid.t) ys.push_back(f(t));
  WeierstrassFit w;
  w.x_lo = *std::min_element(xs.begin(), xs.end());
  w.x_hi = *std::max_element(xs.begin(), xs.end());
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (static_cast<int>(distinct.size()) <= degree)
    fail(Errc::IllConditioned, "only " + std::to_string(distinct.size()) + " distinct g-values for degree " +
                                   std::to_string(degree));
  const int n = degree + 1;
  auto zof = [&](double x) { return w.x_hi > w.x_lo ? (2 * x - (w.x_hi + w.x_lo)) / (w.x_hi - w.x_lo) : 0.0; };

  std::vector<double> fx, fy;
  if (mode == FitMode::ChebyshevNodes) {
    FactorizationOptions fo;
    fo.recon_tol = kInf;
    auto fac = factorize(f, g, fo);
    for (int k = 0; k < n; ++k) {
      double z = std::cos(std::numbers::pi * (k + 0.5) / n);
      double x = 0.5 * (w.x_hi + w.x_lo) + 0.5 * (w.x_hi - w.x_lo) * z;
      fx.push_back(x);
      fy.push_back(fac(x));
    }
  } else {
    fx = xs;
    fy = ys;
  }
  Eigen::MatrixXd V(fx.size(), n);
  Eigen::VectorXd y(fx.size());
  for (std::size_t i = 0; i < fx.size(); ++i) {
    double z = zof(fx[i]);
    V(static_cast<Eigen::Index>(i), 0) = 1.0;
    if (n > 1) V(static_cast<Eigen::Index>(i), 1) = z;
    for (int k = 2; k < n; ++k)
      V(static_cast<Eigen::Index>(i), k) = 2 * z * V(static_cast<Eigen::Index>(i), k - 1) - V(static_cast<Eigen::Index>(i), k - 2);
    y(static_cast<Eigen::Index>(i)) = fy[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  w.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : kInf;
  if (!(w.condition <= 1e12))
    fail(Errc::IllConditioned, "basis condition number " + std::to_string(w.condition));
  Eigen::VectorXd c = V.colPivHouseholderQr().solve(y);
  w.chebyshev.assign(c.data(), c.data() + c.size());

  // T_k(alpha x + beta) expanded in powers of x
  const double alpha = w.x_hi > w.x_lo ? 2 / (w.x_hi - w.x_lo) : 0.0;
  const double beta = w.x_hi > w.x_lo ? -(w.x_hi + w.x_lo) / (w.x_hi - w.x_lo) : 0.0;
  std::vector<long double> tprev{1.0L}, tcur{static_cast<long double>(beta), static_cast<long double>(alpha)};
  std::vector<long double> mono(static_cast<std::size_t>(n), 0.0L);
  for (int k = 0; k < n; ++k) {
    const auto& tk = k == 0 ? tprev : tcur;
    for (std::size_t i = 0; i < tk.size(); ++i) mono[i] += static_cast<long double>(c(k)) * tk[i];
    if (k >= 1) {
      std::vector<long double> nxt(tcur.size() + 1, 0.0L);
      for (std::size_t i = 0; i < tcur.size(); ++i) {
        nxt[i] += 2 * beta * tcur[i];
        nxt[i + 1] += 2 * alpha * tcur[i];
      }
      for (std::size_t i = 0; i < tprev.size(); ++i) nxt[i] -= tprev[i];
      tprev = tcur;
      tcur = nxt;
    }
  }
  for (auto v : mono) w.coefficients.push_back(static_cast<double>(v));
  for (std::size_t i = 0; i < xs.size(); ++i) w.sup_error = std::max(w.sup_error, std::abs(w(xs[i]) - ys[i]));
  return w;
}

}  // namespace stj
