#include "stj/compactness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stj/calculus.hpp"
#include "stj/decompose.hpp"
#include "stj/error.hpp"
#include "stj/gfunc.hpp"
#include "stj/grid.hpp"

namespace stj {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const Condition& Certificate::condition(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  fail(Errc::InvalidArgument, "certificate has no condition " + name);
}

Verdict conjunction(const std::vector<Condition>& cs) {
  Verdict v = Verdict::Pass;
  for (const auto& c : cs) {
    if (c.verdict == Verdict::Fail) return Verdict::Fail;
    if (c.verdict == Verdict::Inconclusive) v = Verdict::Inconclusive;
  }
  return v;
}

std::vector<double> jump_enumeration(const Derivator& g) {
  std::vector<Jump> js = g.jumps();
  std::stable_sort(js.begin(), js.end(), [](const Jump& a, const Jump& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.at < b.at;
  });
  std::vector<double> out;
  for (const auto& j : js) out.push_back(j.at);
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Verdict pass_if(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

void require_members(const FamilySample& S) {
  if (S.members.empty()) fail(Errc::EmptyFamily, "family has no members");
}

std::vector<double> sorted_deltas(std::vector<double> d) {
  if (d.empty()) d = default_delta_grid();
  for (double x : d)
    if (!(x > 0)) fail(Errc::InvalidArgument, "deltas must be positive");
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

using Matrix = std::vector<std::vector<double>>;

Matrix evaluate(const FamilySample& S, const SampleGrid& grid) {
  Matrix v(S.members.size(), std::vector<double>(grid.t.size()));
  for (std::size_t m = 0; m < S.members.size(); ++m)
    for (std::size_t i = 0; i < grid.t.size(); ++i) v[m][i] = S.members[m](grid.t[i]);
  return v;
}

Certificate skeleton(const char* id, const SampleGrid& grid, const Derivator& g, const std::vector<double>& deltas) {
  Certificate c;
  c.criterion = id;
  c.grid["points"] = static_cast<double>(grid.t.size());
  c.grid["uniform_n"] = grid.uniform_n;
  c.grid["cluster_n"] = grid.cluster_n;
  c.grid["cluster_ratio"] = grid.cluster_ratio;
  c.grid["resolution"] = grid_resolution(grid, g);
  if (!deltas.empty()) {
    c.grid["delta_min"] = deltas.front();
    c.grid["delta_max"] = deltas.back();
    c.grid["delta_count"] = static_cast<double>(deltas.size());
  }
  c.enumeration = jump_enumeration(g);
  return c;
}

Condition bounded(const Matrix& vals) {
  Condition c;
  c.name = "bounded";
  double mx = 0;
  bool finite = true;
  std::vector<double> per_point(vals.empty() ? 0 : vals[0].size(), 0.0);
  for (const auto& row : vals)
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!std::isfinite(row[i])) finite = false;
      per_point[i] = std::max(per_point[i], std::abs(row[i]));
      mx = std::max(mx, std::abs(row[i]));
    }
  c.values["max_abs"] = finite ? mx : kNaN;
  c.series["sup_over_family"] = per_point;
  c.verdict = pass_if(finite);
  return c;
}

// indices of samples with d < t < d + w
std::vector<std::size_t> window(const SampleGrid& grid, double d, double w) {
  std::vector<std::size_t> idx;
  auto it = std::upper_bound(grid.t.begin(), grid.t.end(), d);
  for (; it != grid.t.end() && *it < d + w; ++it) idx.push_back(static_cast<std::size_t>(it - grid.t.begin()));
  return idx;
}

// first-fit by g-value; a class accepts a point while the oscillation of every member stays < eps
int greedy_cover(const Matrix& vals, const SampleGrid& grid, std::vector<std::size_t> idx, double eps, int cap) {
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return grid.gv[a] < grid.gv[b]; });
  const std::size_t m = vals.size();
  std::vector<std::vector<double>> lo, hi;
  for (std::size_t i : idx) {
    bool placed = false;
    for (std::size_t c = 0; c < lo.size() && !placed; ++c) {
      bool fits = true;
      for (std::size_t k = 0; k < m && fits; ++k)
        fits = std::max(hi[c][k], vals[k][i]) - std::min(lo[c][k], vals[k][i]) < eps;
      if (fits) {
        for (std::size_t k = 0; k < m; ++k) {
          lo[c][k] = std::min(lo[c][k], vals[k][i]);
          hi[c][k] = std::max(hi[c][k], vals[k][i]);
        }
        placed = true;
      }
    }
    if (!placed) {
      if (static_cast<int>(lo.size()) >= cap) return cap + 1;
      std::vector<double> l(m), h(m);
      for (std::size_t k = 0; k < m; ++k) l[k] = h[k] = vals[k][i];
      lo.push_back(l);
      hi.push_back(h);
    }
  }
  return static_cast<int>(lo.size());
}

struct BcParts {
  SampleGrid grid;
  std::vector<double> deltas;
  Matrix vals;
  ModulusReport mod;
};

BcParts bc_parts(const FamilySample& S, const Derivator& g, const std::vector<double>& deltas_in, int threads) {
  require_members(S);
  BcParts p;
  p.deltas = sorted_deltas(deltas_in);
  p.grid = sample_grid(g, S.sample_n);
  p.vals = evaluate(S, p.grid);
  p.mod = g_modulus(S.members, g, p.grid, p.deltas, threads);
  return p;
}

Condition equicontinuity(const BcParts& p, double eps) {
  Condition c;
  c.name = "equicontinuous";
  std::vector<double> mp;
  for (std::size_t k = 0; k < p.deltas.size(); ++k) mp.push_back(p.mod.max_pointwise(k));
  c.values["delta"] = p.deltas.front();
  c.values["max_pointwise_modulus"] = mp.front();
  c.series["delta"] = p.deltas;
  c.series["max_pointwise_modulus"] = mp;
  c.series["uniform_modulus"] = p.mod.omega;
  std::vector<double> bad;
  for (std::size_t i = 0; i < p.grid.t.size(); ++i)
    if (!(p.mod.pointwise[i][0] < eps)) bad.push_back(p.grid.t[i]);
  if (!bad.empty()) c.series["witness_t"] = bad;
  c.verdict = pass_if(bad.empty());
  c.note = "pointwise moduli at the smallest delta of the grid";
  return c;
}

Condition stability(const BcParts& p, const Derivator& g, double eps, int cap, std::vector<double>& witnesses) {
  Condition c;
  c.name = "g_stable";
  std::vector<double> ds, sizes, used;
  int worst = 0;
  for (const auto& j : g.jumps()) {
    int size = 0;
    double at = kNaN;
    for (double dl : p.deltas) {
      auto idx = window(p.grid, j.at, dl);
      if (idx.empty()) continue;
      size = greedy_cover(p.vals, p.grid, idx, eps, cap);
      at = dl;
      break;
    }
    ds.push_back(j.at);
    sizes.push_back(size);
    used.push_back(at);
    worst = std::max(worst, size);
    if (size > cap) witnesses.push_back(j.at);
  }
  c.series["jump"] = ds;
  c.series["covering_size"] = sizes;
  c.series["delta"] = used;
  c.values["max_covering_size"] = worst;
  c.values["cap"] = cap;
  c.verdict = pass_if(worst <= cap);
  c.note = "greedy covering of the samples in (d, d + delta), first nonempty delta";
  return c;
}

void finish(Certificate& c) { c.overall = conjunction(c.conditions); }

}  // namespace

Certificate bc_diagnose(const FamilySample& S, const Derivator& g, const BcParams& prm) {
  BcParts p = bc_parts(S, g, prm.deltas, prm.threads);
  Certificate c = skeleton("bc", p.grid, g, p.deltas);
  c.params["eps"] = prm.eps;
  c.params["cover_cap"] = prm.cover_cap;
  c.conditions.push_back(bounded(p.vals));
  c.conditions.push_back(equicontinuity(p, prm.eps));
  c.conditions.push_back(stability(p, g, prm.eps, prm.cover_cap, c.witnesses));
  finish(c);
  return c;
}

Certificate buc_diagnose(const FamilySample& S, const Derivator& g, const BcParams& prm) {
  BcParts p = bc_parts(S, g, prm.deltas, prm.threads);
  Certificate c = skeleton("buc", p.grid, g, p.deltas);
  c.params["eps"] = prm.eps;
  c.params["min_population"] = prm.min_population;
  c.conditions.push_back(bounded(p.vals));

  Condition u;
  u.name = "uniformly_equicontinuous";
  const double res = c.grid["resolution"];
  const std::size_t k = p.mod.index_at_least(res);
  u.values["delta"] = p.deltas[k];
  u.values["omega"] = p.mod.omega[k];
  u.series["delta"] = p.deltas;
  u.series["omega"] = p.mod.omega;
  u.verdict = pass_if(p.mod.omega[k] < prm.eps);
  u.note = "uniform modulus at the smallest delta not below the grid resolution";
  c.conditions.push_back(u);

  Condition r;
  r.name = "uniform_right_limits";
  std::vector<double> ds, defects;
  double worst = 0;
  for (const auto& j : g.jumps()) {
    double best = kNaN;
    for (double eta : p.deltas) {
      auto idx = window(p.grid, j.at, eta);
      if (static_cast<int>(idx.size()) < prm.min_population) continue;
      double defect = 0;
      for (std::size_t m = 0; m < S.members.size(); ++m) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i : idx) {
          lo = std::min(lo, p.vals[m][i]);
          hi = std::max(hi, p.vals[m][i]);
        }
        if (auto v = S.members[m].declared_right_limit(j.at)) {
          lo = std::min(lo, *v);
          hi = std::max(hi, *v);
        }
        defect = std::max(defect, hi - lo);
      }
      if (!(best <= defect)) best = defect;
    }
    ds.push_back(j.at);
    defects.push_back(best);
    if (!std::isnan(best)) worst = std::max(worst, best);
  }
  r.series["jump"] = ds;
  r.series["cauchy_defect"] = defects;
  r.values["max_cauchy_defect"] = worst;
  bool unpopulated = false;
  for (std::size_t i = 0; i < defects.size(); ++i) {
    if (std::isnan(defects[i])) unpopulated = true;
    else if (!(defects[i] < prm.eps)) c.witnesses.push_back(ds[i]);
  }
  r.verdict = !c.witnesses.empty() ? Verdict::Fail : unpopulated ? Verdict::Inconclusive : Verdict::Pass;
  r.note = unpopulated ? "some jump has too few samples to its right"
                       : "oscillation over (d, d + eta), minimized over eta";
  c.conditions.push_back(r);
  finish(c);
  return c;
}

Certificate lp_seq_diagnose(const std::vector<Sequence>& X, double p, double eps) {
  if (X.empty()) fail(Errc::EmptyFamily, "no sequences");
  if (!(p >= 1) || std::isinf(p)) fail(Errc::InvalidArgument, "p must be in [1, inf)");
  if (!(eps > 0)) fail(Errc::InvalidArgument, "eps must be positive");
  std::size_t L = 0;
  for (std::size_t j = 0; j < X.size(); ++j) {
    if (!X[j].tail) fail(Errc::MissingTailBound, "sequence " + std::to_string(j) + " has no declared tail bound");
    if (!(*X[j].tail >= 0)) fail(Errc::InvalidArgument, "negative tail bound");
    L = std::max(L, X[j].x.size());
  }
  Certificate c;
  c.criterion = "lp_seq";
  c.params["p"] = p;
  c.params["eps"] = eps;
  c.grid["truncation"] = static_cast<double>(L);
  c.grid["sequences"] = static_cast<double>(X.size());

  Condition b;
  b.name = "bounded";
  std::vector<double> bound(L, 0.0);
  bool finite = true;
  for (const auto& s : X)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k])) finite = false;
      bound[k] = std::max(bound[k], std::abs(s.x[k]));
    }
  b.series["pointwise_bound"] = bound;
  b.verdict = pass_if(finite);
  c.conditions.push_back(b);

  Condition t;
  t.name = "tail";
  const double target = std::pow(eps, p);
  std::vector<double> nmin, tails_at(L + 1, 0.0);
  std::size_t nstar = 0;
  bool reached = true;
  for (const auto& s : X) {
    // suffix[n] = sum_{k > n} |x_k|^p + tail, k 1-based
    std::vector<double> suffix(L + 1, *s.tail);
    for (std::size_t n = L; n-- > 0;) {
      double xk = n < s.x.size() ? std::pow(std::abs(s.x[n]), p) : 0.0;
      suffix[n] = suffix[n + 1] + xk;
    }
    std::size_t n = 0;
    while (n <= L && !(suffix[n] < target)) ++n;
    if (n > L) reached = false;
    nmin.push_back(static_cast<double>(n));
    nstar = std::max(nstar, n);
    for (std::size_t k = 0; k <= L; ++k) tails_at[k] = std::max(tails_at[k], suffix[k]);
  }
  t.series["minimal_n"] = nmin;
  t.series["max_tail"] = tails_at;
  t.values["n"] = reached ? static_cast<double>(nstar) : kNaN;
  t.values["target"] = target;
  t.verdict = pass_if(reached && nstar < L);
  t.note = "fails when the required n reaches the truncation length";
  c.conditions.push_back(t);
  finish(c);
  return c;
}

namespace {

struct XSpace {
  Pseudoinverse gamma;
  double xlo, xhi;
  std::vector<double> cuts;  // images of events and kinks
};

XSpace xspace(const FamilySample& G, const Derivator& g) {
  XSpace s;
  s.gamma = g.pseudoinverse();
  s.xlo = s.gamma.lo();
  s.xhi = s.gamma.hi();
  auto ev = g.events(g.lo(), g.hi());
  for (const auto& f : G.members)
    for (double k : f.kinks)
      if (g.contains(k)) ev.push_back(k);
  for (double e : ev) s.cuts.push_back(g.cont(e));
  s.cuts.push_back(s.xlo);
  s.cuts.push_back(s.xhi);
  std::sort(s.cuts.begin(), s.cuts.end());
  s.cuts.erase(std::unique(s.cuts.begin(), s.cuts.end()), s.cuts.end());
  return s;
}

}  // namespace

Certificate lp_diagnose(const FamilySample& G, const Derivator& g, double p, const LpParams& prm) {
  require_members(G);
  if (!(p >= 1) || std::isinf(p)) fail(Errc::InvalidArgument, "p must be in [1, inf)");
  if (!(prm.rho > 0) || prm.h_points < 1) fail(Errc::InvalidArgument, "rho and h_points must be positive");
  const double target = std::pow(prm.eps, p);
  SampleGrid grid = sample_grid(g, G.sample_n);
  Certificate c = skeleton("lp", grid, g, {});
  c.params["p"] = p;
  c.params["eps"] = prm.eps;
  c.params["n"] = static_cast<double>(prm.n);
  c.params["R"] = prm.R;
  c.params["rho"] = prm.rho;
  const auto& order = c.enumeration;

  // 1: values at the jump points
  Condition b;
  b.name = "bounded_at_jumps";
  std::vector<double> at_jump;
  bool finite = true;
  for (double d : order) {
    double mx = 0;
    for (const auto& f : G.members) {
      double v = f(d);
      if (!std::isfinite(v)) finite = false;
      mx = std::max(mx, std::abs(v));
    }
    at_jump.push_back(mx);
  }
  b.series["sup_over_family"] = at_jump;
  b.verdict = pass_if(finite);
  c.conditions.push_back(b);

  // 2: jump tail beyond the first n in enumeration order
  Condition jt;
  jt.name = "jump_tail";
  double worst = 0;
  std::vector<double> per_member;
  for (const auto& f : G.members) {
    double s = 0;
    for (std::size_t k = prm.n; k < order.size(); ++k) s += std::pow(std::abs(f(order[k])), p) * g.delta(order[k]);
    if (g.tail_bound()) s += std::pow(sup_norm(f, g, g.lo(), g.hi()), p) * *g.tail_bound();
    per_member.push_back(s);
    worst = std::max(worst, s);
  }
  jt.series["per_member"] = per_member;
  jt.values["max_tail"] = worst;
  jt.values["target"] = target;
  if (!(worst < target)) jt.verdict = Verdict::Fail;
  else if (!g.tail_bound()) {
    jt.verdict = Verdict::Inconclusive;
    jt.note = "derivator declares no bound on the jumps beyond the stored atoms";
  } else {
    jt.verdict = Verdict::Pass;
  }
  c.conditions.push_back(jt);

  // 3: mass of f o gamma outside [-R, R]
  XSpace xs = xspace(G, g);
  Condition out;
  out.name = "tight";
  double worst_out = 0;
  bool missing = false;
  std::vector<double> outside;
  for (std::size_t m = 0; m < G.members.size(); ++m) {
    GFunction fp = abs_pow(G.members[m], p);
    double s = 0;
    if (xs.xhi > prm.R) {
      double t0 = prm.R <= xs.xlo ? g.lo() : xs.gamma(prm.R);
      s += integrate_lebesgue_part(fp, g, t0, g.hi(), prm.tol);
    }
    if (xs.xlo < -prm.R) {
      double t1 = -prm.R >= xs.xhi ? g.hi() : xs.gamma(-prm.R);
      s += integrate_lebesgue_part(fp, g, g.lo(), t1, prm.tol);
    }
    if (m < G.outside_mass.size() && G.outside_mass[m]) s += *G.outside_mass[m];
    else missing = true;
    outside.push_back(s);
    worst_out = std::max(worst_out, s);
  }
  out.series["per_member"] = outside;
  out.values["max_outside"] = worst_out;
  out.values["target"] = target;
  if (!(worst_out < target)) out.verdict = Verdict::Fail;
  else if (missing) {
    out.verdict = Verdict::Inconclusive;
    out.note = "some member declares no mass outside the window";
  } else {
    out.verdict = Verdict::Pass;
  }
  c.conditions.push_back(out);

  // 4: translation modulus of f o gamma, zero outside the range of g^C
  Condition tr;
  tr.name = "translation";
  std::vector<double> hs = log_grid(prm.rho * 1e-3, prm.rho, prm.h_points);
  std::vector<double> curve(hs.size() * 2, 0.0), hgrid;
  for (double h : hs) hgrid.push_back(-h);
  std::reverse(hgrid.begin(), hgrid.end());
  for (double h : hs) hgrid.push_back(h);
  QuadOptions qo;
  qo.tol = prm.tol;
  for (const auto& f : G.members) {
    auto F = [&](double x) { return (x < xs.xlo || x > xs.xhi) ? 0.0 : f(xs.gamma(x)); };
    for (std::size_t i = 0; i < hgrid.size(); ++i) {
      const double h = hgrid[i];
      std::vector<double> pts;
      for (double x : xs.cuts) {
        pts.push_back(x);
        pts.push_back(x - h);
      }
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      double I = gk_integrate([&](double x) { return std::pow(std::abs(F(x + h) - F(x)), p); }, pts, qo);
      curve[i] = std::max(curve[i], I);
    }
  }
  double worst_tr = *std::max_element(curve.begin(), curve.end());
  tr.series["h"] = hgrid;
  tr.series["modulus"] = curve;
  tr.values["max_modulus"] = worst_tr;
  tr.values["target"] = target;
  tr.verdict = pass_if(worst_tr < target);
  c.conditions.push_back(tr);
  finish(c);
  return c;
}

Certificate dc_diagnose(const FamilySample& S, const Derivator& g, const DcParams& prm) {
  BcParts p = bc_parts(S, g, prm.deltas, prm.threads);
  Certificate c = skeleton("dc", p.grid, g, p.deltas);
  c.params["eps"] = prm.eps;
  c.params["n"] = static_cast<double>(prm.n);
  c.params["cover_cap"] = prm.cover_cap;
  c.conditions.push_back(bounded(p.vals));
  c.conditions.push_back(equicontinuity(p, prm.eps));
  c.conditions.push_back(stability(p, g, prm.eps, prm.cover_cap, c.witnesses));

  Condition jt;
  jt.name = "jump_tail";
  std::vector<double> per_member;
  double worst = 0;
  bool unknown = false;
  const auto& order = c.enumeration;
  for (std::size_t m = 0; m < S.members.size(); ++m) {
    JumpSeries js;
    try {
      js = jump_series(S.members[m], g, prm.tol);
    } catch (const Error& e) {
      if (e.code() == Errc::NoRightLimit)
        fail(Errc::NotDecomposable, "member " + std::to_string(m) + ": " + e.what());
      throw;
    }
    double s = 0;
    for (std::size_t k = prm.n; k < order.size(); ++k)
      for (const auto& a : js.atoms)
        if (a.d == order[k]) s += std::abs(a.delta_f);
    if (js.error_bar) s += *js.error_bar;
    else unknown = true;
    per_member.push_back(s);
    worst = std::max(worst, s);
  }
  jt.series["per_member"] = per_member;
  jt.values["max_tail"] = worst;
  if (!(worst < prm.eps)) jt.verdict = Verdict::Fail;
  else if (unknown) {
    jt.verdict = Verdict::Inconclusive;
    jt.note = "jump mass beyond the stored atoms is unknown for some member";
  } else {
    jt.verdict = Verdict::Pass;
  }
  c.conditions.push_back(jt);
  finish(c);
  return c;
}

NetResult epsilon_net(const FamilySample& S, const Derivator& g, NetMetric metric, double eps, double p,
                      std::size_t cap) {
  NetResult r;
  if (S.members.empty()) return r;
  SampleGrid grid;
  Matrix vals;
  if (metric != NetMetric::Lp) {
    grid = sample_grid(g, S.sample_n);
    vals = evaluate(S, grid);
  }
  auto sup_dist = [&](std::size_t i, std::size_t j) {
    double m = 0;
    for (std::size_t k = 0; k < grid.t.size(); ++k) m = std::max(m, std::abs(vals[i][k] - vals[j][k]));
    return m;
  };
  auto dist = [&](std::size_t i, std::size_t j) -> double {
    if (i == j) return 0.0;
    switch (metric) {
      case NetMetric::Sup: return sup_dist(i, j);
      case NetMetric::DC: return sup_dist(i, j) + jump_series(S.members[i] - S.members[j], g).sum_abs;
      case NetMetric::Lp: {
        GFunction diff = S.members[i] - S.members[j];
        if (std::isinf(p)) return sup_norm(diff, g, g.lo(), g.hi());
        GFunction fp = abs_pow(diff, p);
        double via_gamma = integrate(fp, g, g.lo(), g.hi());
        double via_t = integrate_continuous_part(fp, g, g.lo(), g.hi()) + integrate_atoms(fp, g, g.lo(), g.hi());
        r.metric_consistency = std::max(r.metric_consistency, std::abs(via_gamma - via_t));
        return std::pow(std::max(0.0, via_gamma), 1.0 / p);
      }
    }
    return 0.0;
  };
  r.assignment.assign(S.members.size(), 0);
  for (std::size_t i = 0; i < S.members.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t who = 0;
    for (std::size_t c : r.centers) {
      double dd = dist(i, c);
      if (dd < best) {
        best = dd;
        who = c;
      }
    }
    if (best < eps) {
      r.assignment[i] = who;
      r.max_residual = std::max(r.max_residual, best);
    } else if (r.centers.size() < cap) {
      r.centers.push_back(i);
      r.assignment[i] = i;
    } else {
      r.success = false;
      r.witness = i;
      r.witness_distance = best;
      r.assignment[i] = who;
      break;
    }
  }
  return r;
}

}  // namespace stj
