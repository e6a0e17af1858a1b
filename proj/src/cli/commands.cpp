#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "stj/calculus.hpp"
#include "stj/cli.hpp"
#include "stj/compactness.hpp"
#include "stj/decompose.hpp"
#include "stj/error.hpp"
#include "stj/exponential.hpp"
#include "stj/gfunc.hpp"
#include "stj/grid.hpp"
#include "stj/io.hpp"

namespace stj::cli {

namespace {

using io::json;

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    fail(Errc::InvalidArgument, what + ": not a number: '" + s + "'");
  }
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return kInf;
  double p = parse_double(s, "--p");
  if (!(p >= 1)) fail(Errc::InvalidArgument, "--p must be in [1, inf]");
  return p;
}

std::pair<double, double> parse_pair(const std::string& s, const std::string& what) {
  auto comma = s.find(',');
  if (comma == std::string::npos) fail(Errc::InvalidArgument, what + " expects two numbers 'c,d'");
  double a = parse_double(s.substr(0, comma), what), b = parse_double(s.substr(comma + 1), what);
  if (!(a <= b)) fail(Errc::InvalidArgument, what + ": need c <= d");
  return {a, b};
}

double default_tol() {
  if (const char* env = std::getenv("STJ_TOL")) {
    double t = parse_double(env, "STJ_TOL");
    if (!(t > 0)) fail(Errc::InvalidArgument, "STJ_TOL must be positive");
    return t;
  }
  return 1e-8;
}

json p_json(double p) { return std::isinf(p) ? json("inf") : json(p); }

json certificate_json(const Certificate& c) {
  json j;
  j["criterion"] = c.criterion;
  j["overall"] = verdict_name(c.overall);
  j["finite_scale"] = c.finite_scale;
  j["params"] = c.params;
  j["grid"] = c.grid;
  j["enumeration"] = c.enumeration;
  j["witnesses"] = c.witnesses;
  json conds = json::array();
  for (const auto& k : c.conditions) {
    json x;
    x["name"] = k.name;
    x["verdict"] = verdict_name(k.verdict);
    x["values"] = k.values;
    x["series"] = k.series;
    if (!k.note.empty()) x["note"] = k.note;
    conds.push_back(x);
  }
  j["conditions"] = conds;
  return j;
}

void certificate_csv(const Certificate& c, const std::string& path) {
  std::ostringstream os;
  os << "condition,series,index,value\n";
  for (const auto& k : c.conditions)
    for (const auto& [name, v] : k.series)
      for (std::size_t i = 0; i < v.size(); ++i) os << k.name << "," << name << "," << i << "," << io::fmt12(v[i]) << "\n";
  io::write_text(path, os.str());
}

struct Ctx {
  std::ostream& out;
  double tol;
  std::string out_path;
  void emit(const json& j) const {
    std::string s = io::dump_stable(j);
    if (out_path.empty()) out << s;
    else io::write_text(out_path, s);
  }
};

struct Loaded {
  Derivator g;
  io::FunctionSpec spec;
};

Loaded load_pair(const std::string& gpath, const std::string& fpath) {
  Loaded l{io::parse_derivator(io::read_json_file(gpath)), io::parse_function_spec(io::read_json_file(fpath))};
  return l;
}

json interval_json(const std::vector<Interval>& v) {
  json a = json::array();
  for (const auto& i : v) a.push_back({i.lo, i.hi});
  return a;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stieltjes calculus toolkit"};
  app.require_subcommand(1);
  std::string out_path, tol_str;
  int threads = 1;
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--tol", tol_str, "tolerance (default 1e-8 or $STJ_TOL)");
  app.add_option("--threads", threads, "worker threads for family checks")->check(CLI::PositiveNumber);
  app.fallthrough();

  std::string gpath, fpath, famfile, csv, interval, p_str = "2", window, mode = "ls", which, metric = "sup";
  std::vector<double> at, deltas;
  double eps = 0.1, R = 0, rho = 0.01, alpha = 0, lambda = 1;
  std::string lambda_fn;
  int degree = 5, sample_n = 400, cap = 64;
  std::size_t n_trunc = 0;
  bool no_declared = false, verify = false;

  auto* der = app.add_subcommand("derivator", "inspect a derivator");
  der->require_subcommand(1);
  auto* analyze = der->add_subcommand("analyze", "classify points and report the split");
  analyze->add_option("spec", gpath)->required();
  analyze->add_option("--at", at, "evaluate g and g(t+) here")->delimiter(',');
  auto* canon = der->add_subcommand("canonical", "re-emit the spec in canonical form");
  canon->add_option("spec", gpath)->required();

  auto* integ = app.add_subcommand("integrate", "Lebesgue-Stieltjes integral over [c, d)");
  integ->add_option("derivator", gpath)->required();
  integ->add_option("function", fpath)->required();
  integ->add_option("--interval", interval, "c,d (default: the window)");
  std::string method = "lebesgue";
  long direct_n = 20000;
  integ->add_option("--method", method, "lebesgue | direct | extrapolated")
      ->check(CLI::IsMember({"lebesgue", "direct", "extrapolated"}));
  integ->add_option("--cells", direct_n, "cells for the direct sums")->check(CLI::PositiveNumber);

  auto* deriv = app.add_subcommand("derive", "g-derivative");
  deriv->add_option("derivator", gpath)->required();
  deriv->add_option("function", fpath)->required();
  deriv->add_option("--at", at, "points")->required()->delimiter(',');
  deriv->add_flag("--no-declared", no_declared, "ignore declared derivatives and right limits");

  auto* norm = app.add_subcommand("norm", "L^p_g norm, or Sobolev norm for a sobolev pair");
  norm->add_option("derivator", gpath)->required();
  norm->add_option("function", fpath)->required();
  norm->add_option("--p", p_str, "1 <= p <= inf");
  norm->add_option("--interval", interval, "c,d (default: the window)");

  auto* fact = app.add_subcommand("factorize", "f = tilde_f o g");
  fact->add_option("derivator", gpath)->required();
  fact->add_option("function", fpath)->required();
  fact->add_option("--csv", csv, "tilde_f samples (x, value)");
  fact->add_option("--sample-n", sample_n)->check(CLI::Range(3, 1000000));

  auto* weier = app.add_subcommand("weierstrass", "polynomial in g approximating f");
  weier->add_option("derivator", gpath)->required();
  weier->add_option("function", fpath)->required();
  weier->add_option("--degree", degree)->check(CLI::Range(0, 200));
  weier->add_option("--mode", mode)->check(CLI::IsMember({"ls", "nodes"}));
  weier->add_option("--sample-n", sample_n)->check(CLI::Range(3, 1000000));

  auto* expg = app.add_subcommand("expg", "g-exponential");
  expg->add_option("derivator", gpath)->required();
  expg->add_option("--lambda", lambda, "constant rate");
  expg->add_option("--lambda-fn", lambda_fn, "function spec file for a variable rate");
  expg->add_option("--alpha", alpha);
  expg->add_option("--at", at, "points")->delimiter(',');
  expg->add_flag("--verify", verify, "integral, jump and inverse residuals on a grid");
  expg->add_option("--csv", csv, "samples (t, exp_g)");

  auto* ext = app.add_subcommand("extend", "extension operator of a Sobolev pair");
  ext->add_option("sobolev", fpath, "{\"derivator\":..., \"function\":{\"kind\":\"sobolev\",...}}")->required();
  ext->add_option("--window", window, "A,B")->required();
  ext->add_option("--p", p_str);
  ext->add_option("--csv", csv, "samples (t, Pf, density)");

  auto* comp = app.add_subcommand("compact", "finite-scale compactness certificates");
  comp->add_option("criterion", which)->required()->check(CLI::IsMember({"bc", "buc", "lp", "dc", "net"}));
  comp->add_option("family", famfile)->required();
  comp->add_option("--eps", eps)->check(CLI::PositiveNumber);
  comp->add_option("--delta", deltas, "delta grid")->delimiter(',');
  comp->add_option("--p", p_str);
  comp->add_option("--R", R);
  comp->add_option("--rho", rho)->check(CLI::PositiveNumber);
  comp->add_option("--n", n_trunc, "jump truncation");
  comp->add_option("--cap", cap, "covering / net size cap")->check(CLI::PositiveNumber);
  comp->add_option("--metric", metric)->check(CLI::IsMember({"sup", "lp", "dc"}));
  comp->add_option("--csv", csv, "long-format series dump");

  auto* dec = app.add_subcommand("decompose", "jump decompositions");
  dec->add_option("kind", which)->required()->check(CLI::IsMember({"add", "mul"}));
  dec->add_option("derivator", gpath)->required();
  dec->add_option("function", fpath)->required();
  dec->add_option("--alpha", alpha);
  dec->add_option("--csv", csv, "sampled parts");

  std::vector<const char*> argv{"stj"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    Ctx ctx{out, tol_str.empty() ? default_tol() : parse_double(tol_str, "--tol"), out_path};
    if (!(ctx.tol > 0)) fail(Errc::InvalidArgument, "--tol must be positive");

    if (*analyze) {
      Derivator g = io::parse_derivator(io::read_json_file(gpath));
      auto pc = g.classify();
      auto gamma = g.pseudoinverse();
      json j;
      j["window"] = {g.lo(), g.hi()};
      j["D_g"] = pc.jump_points;
      j["C_g"] = interval_json(pc.constancy_intervals);
      j["N_minus"] = pc.n_minus;
      j["N_plus"] = pc.n_plus;
      j["range_continuous"] = {gamma.lo(), gamma.hi()};
      j["total_jump"] = g.jumps_before(g.hi()) + 0.0;
      if (g.tail_bound()) j["tail_bound"] = *g.tail_bound();
      j["measure_window"] = measure(g, {{g.lo(), g.hi()}});
      json pts = json::array();
      for (double t : at) {
        json p;
        p["t"] = t;
        p["g"] = g.eval(t);
        if (t < g.hi()) p["g_right"] = g.eval_right(t);
        p["dg"] = g.delta(t);
        pts.push_back(p);
      }
      if (!at.empty()) j["points"] = pts;
      ctx.emit(j);
    } else if (*canon) {
      std::string s = io::dump_exact(io::to_json(io::parse_derivator(io::read_json_file(gpath))));
      if (out_path.empty()) out << s;
      else io::write_text(out_path, s);
    } else if (*integ) {
      auto [g, spec] = load_pair(gpath, fpath);
      GFunction f = io::build_function(spec, g);
      auto [c, d] = interval.empty() ? std::pair{g.lo(), g.hi()} : parse_pair(interval, "--interval");
      json j;
      j["interval"] = {c, d};
      j["method"] = method;
      if (method == "lebesgue") {
        double L = integrate_lebesgue_part(f, g, c, d, ctx.tol), A = integrate_atoms(f, g, c, d);
        j["lebesgue_part"] = L;
        j["atoms"] = A;
        j["value"] = L + A;
      } else if (method == "direct") {
        j["value"] = integrate_direct(f, g, c, d, direct_n);
        j["cells"] = direct_n;
      } else {
        j["value"] = integrate_direct_extrapolated(f, g, c, d, direct_n);
        j["cells"] = direct_n;
      }
      ctx.emit(j);
    } else if (*deriv) {
      auto [g, spec] = load_pair(gpath, fpath);
      DerivOptions o{ctx.tol, !no_declared};
      json pts = json::array();
      if (io::is_sobolev(spec)) {
        SobolevFunction s = io::build_sobolev(spec, g);
        GFunction u = ftc_build(s, g);
        for (double t : at) pts.push_back({{"t", t}, {"value", g_derivative(u, g, t, o)}, {"density", s.density(t)}});
      } else {
        GFunction f = io::build_function(spec, g);
        for (double t : at) pts.push_back({{"t", t}, {"value", g_derivative(f, g, t, o)}});
      }
      ctx.emit(json{{"points", pts}});
    } else if (*norm) {
      auto [g, spec] = load_pair(gpath, fpath);
      double p = parse_p(p_str);
      json j;
      j["p"] = p_json(p);
      if (io::is_sobolev(spec)) {
        SobolevFunction s = io::build_sobolev(spec, g);
        j["sobolev_norm"] = sobolev_norm(s, g, p);
        auto e = embedding_check(s, g, p);
        j["embedding"] = {{"mu", e.mu}, {"sup_u", e.sup_u}, {"lp_u", e.lp_u}, {"lp_density", e.lp_density},
                          {"C", e.C}, {"bound", e.bound}, {"pass", e.pass}};
      } else {
        GFunction f = io::build_function(spec, g);
        auto [c, d] = interval.empty() ? std::pair{g.lo(), g.hi()} : parse_pair(interval, "--interval");
        j["interval"] = {c, d};
        j["value"] = lp_norm(f, g, p, c, d, ctx.tol);
      }
      ctx.emit(j);
    } else if (*fact) {
      auto [g, spec] = load_pair(gpath, fpath);
      GFunction f = io::build_function(spec, g);
      FactorizationOptions o;
      o.sample_n = sample_n;
      o.recon_tol = std::max(ctx.tol, 1e-9);
      auto r = factorize(f, g, o);
      json j;
      j["x"] = r.x;
      j["value"] = r.value;
      j["max_error"] = r.max_error;
      j["gaps"] = interval_json(r.gaps);
      j["uniform_delta"] = r.uniform_delta;
      j["uniform_omega"] = r.uniform_omega;
      json st = json::array();
      for (auto& [x, s] : r.sigma_table) st.push_back({x, s});
      j["sigma_table"] = st;
      if (!csv.empty()) io::write_csv(csv, {"x", "value"}, {r.x, r.value});
      ctx.emit(j);
    } else if (*weier) {
      auto [g, spec] = load_pair(gpath, fpath);
      GFunction f = io::build_function(spec, g);
      auto w = weierstrass_fit(f, g, degree, sample_n, mode == "ls" ? FitMode::LeastSquares : FitMode::ChebyshevNodes);
      json j;
      j["degree"] = degree;
      j["mode"] = mode;
      j["coefficients"] = w.coefficients;
      j["chebyshev"] = w.chebyshev;
      j["x_range"] = {w.x_lo, w.x_hi};
      j["sup_error"] = w.sup_error;
      j["condition"] = w.condition;
      ctx.emit(j);
    } else if (*expg) {
      Derivator g = io::parse_derivator(io::read_json_file(gpath));
      ExpSpec s = lambda_fn.empty()
                      ? ExpSpec::constant(lambda, alpha)
                      : ExpSpec::variable(io::build_function(io::parse_function_spec(io::read_json_file(lambda_fn)), g), alpha);
      json j;
      j["alpha"] = alpha;
      if (lambda_fn.empty()) j["lambda"] = lambda;
      json pts = json::array();
      for (double t : at) {
        json p{{"t", t}, {"value", exp_g(s, g, t)}};
        if (t < g.hi()) p["right"] = exp_g_right(s, g, t);
        pts.push_back(p);
      }
      j["points"] = pts;
      SampleGrid grid = sample_grid(g, 201, 20);
      if (verify) {
        auto r = verify_exp(s, g, grid.t, std::min(ctx.tol, 1e-10));
        j["residuals"] = {{"integral", r.integral_residual}, {"jump", r.jump_residual},
                          {"inverse", r.inverse_residual}, {"pairs", r.pairs}};
      }
      if (!csv.empty()) {
        std::vector<double> v;
        for (double t : grid.t) v.push_back(exp_g(s, g, t));
        io::write_csv(csv, {"t", "exp_g"}, {grid.t, v});
      }
      ctx.emit(j);
    } else if (*ext) {
      json file = io::read_json_file(fpath);
      if (!file.is_object() || !file.contains("derivator") || !file.contains("function"))
        fail(Errc::ParseError, fpath + ": expected {\"derivator\": ..., \"function\": ...}");
      for (auto it = file.begin(); it != file.end(); ++it)
        if (it.key() != "derivator" && it.key() != "function") fail(Errc::ParseError, "unknown key '" + it.key() + "'");
      Derivator g = io::parse_derivator(file["derivator"]);
      SobolevFunction s = io::build_sobolev(io::parse_function_spec(file["function"]), g);
      auto [A, B] = parse_pair(window, "--window");
      double p = parse_p(p_str);
      auto r = extend(s, g, {A, B}, p);
      json j;
      j["a"] = r.a;
      j["b"] = r.b;
      j["window"] = {r.window.lo, r.window.hi};
      j["p"] = p_json(p);
      j["lambda_minus"] = r.lambda_minus;
      j["lambda_plus"] = r.lambda_plus;
      j["C_lambda_minus"] = r.C_lambda_minus;
      j["C_lambda_plus"] = r.C_lambda_plus;
      j["C_embed"] = r.C_embed;
      j["C_tilde"] = r.C_tilde;
      j["core_max_diff"] = r.core_max_diff;
      j["off_core_sup"] = r.off_core_sup;
      j["off_core_bound"] = r.off_core_bound;
      j["lp_Pf"] = r.lp_Pf;
      j["lp_f"] = r.lp_f;
      j["w_Pf"] = r.w_Pf;
      j["w_f"] = r.w_f;
      j["sup_Pf"] = r.sup_Pf;
      j["sup_f"] = r.sup_f;
      j["boundary_left"] = r.boundary_left;
      j["boundary_right"] = r.boundary_right;
      j["concat_residual"] = r.concat_residual;
      j["checks"] = {{"lp", r.lp_ok}, {"w", r.w_ok}, {"sup", r.sup_ok}, {"off_core", r.off_core_ok}};
      if (!csv.empty()) {
        std::vector<double> t, pf, dens;
        for (int i = 0; i <= 1000; ++i) {
          double x = i == 1000 ? B : A + (B - A) * i / 1000.0;
          t.push_back(x);
          pf.push_back(r.Pf(x));
          dens.push_back(r.density(x));
        }
        io::write_csv(csv, {"t", "Pf", "density"}, {t, pf, dens});
      }
      ctx.emit(j);
    } else if (*comp) {
      io::Family fam = io::parse_family(io::read_json_file(famfile));
      const double p = parse_p(p_str);
      auto need_members = [&] {
        if (fam.sample.members.empty() || !fam.g) fail(Errc::EmptyFamily, "family has no function members");
      };
      if (which == "net") {
        need_members();
        NetMetric m = metric == "sup" ? NetMetric::Sup : metric == "lp" ? NetMetric::Lp : NetMetric::DC;
        auto r = epsilon_net(fam.sample, *fam.g, m, eps, p, static_cast<std::size_t>(cap));
        json j;
        j["metric"] = metric;
        j["eps"] = eps;
        j["centers"] = r.centers;
        j["assignment"] = r.assignment;
        j["max_residual"] = r.max_residual;
        j["success"] = r.success;
        if (r.witness) {
          j["witness"] = *r.witness;
          j["witness_distance"] = r.witness_distance;
        }
        if (m == NetMetric::Lp) j["metric_consistency"] = r.metric_consistency;
        ctx.emit(j);
      } else {
        Certificate c;
        if (which == "bc" || which == "buc") {
          need_members();
          BcParams b;
          b.eps = eps;
          b.deltas = deltas;
          b.cover_cap = cap;
          b.threads = threads;
          c = which == "bc" ? bc_diagnose(fam.sample, *fam.g, b) : buc_diagnose(fam.sample, *fam.g, b);
        } else if (which == "lp") {
          if (!fam.sequences.empty()) {
            c = lp_seq_diagnose(fam.sequences, p, eps);
          } else {
            need_members();
            LpParams l;
            l.eps = eps;
            l.n = n_trunc;
            l.R = R;
            l.rho = rho;
            l.tol = std::min(ctx.tol, 1e-10);
            c = lp_diagnose(fam.sample, *fam.g, p, l);
          }
        } else {
          need_members();
          DcParams dp;
          dp.eps = eps;
          dp.n = n_trunc;
          dp.deltas = deltas;
          dp.cover_cap = cap;
          dp.threads = threads;
          c = dc_diagnose(fam.sample, *fam.g, dp);
        }
        if (!csv.empty()) certificate_csv(c, csv);
        ctx.emit(certificate_json(c));
      }
    } else if (*dec) {
      auto [g, spec] = load_pair(gpath, fpath);
      GFunction f = io::build_function(spec, g);
      SampleGrid grid = sample_grid(g, 401, 20);
      json j;
      std::vector<double> fv, a, b;
      if (which == "add") {
        auto r = additive_split(f, g, std::max(ctx.tol, 1e-9));
        j["jump_sum"] = r.jump_sum;
        j["max_residual"] = r.max_residual;
        j["integral_discrepancy"] = r.integral_discrepancy;
        j["reconstruction_error"] = r.reconstruction_error;
        j["dc_norm"] = dc_norm(f, g, std::max(ctx.tol, 1e-9));
        json atoms = json::array();
        for (const auto& e : r.jumps.atoms) atoms.push_back({{"d", e.d}, {"delta_f", e.delta_f}, {"declared", e.declared}});
        j["atoms"] = atoms;
        if (r.jumps.error_bar) j["error_bar"] = *r.jumps.error_bar;
        for (double t : grid.t) {
          fv.push_back(f(t));
          a.push_back(r.fB(t));
          b.push_back(r.fC(t));
        }
        if (!csv.empty()) io::write_csv(csv, {"t", "f", "fB", "fC"}, {grid.t, fv, a, b});
      } else {
        auto r = multiplicative_split(f, g, alpha, std::max(ctx.tol, 1e-9));
        j["alpha"] = r.alpha;
        j["log_sum"] = r.log_sum;
        j["D_gf"] = r.d_gf;
        j["form_discrepancy"] = r.form_discrepancy;
        j["max_psi_residual"] = r.max_psi_residual;
        j["reconstruction_error"] = r.reconstruction_error;
        j["phi_min"] = r.phi_min;
        j["positivity_bound"] = r.positivity_bound;
        for (double t : grid.t) {
          fv.push_back(f(t));
          a.push_back(r.phi(t));
          b.push_back(r.psi(t));
        }
        if (!csv.empty()) io::write_csv(csv, {"t", "f", "phi", "psi"}, {grid.t, fv, a, b});
      }
      ctx.emit(j);
    }
    return 0;
  } catch (const Error& e) {
    err << "stj: " << e.what() << "\n";
    return is_validation(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "stj: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace stj::cli
