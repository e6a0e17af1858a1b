#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "stj/error.hpp"
#include "stj/exponential.hpp"
#include "stj/io.hpp"

namespace stj::io {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(Errc::ParseError, where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(Errc::ParseError, where + ": unknown key '" + it.key() + "'");
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail(Errc::ParseError, where + ": missing '" + key + "'");
  if (!j[key].is_number()) fail(Errc::ParseError, where + ": '" + key + "' must be a number");
  return j[key].get<double>();
}

double number_or(const json& j, const std::string& key, double dflt, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : dflt;
}

bool bool_or(const json& j, const std::string& key, bool dflt, const std::string& where) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_boolean()) fail(Errc::ParseError, where + ": '" + key + "' must be a boolean");
  return j[key].get<bool>();
}

std::string string_of(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) fail(Errc::ParseError, where + ": '" + key + "' must be a string");
  return j[key].get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_array()) fail(Errc::ParseError, where + ": '" + key + "' must be an array");
  std::vector<double> v;
  for (const auto& x : j[key]) {
    if (!x.is_number()) fail(Errc::ParseError, where + ": '" + key + "' must hold numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

const std::set<std::string> kCommon = {"kind", "jumps", "jump_tail", "label", "kinks"};

std::set<std::string> with_common(std::initializer_list<std::string> extra) {
  std::set<std::string> s = kCommon;
  s.insert(extra.begin(), extra.end());
  return s;
}

json canonical(const json& j, const std::string& where);

json canonical_list(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty())
    fail(Errc::ParseError, where + ": '" + key + "' must be a non-empty array of function specs");
  json out = json::array();
  for (std::size_t i = 0; i < j[key].size(); ++i)
    out.push_back(canonical(j[key][i], where + "." + key + "[" + std::to_string(i) + "]"));
  return out;
}

json canonical(const json& j, const std::string& where) {
  if (!j.is_object()) fail(Errc::ParseError, where + ": function spec must be an object");
  const std::string kind = string_of(j, "kind", where);
  json c;
  c["kind"] = kind;
  const std::string w = where + " (" + kind + ")";
  if (kind == "constant") {
    check_keys(j, with_common({"value"}), w);
    c["value"] = number(j, "value", w);
  } else if (kind == "poly" || kind == "poly_g") {
    check_keys(j, with_common({"coeffs"}), w);
    c["coeffs"] = numbers(j, "coeffs", w);
    if (c["coeffs"].empty()) fail(Errc::ParseError, w + ": empty coefficient list");
  } else if (kind == "trig") {
    check_keys(j, with_common({"fn", "freq", "phase", "amp", "var"}), w);
    std::string fn = j.contains("fn") ? string_of(j, "fn", w) : "sin";
    std::string var = j.contains("var") ? string_of(j, "var", w) : "t";
    if (fn != "sin" && fn != "cos") fail(Errc::ParseError, w + ": fn must be sin or cos");
    if (var != "t" && var != "g") fail(Errc::ParseError, w + ": var must be t or g");
    c["fn"] = fn;
    c["var"] = var;
    c["freq"] = number_or(j, "freq", 1.0, w);
    c["phase"] = number_or(j, "phase", 0.0, w);
    c["amp"] = number_or(j, "amp", 1.0, w);
  } else if (kind == "indicator") {
    check_keys(j, with_common({"lo", "hi", "include_lo", "include_hi"}), w);
    c["lo"] = number(j, "lo", w);
    c["hi"] = number(j, "hi", w);
    c["include_lo"] = bool_or(j, "include_lo", true, w);
    c["include_hi"] = bool_or(j, "include_hi", false, w);
  } else if (kind == "step") {
    check_keys(j, with_common({"at", "values"}), w);
    c["at"] = numbers(j, "at", w);
    c["values"] = numbers(j, "values", w);
    if (c["values"].size() != c["at"].size() + 1) fail(Errc::ParseError, w + ": need one more value than breaks");
  } else if (kind == "composed") {
    check_keys(j, with_common({"h", "scale"}), w);
    std::string h = string_of(j, "h", w);
    if (h != "sin" && h != "cos" && h != "exp" && h != "abs") fail(Errc::ParseError, w + ": h must be sin, cos, exp or abs");
    c["h"] = h;
    c["scale"] = number_or(j, "scale", 1.0, w);
  } else if (kind == "oscillating") {
    check_keys(j, with_common({"d"}), w);
    c["d"] = number(j, "d", w);
  } else if (kind == "piecewise") {
    check_keys(j, with_common({"breaks", "pieces"}), w);
    c["breaks"] = numbers(j, "breaks", w);
    c["pieces"] = canonical_list(j, "pieces", w);
    if (c["pieces"].size() != c["breaks"].size() + 1) fail(Errc::ParseError, w + ": need one more piece than breaks");
  } else if (kind == "sum") {
    check_keys(j, with_common({"terms"}), w);
    c["terms"] = canonical_list(j, "terms", w);
  } else if (kind == "scaled") {
    check_keys(j, with_common({"c", "of"}), w);
    c["c"] = number(j, "c", w);
    if (!j.contains("of")) fail(Errc::ParseError, w + ": missing 'of'");
    c["of"] = canonical(j["of"], w + ".of");
  } else if (kind == "expg") {
    check_keys(j, with_common({"lambda", "lambda_fn", "alpha"}), w);
    if (j.contains("lambda") == j.contains("lambda_fn")) fail(Errc::ParseError, w + ": give exactly one of lambda, lambda_fn");
    if (j.contains("lambda")) c["lambda"] = number(j, "lambda", w);
    else c["lambda_fn"] = canonical(j["lambda_fn"], w + ".lambda_fn");
    c["alpha"] = number_or(j, "alpha", 0.0, w);
  } else if (kind == "g") {
    check_keys(j, kCommon, w);
  } else if (kind == "sobolev") {
    check_keys(j, with_common({"a", "b", "base_value", "density"}), w);
    c["a"] = number(j, "a", w);
    c["b"] = number(j, "b", w);
    c["base_value"] = number_or(j, "base_value", 0.0, w);
    if (!j.contains("density")) fail(Errc::ParseError, w + ": missing 'density'");
    c["density"] = canonical(j["density"], w + ".density");
  } else {
    fail(Errc::ParseError, where + ": unknown function kind '" + kind + "'");
  }
  if (j.contains("jumps")) {
    const json& jt = j["jumps"];
    std::vector<std::pair<double, double>> rows;
    if (jt.is_array()) {
      for (const auto& r : jt) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
          fail(Errc::ParseError, w + ": jumps entries must be [d, right_limit]");
        rows.emplace_back(r[0].get<double>(), r[1].get<double>());
      }
    } else {
      fail(Errc::ParseError, w + ": jumps must be an array of [d, right_limit]");
    }
    std::sort(rows.begin(), rows.end());
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].first == rows[i - 1].first) fail(Errc::ParseError, w + ": repeated jump point in table");
    if (!rows.empty()) {
      json arr = json::array();
      for (auto& [d, v] : rows) arr.push_back({d, v});
      c["jumps"] = arr;
    }
  }
  if (j.contains("jump_tail")) {
    double t = number(j, "jump_tail", w);
    if (!(t >= 0)) fail(Errc::ParseError, w + ": jump_tail must be non-negative");
    c["jump_tail"] = t;
  }
  if (j.contains("kinks")) {
    auto k = numbers(j, "kinks", w);
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    if (!k.empty()) c["kinks"] = k;
  }
  if (j.contains("label")) {
    std::string l = string_of(j, "label", w);
    if (!l.empty()) c["label"] = l;
  }
  return c;
}

GFunction build(const json& c, const Derivator& g) {
  const std::string kind = c["kind"];
  GFunction f;
  if (kind == "constant") {
    f = constant(c["value"].get<double>());
  } else if (kind == "poly") {
    f = polynomial(c["coeffs"].get<std::vector<double>>());
  } else if (kind == "poly_g") {
    auto co = c["coeffs"].get<std::vector<double>>();
    f = compose_with_g([co](double x) { return horner(co, x); }, g, "poly(g)");
  } else if (kind == "trig") {
    const bool is_sin = c["fn"] == "sin";
    const double w = c["freq"], ph = c["phase"], a = c["amp"];
    Eval h = [=](double x) { return a * (is_sin ? std::sin(w * x + ph) : std::cos(w * x + ph)); };
    if (c["var"] == "g") {
      f = compose_with_g(h, g, "trig(g)");
    } else {
      f.f = h;
      f.gderiv = {};
      f.label = "trig";
    }
  } else if (kind == "indicator") {
    f = indicator(c["lo"], c["hi"], c["include_lo"], c["include_hi"]);
  } else if (kind == "step") {
    f = step_table(c["at"].get<std::vector<double>>(), c["values"].get<std::vector<double>>());
  } else if (kind == "composed") {
    const std::string h = c["h"];
    const double s = c["scale"];
    Eval fn;
    if (h == "sin") fn = [s](double x) { return std::sin(s * x); };
    else if (h == "cos") fn = [s](double x) { return std::cos(s * x); };
    else if (h == "exp") fn = [s](double x) { return std::exp(s * x); };
    else fn = [s](double x) { return std::abs(s * x); };
    f = compose_with_g(fn, g, h + "(g)");
  } else if (kind == "oscillating") {
    f = oscillating(c["d"]);
  } else if (kind == "piecewise") {
    std::vector<GFunction> pieces;
    for (const auto& p : c["pieces"]) pieces.push_back(build(p, g));
    f = piecewise(c["breaks"].get<std::vector<double>>(), std::move(pieces));
  } else if (kind == "sum") {
    f = build(c["terms"][0], g);
    for (std::size_t i = 1; i < c["terms"].size(); ++i) f = f + build(c["terms"][i], g);
  } else if (kind == "scaled") {
    f = scale(build(c["of"], g), c["c"].get<double>());
  } else if (kind == "expg") {
    ExpSpec s = c.contains("lambda") ? ExpSpec::constant(c["lambda"], c["alpha"])
                                     : ExpSpec::variable(build(c["lambda_fn"], g), c["alpha"]);
    f = exp_g_function(s, g);
  } else if (kind == "g") {
    f = of_derivator(g);
  } else if (kind == "sobolev") {
    fail(Errc::InvalidArgument, "a sobolev pair is not a plain function here");
  }
  if (c.contains("jumps"))
    for (const auto& r : c["jumps"]) {
      double d = r[0], v = r[1];
      if (!g.is_jump(d)) fail(Errc::InvalidArgument, "jump table key " + fmt12(d) + " is not a jump point of g");
      f.right_limits[d] = v;
    }
  if (c.contains("jump_tail")) f.jump_tail = c["jump_tail"].get<double>();
  if (c.contains("kinks"))
    for (double k : c["kinks"]) f.kinks.push_back(k);
  if (c.contains("label")) f.label = c["label"];
  return f;
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::ParseError, e.what());
  }
}

Derivator parse_derivator(const json& j) {
  const std::string w = "derivator";
  check_keys(j, {"window", "breakpoints", "cont_values", "jumps", "tail_bound"}, w);
  auto bp = numbers(j, "breakpoints", w);
  auto cv = numbers(j, "cont_values", w);
  std::vector<Jump> jumps;
  if (j.contains("jumps")) {
    if (!j["jumps"].is_array()) fail(Errc::ParseError, w + ": jumps must be an array of [d, dg]");
    for (const auto& r : j["jumps"]) {
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        fail(Errc::ParseError, w + ": jumps entries must be [d, dg]");
      jumps.push_back({r[0].get<double>(), r[1].get<double>()});
    }
  }
  std::optional<double> tail;
  if (j.contains("tail_bound") && !j["tail_bound"].is_null()) tail = number(j, "tail_bound", w);
  Derivator g = Derivator::build(bp, cv, jumps, tail);
  if (j.contains("window")) {
    auto win = numbers(j, "window", w);
    if (win.size() != 2 || win[0] != g.lo() || win[1] != g.hi())
      fail(Errc::InvalidBreakpoints, "window must equal [first breakpoint, last breakpoint]");
  }
  return g;
}

json to_json(const Derivator& g) {
  json j;
  j["window"] = {g.lo(), g.hi()};
  j["breakpoints"] = g.breakpoints();
  j["cont_values"] = g.cont_values();
  json js = json::array();
  for (const auto& x : g.jumps()) js.push_back({x.at, x.size});
  j["jumps"] = js;
  if (g.tail_bound()) j["tail_bound"] = *g.tail_bound();
  return j;
}

FunctionSpec parse_function_spec(const json& j) { return FunctionSpec{canonical(j, "function")}; }

json to_json(const FunctionSpec& s) { return s.node; }

GFunction build_function(const FunctionSpec& s, const Derivator& g) { return build(s.node, g); }

bool is_sobolev(const FunctionSpec& s) { return s.node["kind"] == "sobolev"; }

SobolevFunction build_sobolev(const FunctionSpec& s, const Derivator& g) {
  if (!is_sobolev(s)) fail(Errc::InvalidArgument, "expected a function of kind sobolev");
  SobolevFunction u;
  u.a = s.node["a"];
  u.b = s.node["b"];
  u.base_value = s.node["base_value"];
  u.density = build(s.node["density"], g);
  if (!(u.a < u.b) || u.a < g.lo() || u.b > g.hi())
    fail(Errc::OutOfWindow, "sobolev interval must satisfy A <= a < b <= B");
  return u;
}

Family parse_family(const json& j) {
  const std::string w = "family";
  check_keys(j, {"derivator", "members", "sample_n", "outside_mass", "sequences", "label"}, w);
  Family fam;
  if (j.contains("sequences")) {
    if (!j["sequences"].is_array() || j["sequences"].empty())
      fail(Errc::ParseError, w + ": sequences must be a non-empty array");
    for (const auto& s : j["sequences"]) {
      check_keys(s, {"x", "tail"}, w + ".sequences");
      Sequence q;
      q.x = numbers(s, "x", w + ".sequences");
      if (s.contains("tail") && !s["tail"].is_null()) q.tail = number(s, "tail", w + ".sequences");
      fam.sequences.push_back(std::move(q));
    }
  }
  if (j.contains("members")) {
    if (!j.contains("derivator")) fail(Errc::ParseError, w + ": members need a derivator");
    fam.g = parse_derivator(j["derivator"]);
    if (!j["members"].is_array()) fail(Errc::ParseError, w + ": members must be an array");
    for (std::size_t i = 0; i < j["members"].size(); ++i) {
      FunctionSpec s{canonical(j["members"][i], w + ".members[" + std::to_string(i) + "]")};
      fam.sample.members.push_back(build(s.node, *fam.g));
      fam.specs.push_back(std::move(s));
    }
    if (j.contains("sample_n")) {
      double n = number(j, "sample_n", w);
      if (!(n >= 3) || n != std::floor(n)) fail(Errc::ParseError, w + ": sample_n must be an integer >= 3");
      fam.sample.sample_n = static_cast<int>(n);
    }
    if (j.contains("outside_mass")) {
      if (!j["outside_mass"].is_array() || j["outside_mass"].size() != j["members"].size())
        fail(Errc::ParseError, w + ": outside_mass needs one entry per member");
      for (const auto& x : j["outside_mass"]) {
        if (x.is_null()) fam.sample.outside_mass.emplace_back();
        else if (x.is_number()) fam.sample.outside_mass.emplace_back(x.get<double>());
        else fail(Errc::ParseError, w + ": outside_mass entries must be numbers or null");
      }
    }
  } else if (j.contains("derivator")) {
    fam.g = parse_derivator(j["derivator"]);
  }
  if (fam.sample.members.empty() && fam.sequences.empty()) fail(Errc::EmptyFamily, "family has no members");
  return fam;
}

}  // namespace stj::io
