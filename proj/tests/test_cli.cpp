#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stj/cli.hpp"
#include "stj/error.hpp"
#include "stj/io.hpp"

using namespace stj;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) {
  const char* dir = std::getenv("STJ_DATA");
  return (fs::path(dir ? dir : "tests/data") / name).string();
}

struct Run {
  int code;
  std::string out, err;
};

Run stj_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name, const std::string& text) {
  fs::path dir = fs::temp_directory_path() / "stj_cli_test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("derivator analyze") {
  auto r = stj_run({"derivator", "analyze", data("g1.json")});
  REQUIRE(r.code == 0);
  auto j = io::parse_json_text(r.out);
  CHECK(j["D_g"] == io::json::array({0}));
  CHECK(j["C_g"] == io::json::parse("[[0.5, 1]]"));
  CHECK(j["measure_window"] == 3.5);
}

TEST_CASE("integrate, derive, norm") {
  auto r = stj_run({"integrate", data("g1.json"), data("id.json"), "--interval", "-1,2"});
  REQUIRE(r.code == 0);
  CHECK(io::parse_json_text(r.out)["value"] == 1.125);
  auto d = stj_run({"derive", data("g1.json"), data("g_self.json"), "--at", "0"});
  REQUIRE(d.code == 0);
  CHECK(io::parse_json_text(d.out)["points"][0]["value"] == 1);
  auto n = stj_run({"norm", data("g1.json"), data("g_self.json"), "--p", "inf"});
  REQUIRE(n.code == 0);
  CHECK(io::parse_json_text(n.out)["p"] == "inf");
  CHECK(io::parse_json_text(n.out)["value"] == 2.5);
}

TEST_CASE("exit codes") {
  CHECK(stj_run({"integrate", data("none.json"), data("id.json")}).code == 2);
  CHECK(stj_run({"frobnicate"}).code == 2);
  CHECK(stj_run({"norm", data("g1.json"), data("id.json"), "--p", "0.5"}).code == 2);
  auto bad = scratch("bad_key.json", R"({"kind": "poly", "coeffs": [1], "colour": "red"})");
  auto r = stj_run({"integrate", data("g1.json"), bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("ParseError") != std::string::npos);
  CHECK(r.err.find('\n') == r.err.size() - 1);
  auto nonmono = scratch("nonmono.json", R"({"breakpoints": [0, 1, 2], "cont_values": [0, -1, 0]})");
  CHECK(stj_run({"derivator", "analyze", nonmono}).code == 2);
  auto uj = scratch("uj.json", R"({"breakpoints": [-1, 1], "cont_values": [-1, 1], "jumps": [[0, 1]]})");
  auto osc = scratch("osc.json", R"({"kind": "oscillating", "d": 0})");
  auto e = stj_run({"derive", uj, osc, "--at", "0"});
  CHECK(e.code == 1);
  CHECK(e.err.find("NoLimit") != std::string::npos);
  auto notjump = scratch("notjump.json", R"({"kind": "poly", "coeffs": [1], "jumps": [[0.3, 2]]})");
  CHECK(stj_run({"integrate", data("g1.json"), notjump}).code == 2);
}

TEST_CASE("tolerance from the environment") {
  ::setenv("STJ_TOL", "1e-10", 1);
  CHECK(stj_run({"integrate", data("g1.json"), data("id.json")}).code == 0);
  ::setenv("STJ_TOL", "abc", 1);
  CHECK(stj_run({"integrate", data("g1.json"), data("id.json")}).code == 2);
  ::unsetenv("STJ_TOL");
}

TEST_CASE("byte-stable reports and CSV") {
  auto a = stj_run({"compact", "bc", data("family_gpowers.json"), "--eps", "0.5"});
  auto b = stj_run({"compact", "bc", data("family_gpowers.json"), "--eps", "0.5", "--threads", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(io::parse_json_text(a.out)["finite_scale"] == true);
  fs::path dir = fs::temp_directory_path() / "stj_cli_test";
  fs::create_directories(dir);
  std::string csv = (dir / "tilde_f.csv").string(), out1 = (dir / "f1.json").string(), out2 = (dir / "f2.json").string();
  REQUIRE(stj_run({"factorize", data("g1.json"), data("g_self.json"), "--csv", csv, "--out", out1}).code == 0);
  REQUIRE(stj_run({"factorize", data("g1.json"), data("g_self.json"), "--out", out2}).code == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(csv).rfind("x,value\n", 0) == 0);
}

TEST_CASE("stable number format") {
  io::json j;
  j["b"] = 0.1 + 0.2;
  j["a"] = std::vector<double>{1.0 / 3, -0.0};
  j["c"] = std::numeric_limits<double>::infinity();
  CHECK(io::dump_stable(j) == "{\n  \"a\": [0.333333333333, 0],\n  \"b\": 0.3,\n  \"c\": \"inf\"\n}\n");
}

TEST_CASE("spec round trips") {
  auto g = io::parse_derivator(io::read_json_file(data("g1.json")));
  auto text = stj_run({"derivator", "canonical", data("g1.json")}).out;
  CHECK(io::parse_derivator(io::parse_json_text(text)) == g);
  auto odd = Derivator::build({-1.0 / 3, 0.1, 2.0 / 7}, {0.2, 0.2 + 1e-13, 5.0 / 9}, {{0.05, 1.0 / 11}}, 1e-7);
  CHECK(io::parse_derivator(io::parse_json_text(io::dump_exact(io::to_json(odd)))) == odd);

  const char* specs[] = {
      R"({"kind": "poly", "coeffs": [0.1, -2, 3]})",
      R"({"kind": "poly_g", "coeffs": [1, 1], "label": "shift"})",
      R"({"kind": "trig", "fn": "cos", "freq": 3, "var": "g"})",
      R"({"kind": "indicator", "lo": 0, "hi": 0.5, "include_hi": true})",
      R"({"kind": "step", "at": [0, 1], "values": [1, 2, 3], "jumps": [[0, 2]]})",
      R"({"kind": "composed", "h": "exp", "scale": -0.5, "jump_tail": 0})",
      R"({"kind": "piecewise", "breaks": [0], "pieces": [{"kind": "constant", "value": 1}, {"kind": "g"}]})",
      R"({"kind": "sum", "terms": [{"kind": "g"}, {"kind": "scaled", "c": 2, "of": {"kind": "poly", "coeffs": [1]}}]})",
      R"({"kind": "expg", "lambda": 0.5, "alpha": -1})",
      R"({"kind": "expg", "lambda_fn": {"kind": "poly", "coeffs": [0.5, 0.1]}})",
      R"({"kind": "oscillating", "d": 0, "kinks": [1, 0.5, 1]})",
      R"({"kind": "sobolev", "a": -0.5, "b": 1.5, "density": {"kind": "constant", "value": 1}})",
  };
  for (const char* s : specs) {
    auto spec = io::parse_function_spec(io::parse_json_text(s));
    auto again = io::parse_function_spec(io::parse_json_text(io::dump_exact(io::to_json(spec))));
    CHECK(again == spec);
    if (!io::is_sobolev(spec)) {
      auto f = io::build_function(spec, g);
      auto h = io::build_function(again, g);
      for (double t : {-1.0, -0.2, 0.0, 0.7, 1.9}) CHECK(f(t) == h(t));
    }
  }
}

TEST_CASE("other subcommands run") {
  CHECK(stj_run({"weierstrass", data("g1.json"), data("g_self.json"), "--degree", "3"}).code == 0);
  auto e = stj_run({"expg", data("g1.json"), "--lambda", "1", "--alpha", "-1", "--at", "2", "--verify"});
  REQUIRE(e.code == 0);
  auto j = io::parse_json_text(e.out);
  CHECK(j["points"][0]["value"].get<double>() == doctest::Approx(2 * std::exp(2.5)).epsilon(1e-11));
  CHECK(stj_run({"extend", data("sobolev_one.json"), "--window", "-1,2", "--p", "2"}).code == 0);
  CHECK(stj_run({"decompose", "add", data("g1.json"), data("g_self.json")}).code == 0);
  auto plus2 = scratch("gplus2.json", R"({"kind": "poly_g", "coeffs": [2, 1]})");
  auto m = stj_run({"decompose", "mul", data("g1.json"), plus2});
  REQUIRE(m.code == 0);
  CHECK(io::parse_json_text(m.out)["D_gf"] == io::json::array({0}));
  auto lp = stj_run({"compact", "lp", data("basis.json"), "--eps", "0.5"});
  REQUIRE(lp.code == 0);
  CHECK(io::parse_json_text(lp.out)["overall"] == "fail");
  CHECK(stj_run({"compact", "net", data("family_gpowers.json"), "--eps", "0.5", "--metric", "lp"}).code == 0);
  CHECK(stj_run({"compact", "dc", data("family_gpowers.json"), "--n", "1"}).code == 0);
}
