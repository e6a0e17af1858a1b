#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stj/compactness.hpp"
#include "stj/derivator.hpp"
#include "stj/function.hpp"

namespace stj::io {

using json = nlohmann::json;

// IoError if unreadable, ParseError if not JSON
json read_json_file(const std::string& path);
json parse_json_text(const std::string& text);

// {"window":[A,B],"breakpoints":[...],"cont_values":[...],"jumps":[[d,dg],...],"tail_bound":x}
Derivator parse_derivator(const json& j);
json to_json(const Derivator& g);

// A function spec kept in canonical form (defaults filled, jump table sorted). Two specs are
// equal when their canonical forms are.
struct FunctionSpec {
  json node;
  friend bool operator==(const FunctionSpec& a, const FunctionSpec& b) { return a.node == b.node; }
};

FunctionSpec parse_function_spec(const json& j);
json to_json(const FunctionSpec& s);
GFunction build_function(const FunctionSpec& s, const Derivator& g);
bool is_sobolev(const FunctionSpec& s);
SobolevFunction build_sobolev(const FunctionSpec& s, const Derivator& g);

// {"derivator":{...},"members":[spec,...],"sample_n":n,"outside_mass":[x|null,...]}
// or {"sequences":[{"x":[...],"tail":t},...]}
struct Family {
  std::optional<Derivator> g;
  FamilySample sample;
  std::vector<FunctionSpec> specs;
  std::vector<Sequence> sequences;
};

Family parse_family(const json& j);

// sorted keys, numbers with 12 significant digits, non-finite numbers as strings
std::string dump_stable(const json& j);
// shortest round-trip numbers; used for specs that must re-parse exactly
std::string dump_exact(const json& j);

void write_text(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
std::string fmt12(double x);

}  // namespace stj::io
