#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stj/derivator.hpp"
#include "stj/function.hpp"

namespace stj {

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

struct Condition {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  std::map<std::string, double> values;
  std::map<std::string, std::vector<double>> series;
  std::string note;
};

struct Certificate {
  std::string criterion;
  std::vector<Condition> conditions;
  Verdict overall = Verdict::Inconclusive;
  bool finite_scale = true;
  std::map<std::string, double> params;
  std::map<std::string, double> grid;
  std::vector<double> enumeration;  // order in which jump points were summed
  std::vector<double> witnesses;

  bool passed() const { return overall == Verdict::Pass; }
  const Condition& condition(const std::string& name) const;
};

// Fail beats Inconclusive beats Pass
Verdict conjunction(const std::vector<Condition>& cs);

struct FamilySample {
  std::vector<GFunction> members;
  int sample_n = 400;
  // integral of |f|^p dmu_g outside the window, per member (L^p checks only)
  std::vector<std::optional<double>> outside_mass;
};

struct BcParams {
  double eps = 0.1;
  std::vector<double> deltas;  // empty: 1e-16 ... 1
  int cover_cap = 64;
  int min_population = 8;      // samples needed before a right-limit defect counts
  int threads = 1;
};

Certificate bc_diagnose(const FamilySample& S, const Derivator& g, const BcParams& prm);
Certificate buc_diagnose(const FamilySample& S, const Derivator& g, const BcParams& prm);

struct Sequence {
  std::vector<double> x;
  std::optional<double> tail;  // bound on sum_{k > len} |x_k|^p
};

Certificate lp_seq_diagnose(const std::vector<Sequence>& X, double p, double eps);

struct LpParams {
  double eps = 0.1;
  std::size_t n = 0;  // jump truncation
  double R = 0;
  double rho = 0.01;
  int h_points = 12;
  double tol = 1e-10;
};

Certificate lp_diagnose(const FamilySample& G, const Derivator& g, double p, const LpParams& prm);

struct DcParams {
  double eps = 0.1;
  std::size_t n = 0;
  std::vector<double> deltas;
  int cover_cap = 64;
  double tol = 1e-9;
  int threads = 1;
};

Certificate dc_diagnose(const FamilySample& S, const Derivator& g, const DcParams& prm);

// jump points by decreasing dg, ties by position
std::vector<double> jump_enumeration(const Derivator& g);

enum class NetMetric { Sup, Lp, DC };

struct NetResult {
  std::vector<std::size_t> centers;
  std::vector<std::size_t> assignment;  // nearest center per member
  double max_residual = 0;
  bool success = true;
  std::optional<std::size_t> witness;
  double witness_distance = 0;
  // Lp only: max gap between ||f-h||^p computed through gamma and through the t variable
  double metric_consistency = 0;
};

NetResult epsilon_net(const FamilySample& S, const Derivator& g, NetMetric metric, double eps, double p = 2,
                      std::size_t cap = 1000);

}  // namespace stj
