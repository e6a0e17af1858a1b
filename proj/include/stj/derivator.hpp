#pragma once

#include <optional>
#include <vector>

namespace stj {

struct Jump {
  double at = 0;
  double size = 0;
  friend bool operator==(const Jump&, const Jump&) = default;
};

// closed [lo, hi] for classification, half-open [lo, hi) for measures
struct Interval {
  double lo = 0;
  double hi = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct PointClassification {
  std::vector<double> jump_points;
  std::vector<Interval> constancy_intervals;  // open (lo, hi)
  std::vector<double> n_minus;
  std::vector<double> n_plus;
};

// Min-preimage inverse of a continuous piecewise-linear monotone map.
class Pseudoinverse {
 public:
  Pseudoinverse() = default;
  Pseudoinverse(const std::vector<double>& breakpoints, const std::vector<double>& values);

  double operator()(double x) const;
  double lo() const { return xs_.front(); }
  double hi() const { return xs_.back(); }
  // distinct values of the underlying map, with the first and last preimage of each
  const std::vector<double>& levels() const { return xs_; }
  const std::vector<double>& first_preimage() const { return tmin_; }
  const std::vector<double>& last_preimage() const { return tmax_; }

 private:
  std::vector<double> xs_, tmin_, tmax_;
};

class Derivator;

struct SplitParts;

class Derivator {
 public:
  Derivator() = default;

  // Validates and sorts jumps. Throws NonMonotone, JumpOutOfWindow, DuplicateJump,
  // NonPositiveJump or InvalidBreakpoints.
  static Derivator build(std::vector<double> breakpoints, std::vector<double> cont_values,
                         std::vector<Jump> jumps = {}, std::optional<double> tail_bound = {});

  double lo() const { return bp_.front(); }
  double hi() const { return bp_.back(); }
  bool contains(double t) const { return t >= lo() && t <= hi(); }

  double eval(double t) const;
  double eval_right(double t) const;
  double delta(double t) const;
  // continuous part, unshifted (g^C(A) = v_0)
  double cont(double t) const;
  // sum of jumps with d < t
  double jumps_before(double t) const;

  // slope of g^C on the piece to the right (left) of t
  double slope_right(double t) const;
  double slope_left(double t) const;

  bool is_jump(double t) const;
  // index of the jump at t, or -1
  int jump_index(double t) const;

  const std::vector<double>& breakpoints() const { return bp_; }
  const std::vector<double>& cont_values() const { return cv_; }
  const std::vector<Jump>& jumps() const { return jumps_; }
  const std::optional<double>& tail_bound() const { return tail_; }

  PointClassification classify() const;
  // the open constancy interval containing t, if any
  std::optional<Interval> constancy_interval_at(double t) const;
  bool in_N(double t) const;

  Pseudoinverse pseudoinverse() const { return Pseudoinverse(bp_, cv_); }

  SplitParts split() const;

  // sorted, deduplicated union of breakpoints and jump points inside [c, d]
  std::vector<double> events(double c, double d) const;

  friend bool operator==(const Derivator&, const Derivator&) = default;

 private:
  std::vector<double> bp_, cv_;
  std::vector<Jump> jumps_;
  std::vector<double> prefix_;  // prefix_[k] = sum of first k jump sizes
  std::optional<double> tail_;

  void check_in_window(double t) const;
};

struct SplitParts {
  Derivator continuous;  // jump-free, vanishes at A
  Derivator jump;        // zero slope, vanishes at A
  double offset = 0;     // g = continuous + jump + offset
};

double measure(const Derivator& g, std::vector<Interval> E);

}  // namespace stj
