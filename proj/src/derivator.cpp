#include "stj/derivator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stj/error.hpp"

namespace stj {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Pseudoinverse::Pseudoinverse(const std::vector<double>& bp, const std::vector<double>& v) {
  for (std::size_t i = 0; i < bp.size(); ++i) {
    if (!xs_.empty() && v[i] == xs_.back()) {
      tmax_.back() = bp[i];
    } else {
      xs_.push_back(v[i]);
      tmin_.push_back(bp[i]);
      tmax_.push_back(bp[i]);
    }
  }
}

double Pseudoinverse::operator()(double x) const {
  if (!(x >= xs_.front() && x <= xs_.back()))
    fail(Errc::OutOfRange, "gamma(" + num(x) + ") outside [" + num(xs_.front()) + ", " +
                               num(xs_.back()) + "]");
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - xs_.begin());
  if (*it == x) return tmin_[j];
  double x0 = xs_[j - 1], x1 = xs_[j];
  double t0 = tmax_[j - 1], t1 = tmin_[j];
  double t = t0 + (x - x0) / (x1 - x0) * (t1 - t0);
  return std::clamp(t, t0, t1);
}

Derivator Derivator::build(std::vector<double> bp, std::vector<double> cv, std::vector<Jump> jumps,
                           std::optional<double> tail_bound) {
  if (bp.size() < 2 || bp.size() != cv.size())
    fail(Errc::InvalidBreakpoints, "need at least two breakpoints with one value each");
  for (std::size_t i = 0; i < bp.size(); ++i) {
    if (!std::isfinite(bp[i]) || !std::isfinite(cv[i]))
      fail(Errc::InvalidBreakpoints, "non-finite breakpoint or value at index " + std::to_string(i));
    if (i > 0 && !(bp[i] > bp[i - 1]))
      fail(Errc::InvalidBreakpoints, "breakpoints not strictly increasing at index " + std::to_string(i));
  }
  for (std::size_t i = 1; i < cv.size(); ++i)
    if (cv[i] < cv[i - 1])
      fail(Errc::NonMonotone, "cont_values decrease at index " + std::to_string(i) + " (" +
                                  num(cv[i - 1]) + " > " + num(cv[i]) + ")");
  const double A = bp.front(), B = bp.back();
  for (const auto& j : jumps) {
    if (!std::isfinite(j.at) || j.at < A || j.at >= B)
      fail(Errc::JumpOutOfWindow, "jump at " + num(j.at) + " not in [" + num(A) + ", " + num(B) + ")");
    if (!(j.size > 0) || !std::isfinite(j.size))
      fail(Errc::NonPositiveJump, "jump at " + num(j.at) + " has size " + num(j.size));
  }
  std::sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) { return a.at < b.at; });
  for (std::size_t k = 1; k < jumps.size(); ++k)
    if (jumps[k].at == jumps[k - 1].at) fail(Errc::DuplicateJump, "two jumps at " + num(jumps[k].at));
  if (tail_bound && (!std::isfinite(*tail_bound) || *tail_bound < 0))
    fail(Errc::InvalidArgument, "tail_bound must be finite and non-negative");

  Derivator g;
  g.bp_ = std::move(bp);
  g.cv_ = std::move(cv);
  g.jumps_ = std::move(jumps);
  g.tail_ = tail_bound;
  g.prefix_.assign(g.jumps_.size() + 1, 0.0);
  for (std::size_t k = 0; k < g.jumps_.size(); ++k) g.prefix_[k + 1] = g.prefix_[k] + g.jumps_[k].size;
  return g;
}

void Derivator::check_in_window(double t) const {
  if (!(t >= lo() && t <= hi()))
    fail(Errc::OutOfWindow, num(t) + " outside [" + num(lo()) + ", " + num(hi()) + "]");
}

double Derivator::cont(double t) const {
  check_in_window(t);
  auto it = std::upper_bound(bp_.begin(), bp_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - bp_.begin()) - 1;
  if (bp_[i] == t || i + 1 == bp_.size()) return cv_[i];
  double r = (t - bp_[i]) / (bp_[i + 1] - bp_[i]);
  return std::clamp(cv_[i] + r * (cv_[i + 1] - cv_[i]), cv_[i], cv_[i + 1]);
}

double Derivator::jumps_before(double t) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                             [](const Jump& j, double x) { return j.at < x; });
  return prefix_[static_cast<std::size_t>(it - jumps_.begin())];
}

double Derivator::eval(double t) const { return cont(t) + jumps_before(t); }

double Derivator::eval_right(double t) const {
  check_in_window(t);
  if (t >= hi()) fail(Errc::OutOfWindow, "right limit requested at the window end " + num(t));
  return eval(t) + delta(t);
}

int Derivator::jump_index(double t) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                             [](const Jump& j, double x) { return j.at < x; });
  if (it != jumps_.end() && it->at == t) return static_cast<int>(it - jumps_.begin());
  return -1;
}

bool Derivator::is_jump(double t) const { return jump_index(t) >= 0; }

double Derivator::delta(double t) const {
  check_in_window(t);
  int k = jump_index(t);
  return k < 0 ? 0.0 : jumps_[static_cast<std::size_t>(k)].size;
}

double Derivator::slope_right(double t) const {
  auto it = std::upper_bound(bp_.begin(), bp_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - bp_.begin());
  i = std::clamp<std::size_t>(i, 1, bp_.size() - 1) - 1;
  return (cv_[i + 1] - cv_[i]) / (bp_[i + 1] - bp_[i]);
}

double Derivator::slope_left(double t) const {
  auto it = std::lower_bound(bp_.begin(), bp_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - bp_.begin());
  i = std::clamp<std::size_t>(i, 1, bp_.size() - 1) - 1;
  return (cv_[i + 1] - cv_[i]) / (bp_[i + 1] - bp_[i]);
}

PointClassification Derivator::classify() const {
  PointClassification pc;
  for (const auto& j : jumps_) pc.jump_points.push_back(j.at);
  std::size_t m = bp_.size() - 1;
  std::size_t i = 0;
  while (i < m) {
    if (cv_[i + 1] != cv_[i]) {
      ++i;
      continue;
    }
    std::size_t e = i;
    while (e < m && cv_[e + 1] == cv_[e]) ++e;
    double lo = bp_[i], hi = bp_[e];
    double cur = lo;
    for (const auto& j : jumps_) {
      if (j.at > lo && j.at < hi) {
        pc.constancy_intervals.push_back({cur, j.at});
        cur = j.at;
      }
    }
    pc.constancy_intervals.push_back({cur, hi});
    i = e;
  }
  for (const auto& iv : pc.constancy_intervals) {
    if (!is_jump(iv.lo) && iv.lo != lo()) pc.n_minus.push_back(iv.lo);
    if (!is_jump(iv.hi) && iv.hi != hi()) pc.n_plus.push_back(iv.hi);
  }
  return pc;
}

std::optional<Interval> Derivator::constancy_interval_at(double t) const {
  for (const auto& iv : classify().constancy_intervals)
    if (t > iv.lo && t < iv.hi) return iv;
  return std::nullopt;
}

bool Derivator::in_N(double t) const {
  auto pc = classify();
  return std::find(pc.n_minus.begin(), pc.n_minus.end(), t) != pc.n_minus.end() ||
         std::find(pc.n_plus.begin(), pc.n_plus.end(), t) != pc.n_plus.end();
}

SplitParts Derivator::split() const {
  SplitParts s;
  s.offset = cv_.front();
  std::vector<double> shifted(cv_);
  for (auto& v : shifted) v -= s.offset;
  shifted.front() = 0.0;
  s.continuous = build(bp_, shifted, {}, std::nullopt);
  s.jump = build({lo(), hi()}, {0.0, 0.0}, jumps_, tail_);
  return s;
}

std::vector<double> Derivator::events(double c, double d) const {
  std::vector<double> out;
  for (double t : bp_)
    if (t >= c && t <= d) out.push_back(t);
  for (const auto& j : jumps_)
    if (j.at >= c && j.at <= d) out.push_back(j.at);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double measure(const Derivator& g, std::vector<Interval> E) {
  for (const auto& iv : E) {
    if (!(iv.lo >= g.lo() && iv.hi <= g.hi()))
      fail(Errc::OutOfWindow, "interval [" + num(iv.lo) + ", " + num(iv.hi) + ") leaves the window");
    if (iv.hi < iv.lo) fail(Errc::InvalidArgument, "interval with hi < lo");
  }
  E.erase(std::remove_if(E.begin(), E.end(), [](const Interval& iv) { return iv.hi == iv.lo; }),
          E.end());
  std::sort(E.begin(), E.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < E.size(); ++i)
    if (E[i].lo < E[i - 1].hi)
      fail(Errc::OverlappingIntervals, "[" + num(E[i - 1].lo) + ", " + num(E[i - 1].hi) + ") and [" +
                                           num(E[i].lo) + ", " + num(E[i].hi) + ")");
  double s = 0;
  for (const auto& iv : E) s += g.eval(iv.hi) - g.eval(iv.lo);
  return s;
}

}  // namespace stj
