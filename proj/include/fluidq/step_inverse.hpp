#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fluidq {

// Right-continuous nondecreasing step function on the extended reals,
// represented by its jump knots: h(t) = value of the last knot with
// position <= t, and h(t) = knots.front().value for t below every knot.
// Positions must be strictly increasing and values nondecreasing.
struct StepFunction {
  struct Knot {
    double pos;
    double value;
  };
  std::vector<Knot> knots;

  static StepFunction from_knots(std::vector<Knot> ks) {
    if (ks.empty()) throw std::invalid_argument("StepFunction: needs at least one knot");
    for (std::size_t i = 1; i < ks.size(); ++i) {
      if (!(ks[i].pos > ks[i - 1].pos))
        throw std::invalid_argument("StepFunction: positions must be strictly increasing");
      if (ks[i].value < ks[i - 1].value)
        throw std::invalid_argument("StepFunction: values must be nondecreasing");
    }
    return StepFunction{std::move(ks)};
  }

  double operator()(double t) const {
    // Last knot with pos <= t.
    auto it = std::upper_bound(knots.begin(), knots.end(), t,
                               [](double x, const Knot& k) { return x < k.pos; });
    if (it == knots.begin()) return knots.front().value;
    return std::prev(it)->value;
  }

  // Left limit h(t-).
  double left_limit(double t) const {
    auto it = std::lower_bound(knots.begin(), knots.end(), t,
                               [](const Knot& k, double x) { return k.pos < x; });
    if (it == knots.begin()) return knots.front().value;
    return std::prev(it)->value;
  }
};

// Right-continuous generalized inverse h^{-1}(x) = inf{ t : h(t) > x }, with
// inf of the empty set equal to +inf and values below the range mapping to
// -inf.
inline double right_cont_inverse(const StepFunction& h, double x) {
  // First knot whose value exceeds x; the inverse is its position.
  auto it = std::upper_bound(h.knots.begin(), h.knots.end(), x,
                             [](double v, const StepFunction::Knot& k) { return v < k.value; });
  if (it == h.knots.end()) return std::numeric_limits<double>::infinity();
  if (it == h.knots.begin()) return -std::numeric_limits<double>::infinity();
  return it->pos;
}

// The inverse as a step function in its own right (restricted to the strictly
// increasing knots of h; flat stretches of h become jumps of the inverse and
// vice versa).
inline StepFunction right_cont_inverse(const StepFunction& h) {
  StepFunction inv;
  inv.knots.push_back({-std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()});
  double last_value = h.knots.front().value;
  for (std::size_t i = 1; i < h.knots.size(); ++i) {
    if (h.knots[i].value > last_value) {
      inv.knots.push_back({last_value, h.knots[i].pos});
      last_value = h.knots[i].value;
    }
  }
  inv.knots.push_back({last_value, std::numeric_limits<double>::infinity()});
  return inv;
}

}  // namespace fluidq
