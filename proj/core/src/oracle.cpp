#include "diverge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace diverge {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
};

Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }

// Free coordinates: interior demand upstream, interior supplies downstream,
// and for Lebacque the interior proportion of commodity 1.
constexpr int kDims = 4;
using Box = std::array<Interval, kDims>;

struct Enclosure {
  Interval q0, q1, q2;
};

double partial_cap(double s_other, double xi_other) {
  return xi_other > 0.0 ? s_other * (1.0 / xi_other - 1.0) : kInf;
}

// Every local rule below is monotone in each argument except the partial
// evacuation rule in the other link's supply, where its two terms are
// bounded separately.
Enclosure enclose(const DivergeModel& model, const Box& b) {
  const Interval d = b[0];
  const Interval s1 = b[1];
  const Interval s2 = b[2];
  Interval q1;
  Interval q2;
  switch (model.kind()) {
    case ModelKind::DaganzoFifo: {
      const auto& xi = model.xi();
      const Interval q0{std::min({d.lo, s1.lo / xi[0], s2.lo / xi[1]}),
                        std::min({d.hi, s1.hi / xi[0], s2.hi / xi[1]})};
      q1 = {xi[0] * q0.lo, xi[0] * q0.hi};
      q2 = {xi[1] * q0.lo, xi[1] * q0.hi};
      break;
    }
    case ModelKind::Lebacque: {
      const Interval x = b[3];
      q1 = {std::min(x.lo * d.lo, s1.lo), std::min(x.hi * d.hi, s1.hi)};
      q2 = {std::min((1.0 - x.hi) * d.lo, s2.lo), std::min((1.0 - x.lo) * d.hi, s2.hi)};
      break;
    }
    case ModelKind::SupplyProportional: {
      auto f = [](double dd, double own, double other) {
        const double total = own + other;
        return total > 0.0 ? std::min(own, dd * own / total) : 0.0;
      };
      q1 = {f(d.lo, s1.lo, s2.hi), f(d.hi, s1.hi, s2.lo)};
      q2 = {f(d.lo, s2.lo, s1.hi), f(d.hi, s2.hi, s1.lo)};
      // The two shares add up to min(d, s1 + s2), which bounds q0 far more
      // tightly than the sum of the separate enclosures.
      const Interval sum = q1 + q2;
      return {{std::max(sum.lo, std::min(d.lo, s1.lo + s2.lo)),
               std::min(sum.hi, std::min(d.hi, s1.hi + s2.hi))},
              q1,
              q2};
    }
    case ModelKind::PriorityBased:
    case ModelKind::PartialEvacuation: {
      const bool partial = model.kind() == ModelKind::PartialEvacuation;
      const auto& a = model.alpha();
      const auto& xi = model.xi();
      auto f = [&](int i, Interval own, Interval other, bool upper) {
        const double dd = upper ? d.hi : d.lo;
        const double so = upper ? own.hi : own.lo;
        const double sj_cap = upper ? other.hi : other.lo;
        const double sj_split = upper ? other.lo : other.hi;
        double v = std::min(so, std::max(dd - sj_split, a[i] * dd));
        if (partial) v = std::min(v, partial_cap(sj_cap, xi[1 - i]));
        return std::max(v, 0.0);
      };
      q1 = {f(0, s1, s2, false), f(0, s1, s2, true)};
      q2 = {f(1, s2, s1, false), f(1, s2, s1, true)};
      break;
    }
  }
  return {q1 + q2, q1, q2};
}

struct Pattern {
  std::array<bool, 3> binding;
  std::array<double, 3> bound;
};

enum class Verdict { Reject, Undecided, Accept };

// Interval test of one flux against the pattern: a binding flux must equal
// its bound, a free one must stay clear of it.
Verdict test_flux(Interval f, bool binding, double bound, double slack) {
  if (f.lo > bound + slack) return Verdict::Reject;
  if (binding) {
    if (f.hi < bound - slack) return Verdict::Reject;
    return f.lo >= bound - slack && f.hi <= bound + slack ? Verdict::Accept : Verdict::Undecided;
  }
  if (f.lo >= bound - slack) return Verdict::Reject;
  return f.hi < bound - slack ? Verdict::Accept : Verdict::Undecided;
}

Verdict test_box(const DivergeModel& model, const Enclosure& e, const Pattern& p, double slack) {
  Verdict overall = Verdict::Accept;
  const std::array<Interval, 3> q{e.q0, e.q1, e.q2};
  for (int k = 0; k < 3; ++k) {
    const Verdict v = test_flux(q[k], p.binding[k], p.bound[k], slack);
    if (v == Verdict::Reject) return v;
    if (v == Verdict::Undecided) overall = Verdict::Undecided;
  }
  if (model.kind() == ModelKind::Lebacque) {
    // Global FIFO: xi2 q1 - xi1 q2 = 0.
    const auto& xi = model.xi();
    const Interval g{xi[1] * e.q1.lo - xi[0] * e.q2.hi, xi[1] * e.q1.hi - xi[0] * e.q2.lo};
    if (g.lo > slack || g.hi < -slack) return Verdict::Reject;
    if (g.lo < -slack || g.hi > slack) overall = Verdict::Undecided;
  }
  return overall;
}

Box point_box(const Box& b) {
  Box p = b;
  for (auto& iv : p) iv.lo = iv.hi = iv.mid();
  return p;
}

std::array<double, 3> centre_flux(const DivergeModel& model, const Box& b) {
  const Enclosure c = enclose(model, point_box(b));
  return {c.q0.lo, c.q1.lo, c.q2.lo};
}

// Bisect the coordinate the fluxes are most sensitive to, probed by widening
// one coordinate of the centre point at a time.
int split_dimension(const DivergeModel& model, const Box& box) {
  int split = -1;
  double best = -1.0;
  const Box centre = point_box(box);
  for (int k = 0; k < kDims; ++k) {
    if (box[k].width() <= 0.0) continue;
    Box probe = centre;
    probe[k] = box[k];
    const Enclosure e = enclose(model, probe);
    const double w = e.q0.width() + e.q1.width() + e.q2.width() + 1e-3 * box[k].width();
    if (w > best) {
      best = w;
      split = k;
    }
  }
  return split;
}

Box root_box(const Pattern& p, const std::array<double, 3>& capacity, bool lebacque) {
  Box root;
  for (int k = 0; k < 3; ++k) {
    root[k] = p.binding[k] ? Interval{0.0, capacity[k]} : Interval{capacity[k], capacity[k]};
  }
  root[3] = lebacque ? Interval{0.0, 1.0} : Interval{0.0, 0.0};
  return root;
}

Pattern make_pattern(int mask, double demand_up, double supply_1, double supply_2) {
  return {{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0}, {demand_up, supply_1, supply_2}};
}

// A flux component cannot leave the band around the reference inside the box.
bool pinned(Interval f, bool binding, double bound, double ref, double slack, double tol) {
  if (f.lo >= ref - tol && f.hi <= ref + tol) return true;
  return binding && std::abs(bound - ref) + slack < tol;
}

}  // namespace

OracleResult brute_force_fluxes(const DivergeModel& model, double demand_up, double supply_1,
                                double supply_2, const std::array<double, 3>& capacity,
                                const OracleOptions& options) {
  OracleResult result;
  const bool lebacque = model.kind() == ModelKind::Lebacque;
  const double slack = options.binding_slack;
  const double tol = options.uniqueness_tolerance;

  auto budget_left = [&] {
    if (++result.boxes <= options.box_budget) return true;
    result.budget_exhausted = true;
    return false;
  };
  auto push_halves = [&](std::vector<Box>& stack, const Box& box) {
    const int k = split_dimension(model, box);
    if (k < 0) return;
    Box left = box;
    Box right = box;
    left[k].hi = right[k].lo = box[k].mid();
    stack.push_back(left);
    stack.push_back(right);
  };

  // Phase one: any admissible configuration.
  std::array<double, 3> found{};
  for (int mask = 0; mask < 8 && !result.found && !result.budget_exhausted; ++mask) {
    const Pattern p = make_pattern(mask, demand_up, supply_1, supply_2);
    std::vector<Box> stack{root_box(p, capacity, lebacque)};
    while (!stack.empty() && budget_left()) {
      const Box box = stack.back();
      stack.pop_back();
      const Enclosure e = enclose(model, box);
      if (test_box(model, e, p, slack) == Verdict::Reject) continue;
      if (std::max({e.q0.width(), e.q1.width(), e.q2.width()}) <= options.flux_resolution) {
        if (test_box(model, enclose(model, point_box(box)), p, slack) == Verdict::Reject) continue;
        found = centre_flux(model, box);
        result.found = true;
        break;
      }
      push_halves(stack, box);
    }
  }
  if (!result.found) return result;
  result.flux = {found[0], found[1], found[2]};
  result.survivors = 1;

  // Phase two: no admissible configuration may carry fluxes further than the
  // tolerance from the one found.
  bool counterexample = false;
  for (int mask = 0; mask < 8 && !counterexample && !result.budget_exhausted; ++mask) {
    const Pattern p = make_pattern(mask, demand_up, supply_1, supply_2);
    std::vector<Box> stack{root_box(p, capacity, lebacque)};
    while (!stack.empty() && budget_left()) {
      const Box box = stack.back();
      stack.pop_back();
      const Enclosure e = enclose(model, box);
      if (test_box(model, e, p, slack) == Verdict::Reject) continue;
      const std::array<Interval, 3> q{e.q0, e.q1, e.q2};
      bool inside = true;
      for (int k = 0; k < 3 && inside; ++k) {
        inside = pinned(q[k], p.binding[k], p.bound[k], found[k], slack, tol);
      }
      if (inside) continue;
      if (std::max({e.q0.width(), e.q1.width(), e.q2.width()}) <= options.flux_resolution) {
        if (test_box(model, enclose(model, point_box(box)), p, slack) == Verdict::Reject) continue;
        const auto c = centre_flux(model, box);
        double gap = 0.0;
        for (int k = 0; k < 3; ++k) gap = std::max(gap, std::abs(c[k] - found[k]));
        ++result.survivors;
        result.spread = std::max(result.spread, gap);
        if (gap > tol) {
          counterexample = true;
          break;
        }
        continue;
      }
      push_halves(stack, box);
    }
  }
  result.unique = !counterexample && !result.budget_exhausted;
  return result;
}

}  // namespace diverge
