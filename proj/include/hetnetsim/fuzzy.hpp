#pragma once

// Multi-criteria network scoring: trapezoidal fuzzification of
// (cost, bandwidth, RSS, priority, delay) over three linguistic labels each,
// collapsed to a crisp score by a weighted sum of expected label utilities.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetnetsim/errors.hpp"
#include "hetnetsim/types.hpp"

namespace hetnetsim::fuzzy {

// Weight order follows the criteria listing: C, B, R, U, D.
enum class Criterion : std::size_t { Cost = 0, Bandwidth = 1, Rss = 2, Priority = 3, Delay = 4 };

inline constexpr std::size_t kNumCriteria = 5;
inline constexpr std::size_t kLabelsPerCriterion = 3;

inline constexpr std::array<std::string_view, kNumCriteria> kCriterionNames{"cost", "bandwidth", "rss",
                                                                            "priority", "delay"};

// Linguistic labels, ordered as listed for each criterion.
inline constexpr std::array<std::array<std::string_view, kLabelsPerCriterion>, kNumCriteria> kLabels{{
    {"Economic", "Normal", "Expensive"},
    {"Poor", "Med", "Good"},
    {"Low", "Normal", "High"},
    {"Insensitive", "Ordinary", "HighQoS"},
    {"Low", "Med", "High"},
}};

struct MembershipFunction {
  std::string label;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  bool valid() const { return a <= b && b <= c && c <= d; }
  bool operator==(const MembershipFunction&) const = default;
};

// 1 on [b,c], 0 outside [a,d], linear on the flanks.
inline double membership(const MembershipFunction& mf, double x) {
  if (x < mf.a || x > mf.d) return 0.0;
  if (x >= mf.b && x <= mf.c) return 1.0;
  if (x < mf.b) return (x - mf.a) / (mf.b - mf.a);
  return (mf.d - x) / (mf.d - mf.c);
}

struct NumericCriterion {
  double lo = 0.0;
  double hi = 1.0;
  std::array<MembershipFunction, kLabelsPerCriterion> sets;
  std::array<double, kLabelsPerCriterion> utilities{};  // parallel to sets

  bool operator==(const NumericCriterion&) const = default;
};

// Priority is categorical. Its utility depends on whether the network is
// best-effort (WLAN) or QoS-guaranteed (cellular).
struct PriorityUtilities {
  std::array<double, kLabelsPerCriterion> best_effort{1.0, 0.5, 0.0};
  std::array<double, kLabelsPerCriterion> qos_guaranteed{0.0, 0.5, 1.0};

  const std::array<double, kLabelsPerCriterion>& for_rat(std::optional<RatKind> rat) const {
    if (rat && is_cellular(*rat)) return qos_guaranteed;
    return best_effort;
  }
  bool operator==(const PriorityUtilities&) const = default;
};

// Congestion-aware effective criteria: delay / (1 - rho), bandwidth * (1 - rho),
// with rho clamped to [0, max_utilization].
struct LoadModel {
  bool enabled = false;
  double max_utilization = 0.95;

  bool operator==(const LoadModel&) const = default;
};

struct FuzzyConfig {
  NumericCriterion cost;
  NumericCriterion bandwidth;
  NumericCriterion rss;
  NumericCriterion delay;
  PriorityUtilities priority;
  std::array<double, kNumCriteria> weights{0.0625, 0.0791, 0.0211, 0.0981, 0.4991};
  LoadModel load_model;

  const NumericCriterion& numeric(Criterion c) const {
    switch (c) {
      case Criterion::Cost: return cost;
      case Criterion::Bandwidth: return bandwidth;
      case Criterion::Rss: return rss;
      case Criterion::Delay: return delay;
      case Criterion::Priority: break;
    }
    throw std::invalid_argument("priority is not a numeric criterion");
  }
  NumericCriterion& numeric(Criterion c) {
    return const_cast<NumericCriterion&>(static_cast<const FuzzyConfig&>(*this).numeric(c));
  }

  bool operator==(const FuzzyConfig&) const = default;
};

inline constexpr std::array<Criterion, 4> kNumericCriteria{Criterion::Cost, Criterion::Bandwidth, Criterion::Rss,
                                                           Criterion::Delay};

namespace detail {

// Three-set partition of unity on [lo, hi] with crossovers on [p1,p2] and [p3,p4].
inline NumericCriterion partition(Criterion c, double lo, double hi, std::array<double, 4> p,
                                  std::array<double, 3> utilities) {
  const auto& names = kLabels[static_cast<std::size_t>(c)];
  NumericCriterion out;
  out.lo = lo;
  out.hi = hi;
  out.sets = {MembershipFunction{std::string(names[0]), lo, lo, p[0], p[1]},
              MembershipFunction{std::string(names[1]), p[0], p[1], p[2], p[3]},
              MembershipFunction{std::string(names[2]), p[2], p[3], hi, hi}};
  out.utilities = utilities;
  return out;
}

}  // namespace detail

// Defaults put the WLAN reference network (C=0.001, B=11, R=+38, D=1.25) on the
// best plateaus and the UMTS one (C=0.220, B=0.5, R=-100, D=18.54) on the worst.
inline FuzzyConfig default_fuzzy_config() {
  FuzzyConfig cfg;
  cfg.cost = detail::partition(Criterion::Cost, 0.0, 1.0, {0.01, 0.04, 0.07, 0.1}, {1.0, 0.5, 0.0});
  cfg.bandwidth = detail::partition(Criterion::Bandwidth, 0.0, 100.0, {1.0, 3.0, 4.0, 6.0}, {0.0, 0.5, 1.0});
  cfg.rss = detail::partition(Criterion::Rss, -120.0, 40.0, {-90.0, -60.0, -30.0, 0.0}, {0.0, 0.5, 1.0});
  cfg.delay = detail::partition(Criterion::Delay, 0.0, 1000.0, {5.0, 8.0, 12.0, 15.0}, {1.0, 0.5, 0.0});
  return cfg;
}

struct FuzzifiedVector {
  std::array<std::array<double, kLabelsPerCriterion>, kNumCriteria> degrees{};
  // Bit i set when numeric criterion i was clamped into its universe.
  std::uint8_t clamped_mask = 0;

  const std::array<double, kLabelsPerCriterion>& of(Criterion c) const {
    return degrees[static_cast<std::size_t>(c)];
  }
};

inline double criterion_value(const CriteriaVector& v, Criterion c) {
  switch (c) {
    case Criterion::Cost: return v.cost;
    case Criterion::Bandwidth: return v.bandwidth;
    case Criterion::Rss: return v.rss;
    case Criterion::Delay: return v.delay;
    case Criterion::Priority: break;
  }
  return 0.0;
}

inline FuzzifiedVector fuzzify(const CriteriaVector& v, const FuzzyConfig& cfg) {
  FuzzifiedVector out;
  for (auto c : kNumericCriteria) {
    const auto& crit = cfg.numeric(c);
    const double raw = criterion_value(v, c);
    const double x = std::clamp(raw, crit.lo, crit.hi);
    const auto idx = static_cast<std::size_t>(c);
    if (x != raw) out.clamped_mask |= static_cast<std::uint8_t>(1u << idx);
    for (std::size_t i = 0; i < kLabelsPerCriterion; ++i) out.degrees[idx][i] = membership(crit.sets[i], x);
  }
  auto& u = out.degrees[static_cast<std::size_t>(Criterion::Priority)];
  u[static_cast<std::size_t>(v.priority)] = 1.0;
  return out;
}

// Expected label utility of each criterion, in weight order.
inline std::array<double, kNumCriteria> criterion_utilities(const FuzzifiedVector& f, const FuzzyConfig& cfg,
                                                            std::optional<RatKind> rat = std::nullopt) {
  std::array<double, kNumCriteria> out{};
  for (auto c : kNumericCriteria) {
    const auto& util = cfg.numeric(c).utilities;
    const auto& deg = f.of(c);
    double s = 0.0;
    for (std::size_t i = 0; i < kLabelsPerCriterion; ++i) s += deg[i] * util[i];
    out[static_cast<std::size_t>(c)] = s;
  }
  const auto& putil = cfg.priority.for_rat(rat);
  const auto& pdeg = f.of(Criterion::Priority);
  double s = 0.0;
  for (std::size_t i = 0; i < kLabelsPerCriterion; ++i) s += pdeg[i] * putil[i];
  out[static_cast<std::size_t>(Criterion::Priority)] = s;
  return out;
}

// Score in [0,1]. Without a RAT the best-effort priority table applies.
inline double score_network(const CriteriaVector& v, const FuzzyConfig& cfg,
                            std::optional<RatKind> rat = std::nullopt) {
  double wsum = 0.0;
  for (double w : cfg.weights) wsum += w;
  if (!(wsum > 0.0)) throw ConfigError("fuzzy weight vector sums to zero");
  const auto util = criterion_utilities(fuzzify(v, cfg), cfg, rat);
  double s = 0.0;
  for (std::size_t i = 0; i < kNumCriteria; ++i) s += cfg.weights[i] * util[i];
  return std::clamp(s / wsum, 0.0, 1.0);
}

inline CellCriteria under_load(const CellCriteria& base, double utilization, const LoadModel& model) {
  if (!model.enabled) return base;
  const double rho = std::clamp(utilization, 0.0, model.max_utilization);
  CellCriteria out = base;
  out.delay = base.delay / (1.0 - rho);
  out.bandwidth = base.bandwidth * (1.0 - rho);
  return out;
}

struct Candidate {
  std::string cell_id;
  CriteriaVector criteria;
  std::optional<RatKind> rat;
};

struct RankedNetwork {
  std::string cell_id;
  double score = 0.0;

  bool operator==(const RankedNetwork&) const = default;
};

class EmptyInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Descending by score; equal scores ordered by ascending cell id.
inline std::vector<RankedNetwork> rank_networks(const std::vector<Candidate>& candidates, const FuzzyConfig& cfg) {
  if (candidates.empty()) throw EmptyInputError("rank_networks: no candidates");
  std::vector<RankedNetwork> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back({c.cell_id, score_network(c.criteria, cfg, c.rat)});
  std::sort(out.begin(), out.end(), [](const RankedNetwork& x, const RankedNetwork& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.cell_id < y.cell_id;
  });
  return out;
}

}  // namespace hetnetsim::fuzzy
