#pragma once

// Two-region (inside hotspot / outside) per-epoch Markov mobility model and
// the empirical location predictor built on each user's transition history.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hetnetsim/errors.hpp"
#include "hetnetsim/types.hpp"

namespace hetnetsim::mobility {

struct MobilityParams {
  double p_exit = 0.1;
  double p_enter = 0.1;
  double vehicular_multiplier = 4.0;
  std::int64_t min_evidence = 5;
  std::int64_t history_capacity = 64;

  bool operator==(const MobilityParams&) const = default;
};

struct EffectiveProbs {
  double p_exit = 0.0;
  double p_enter = 0.0;

  bool operator==(const EffectiveProbs&) const = default;
};

inline EffectiveProbs effective_probs(const MobilityParams& params, MobilityClass cls) {
  if (cls == MobilityClass::NonVehicular) return {params.p_exit, params.p_enter};
  const double m = params.vehicular_multiplier;
  return {std::min(1.0, m * params.p_exit), std::min(1.0, m * params.p_enter)};
}

class DegenerateParametersError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Probability of being inside at equilibrium: the balance
// N_in * p_exit = N_out * p_enter solved for N_in / (N_in + N_out).
inline double stationary_occupancy(const MobilityParams& params, MobilityClass cls) {
  const auto eff = effective_probs(params, cls);
  const double total = eff.p_exit + eff.p_enter;
  if (!(total > 0.0)) throw DegenerateParametersError("both transition probabilities are zero");
  return eff.p_enter / total;
}

// Region: index of the hotspot the user is inside, or kOutside.
struct Region {
  static constexpr std::int32_t kOutside = -1;
  std::int32_t hotspot = kOutside;

  bool inside() const { return hotspot != kOutside; }
  static Region outside() { return {}; }
  static Region in(std::int32_t h) { return {h}; }
  bool operator==(const Region&) const = default;
};

struct Transition {
  std::int64_t epoch = 0;  // epoch at which the new region took effect
  Region from;
  Region to;

  bool operator==(const Transition&) const = default;
};

// Fixed-capacity ring of transitions, oldest first. Overwrites the oldest
// entry when full.
class TransitionRing {
 public:
  TransitionRing() = default;
  explicit TransitionRing(std::size_t capacity) : capacity_(capacity) {}

  void push(const Transition& t) {
    if (capacity_ == 0) return;
    if (buf_.size() < capacity_) {
      buf_.push_back(t);
      return;
    }
    buf_[head_] = t;
    head_ = (head_ + 1) % capacity_;
  }

  std::size_t size() const { return buf_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return buf_.empty(); }
  const Transition& operator[](std::size_t i) const { return buf_[(head_ + i) % buf_.size()]; }
  const Transition& back() const { return (*this)[buf_.size() - 1]; }

  bool operator==(const TransitionRing& o) const {
    if (size() != o.size() || capacity_ != o.capacity_) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      if (!((*this)[i] == o[i])) return false;
    }
    return true;
  }

 private:
  std::size_t capacity_ = 64;
  std::size_t head_ = 0;
  std::vector<Transition> buf_;
};

struct UserState {
  std::int64_t user_id = 0;
  MobilityClass mobility_class = MobilityClass::NonVehicular;
  std::int32_t home_hotspot = Region::kOutside;
  Region region;
  std::int64_t epoch = 0;  // number of mobility steps taken
  TransitionRing history;
  std::optional<std::int64_t> session;

  bool operator==(const UserState&) const = default;
};

// Core transition rule: leave iff draw < p_exit, enter iff draw < p_enter.
// Both comparisons are evaluated so the compiler emits no data-dependent branch.
inline bool region_changes(bool inside, const EffectiveProbs& eff, double draw) {
  return (inside & (draw < eff.p_exit)) | (!inside & (draw < eff.p_enter));
}

inline UserState step_user(UserState state, const MobilityParams& params, double draw) {
  const auto eff = effective_probs(params, state.mobility_class);
  const bool inside = state.region.inside();
  ++state.epoch;
  if (state.home_hotspot == Region::kOutside && !inside) return state;
  if (region_changes(inside, eff, draw)) {
    const Region next = inside ? Region::outside() : Region::in(state.home_hotspot);
    state.history.push({state.epoch, state.region, next});
    state.region = next;
  }
  return state;
}

enum class Verdict { Stay, Leave };

struct LocationPrediction {
  Verdict verdict = Verdict::Stay;
  double estimated_leave_probability = 0.0;
  std::int64_t evidence_count = 0;

  bool operator==(const LocationPrediction&) const = default;
};

// P(at least one exit in `horizon` epochs) with per-epoch exit probability p.
inline double leave_probability(double p_exit, std::int64_t horizon) {
  if (horizon <= 0) return 0.0;
  return 1.0 - std::pow(1.0 - std::clamp(p_exit, 0.0, 1.0), static_cast<double>(horizon));
}

struct ExitEvidence {
  std::int64_t inside_epochs = 0;  // exit opportunities observed
  std::int64_t exits = 0;
};

// Counts exit opportunities and exits over the retained history. A stay whose
// entry fell out of the ring is ignored; the ongoing stay counts up to now.
inline ExitEvidence exit_evidence(const UserState& state) {
  ExitEvidence ev;
  constexpr std::int64_t kNone = -1;
  std::int64_t entered = kNone;
  for (std::size_t i = 0; i < state.history.size(); ++i) {
    const auto& t = state.history[i];
    if (t.to.inside() && !t.from.inside()) {
      entered = t.epoch;
    } else if (!t.to.inside() && t.from.inside()) {
      if (entered != kNone) {
        ev.inside_epochs += t.epoch - entered;
        ev.exits += 1;
      }
      entered = kNone;
    }
  }
  if (entered != kNone && state.region.inside()) ev.inside_epochs += state.epoch - entered;
  return ev;
}

inline LocationPrediction predict_location(const UserState& state, std::int64_t remaining_epochs,
                                           const MobilityParams& params) {
  if (!state.region.inside()) throw PreconditionError("predict_location: user is outside every hotspot");
  if (remaining_epochs < 1) throw PreconditionError("predict_location: horizon must be positive");
  const auto ev = exit_evidence(state);
  double p_hat = effective_probs(params, state.mobility_class).p_exit;
  if (ev.inside_epochs >= params.min_evidence && ev.inside_epochs > 0) {
    p_hat = static_cast<double>(ev.exits) / static_cast<double>(ev.inside_epochs);
  }
  LocationPrediction out;
  out.evidence_count = ev.inside_epochs;
  out.estimated_leave_probability = leave_probability(p_hat, remaining_epochs);
  out.verdict = out.estimated_leave_probability > 0.5 ? Verdict::Leave : Verdict::Stay;
  return out;
}

}  // namespace hetnetsim::mobility
