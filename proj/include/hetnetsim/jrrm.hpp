#pragma once

// Joint radio resource management: RAT selection for new sessions, WLAN
// admission with cellular fallback, and hysteresis-gated vertical handover.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hetnetsim/errors.hpp"
#include "hetnetsim/mobility.hpp"
#include "hetnetsim/types.hpp"

namespace hetnetsim::jrrm {

enum class Rule {
  OutsideHotspot,
  VehicularInHotspot,
  NonRealTimeWlan,
  RealTimeStayWlan,
  RealTimeLeaveLte,
  CapacityFallback,
  // Prediction branch under the prose reading (Stay -> LTE, Leave -> WLAN).
  RealTimeStayLte,
  RealTimeLeaveWlan,
};

inline constexpr std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::OutsideHotspot: return "OutsideHotspot";
    case Rule::VehicularInHotspot: return "VehicularInHotspot";
    case Rule::NonRealTimeWlan: return "NonRealTimeWlan";
    case Rule::RealTimeStayWlan: return "RealTimeStayWlan";
    case Rule::RealTimeLeaveLte: return "RealTimeLeaveLte";
    case Rule::CapacityFallback: return "CapacityFallback";
    case Rule::RealTimeStayLte: return "RealTimeStayLte";
    case Rule::RealTimeLeaveWlan: return "RealTimeLeaveWlan";
  }
  return "?";
}

struct UserContext {
  bool inside_hotspot = false;
  MobilityClass mobility_class = MobilityClass::NonVehicular;
  ServiceClass service_class = ServiceClass::NonRealTime;
  Priority priority = Priority::Ordinary;
  std::optional<mobility::LocationPrediction> prediction;
};

struct RatDecision {
  RatKind target = RatKind::Lte;
  Rule rule = Rule::OutsideHotspot;

  bool operator==(const RatDecision&) const = default;
};

enum class PredictionSemantics {
  Table,  // Stay -> 802.11, Leave -> LTE
  Prose,  // Stay -> LTE, Leave -> 802.11
};

inline RatDecision select_rat(const UserContext& ctx, PredictionSemantics semantics = PredictionSemantics::Table) {
  if (!ctx.inside_hotspot) return {RatKind::Lte, Rule::OutsideHotspot};
  if (ctx.mobility_class == MobilityClass::Vehicular) return {RatKind::Lte, Rule::VehicularInHotspot};
  if (ctx.service_class == ServiceClass::NonRealTime) return {RatKind::Wlan80211, Rule::NonRealTimeWlan};
  if (!ctx.prediction) throw PreconditionError("select_rat: real-time in-hotspot user without location prediction");
  const bool leaving = ctx.prediction->verdict == mobility::Verdict::Leave;
  if (semantics == PredictionSemantics::Table) {
    return leaving ? RatDecision{RatKind::Lte, Rule::RealTimeLeaveLte}
                   : RatDecision{RatKind::Wlan80211, Rule::RealTimeStayWlan};
  }
  return leaving ? RatDecision{RatKind::Wlan80211, Rule::RealTimeLeaveWlan}
                 : RatDecision{RatKind::Lte, Rule::RealTimeStayLte};
}

// Per-cell session counts against fixed capacities.
class Occupancy {
 public:
  Occupancy() = default;

  explicit Occupancy(const std::vector<Site>& sites) {
    for (std::size_t s = 0; s < sites.size(); ++s) {
      for (const auto& cell : sites[s].cells) {
        index_.emplace(cell.id, ids_.size());
        ids_.push_back(cell.id);
        capacity_.push_back(cell.capacity_sessions);
        site_.push_back(s);
        rat_.push_back(cell.rat);
      }
    }
    count_.assign(ids_.size(), 0);
  }

  std::size_t size() const { return ids_.size(); }

  std::size_t index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw UnknownCellError(std::string(id));
    return it->second;
  }

  const std::string& id(std::size_t i) const { return ids_.at(i); }
  std::int64_t count(std::size_t i) const { return count_.at(i); }
  std::int64_t capacity(std::size_t i) const { return capacity_.at(i); }
  std::size_t site(std::size_t i) const { return site_.at(i); }
  RatKind rat(std::size_t i) const { return rat_.at(i); }
  bool has_room(std::size_t i) const { return count_.at(i) < capacity_.at(i); }
  double utilization(std::size_t i, std::int64_t extra = 0) const {
    if (capacity_.at(i) <= 0) return 1.0;
    return static_cast<double>(count_[i] + extra) / static_cast<double>(capacity_[i]);
  }

  std::int64_t count(std::string_view id) const { return count(index_of(id)); }
  bool has_room(std::string_view id) const { return has_room(index_of(id)); }

  void join(std::size_t i) {
    if (!has_room(i)) throw std::logic_error("join: cell '" + ids_[i] + "' is full");
    ++count_[i];
  }
  void leave(std::size_t i) {
    if (count_.at(i) <= 0) throw std::logic_error("leave: cell '" + ids_[i] + "' is empty");
    --count_[i];
  }

  std::int64_t total() const {
    std::int64_t t = 0;
    for (auto c : count_) t += c;
    return t;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> ids_;
  std::vector<std::int64_t> capacity_;
  std::vector<std::int64_t> count_;
  std::vector<std::size_t> site_;
  std::vector<RatKind> rat_;
};

enum class AdmissionKind { Admitted, FallbackAdmitted, Blocked };

inline constexpr std::string_view to_string(AdmissionKind k) {
  switch (k) {
    case AdmissionKind::Admitted: return "admitted";
    case AdmissionKind::FallbackAdmitted: return "fallback";
    case AdmissionKind::Blocked: return "blocked";
  }
  return "?";
}

struct AdmissionResult {
  AdmissionKind kind = AdmissionKind::Blocked;
  std::string requested_cell;
  std::optional<std::string> cell;  // where the session now resides
  RatDecision decision;             // rule becomes CapacityFallback on fallback

  bool operator==(const AdmissionResult&) const = default;
};

// WLAN targets fall back to the hotspot's cellular overlay when full; cellular
// targets never fall back to WLAN. Joins the admitting cell.
inline AdmissionResult admit(const RatDecision& decision, const Hotspot& hotspot, Occupancy& occupancy) {
  AdmissionResult out;
  out.decision = decision;
  const bool wants_wlan = decision.target == RatKind::Wlan80211;
  out.requested_cell = wants_wlan ? hotspot.wlan_cell : hotspot.overlay_cell;
  const auto requested = occupancy.index_of(out.requested_cell);
  const auto overlay = occupancy.index_of(hotspot.overlay_cell);
  if (occupancy.has_room(requested)) {
    occupancy.join(requested);
    out.kind = AdmissionKind::Admitted;
    out.cell = out.requested_cell;
  } else if (wants_wlan && occupancy.has_room(overlay)) {
    occupancy.join(overlay);
    out.kind = AdmissionKind::FallbackAdmitted;
    out.cell = hotspot.overlay_cell;
    out.decision = {occupancy.rat(overlay), Rule::CapacityFallback};
  }
  return out;
}

struct HysteresisConfig {
  double score_margin = 0.05;
  std::int64_t min_dwell_epochs = 0;

  bool operator==(const HysteresisConfig&) const = default;
};

struct ScoredCell {
  std::string cell_id;
  double score = 0.0;
};

struct HandoverAttempt {
  std::string target_cell;
  double score_gain = 0.0;

  bool operator==(const HandoverAttempt&) const = default;
};

// nullopt is the None action.
using HandoverAction = std::optional<HandoverAttempt>;

inline bool hysteresis_passes(double gain, std::int64_t dwell_epochs, const HysteresisConfig& cfg) {
  return gain > cfg.score_margin && dwell_epochs >= cfg.min_dwell_epochs;
}

inline HandoverAction evaluate_handover(double current_score, const ScoredCell& best_candidate,
                                        const HysteresisConfig& cfg, std::int64_t dwell_epochs) {
  const double gain = best_candidate.score - current_score;
  if (!hysteresis_passes(gain, dwell_epochs, cfg)) return std::nullopt;
  return HandoverAttempt{best_candidate.cell_id, gain};
}

struct HandoverOutcome {
  bool success = false;
  double cost = 0.0;

  bool operator==(const HandoverOutcome&) const = default;
};

// Moves the session from `from_cell` to the target iff the target has room.
inline HandoverOutcome execute_handover(const HandoverAttempt& action, std::string_view from_cell,
                                        Occupancy& occupancy, const SignallingCostModel& signalling) {
  const auto to = occupancy.index_of(action.target_cell);
  const auto from = occupancy.index_of(from_cell);
  if (!occupancy.has_room(to)) return {false, signalling.cost_ho_attempt};
  occupancy.leave(from);
  occupancy.join(to);
  return {true, signalling.cost_ho_attempt + signalling.cost_ho_complete};
}

// One recorded handover evaluation: the inputs evaluate_handover saw.
struct ScoreSample {
  double current_score = 0.0;
  double candidate_score = 0.0;
  std::int64_t dwell_epochs = 0;

  bool operator==(const ScoreSample&) const = default;
};

// Open-loop attempt count over a fixed trace.
inline std::int64_t replay_attempts(std::span<const ScoreSample> trace, const HysteresisConfig& cfg) {
  std::int64_t n = 0;
  for (const auto& s : trace) {
    if (evaluate_handover(s.current_score, {"", s.candidate_score}, cfg, s.dwell_epochs)) ++n;
  }
  return n;
}

}  // namespace hetnetsim::jrrm
