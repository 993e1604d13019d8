#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hetnetsim {

enum class RatKind { Lte, Umts, Wlan80211 };

inline constexpr std::array<RatKind, 3> kAllRats{RatKind::Lte, RatKind::Umts, RatKind::Wlan80211};

inline constexpr std::string_view to_string(RatKind rat) {
  switch (rat) {
    case RatKind::Lte: return "lte";
    case RatKind::Umts: return "umts";
    case RatKind::Wlan80211: return "wlan80211";
  }
  return "?";
}

inline std::optional<RatKind> rat_from_string(std::string_view s) {
  for (auto rat : kAllRats) {
    if (to_string(rat) == s) return rat;
  }
  return std::nullopt;
}

inline constexpr bool is_cellular(RatKind rat) { return rat != RatKind::Wlan80211; }

// User priority labels (U).
enum class Priority { Insensitive, Ordinary, HighQoS };

inline constexpr std::array<Priority, 3> kAllPriorities{Priority::Insensitive, Priority::Ordinary,
                                                        Priority::HighQoS};

inline constexpr std::string_view to_string(Priority p) {
  switch (p) {
    case Priority::Insensitive: return "Insensitive";
    case Priority::Ordinary: return "Ordinary";
    case Priority::HighQoS: return "HighQoS";
  }
  return "?";
}

inline std::optional<Priority> priority_from_string(std::string_view s) {
  for (auto p : kAllPriorities) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

enum class MobilityClass { Vehicular, NonVehicular };
enum class ServiceClass { RealTime, NonRealTime };

// One candidate network as seen at one decision instant.
// cost: cents/Kb, bandwidth: Mbit/s, rss: dBm, delay: ms.
struct CriteriaVector {
  double cost = 0.0;
  double bandwidth = 0.0;
  double rss = 0.0;
  Priority priority = Priority::Ordinary;
  double delay = 0.0;

  bool operator==(const CriteriaVector&) const = default;
};

// Static per-cell criteria; U is attached per session.
struct CellCriteria {
  double cost = 0.0;
  double bandwidth = 0.0;
  double rss = 0.0;
  double delay = 0.0;

  CriteriaVector with_priority(Priority p) const { return {cost, bandwidth, rss, p, delay}; }

  bool operator==(const CellCriteria&) const = default;
};

struct Cell {
  std::string id;
  RatKind rat = RatKind::Lte;
  std::int64_t capacity_sessions = 0;
  CellCriteria criteria;

  bool operator==(const Cell&) const = default;
};

struct Site {
  std::string id;
  std::vector<Cell> cells;

  bool operator==(const Site&) const = default;
};

struct Hotspot {
  std::string id;
  std::string wlan_cell;
  std::string overlay_cell;

  bool operator==(const Hotspot&) const = default;
};

struct PopulationSpec {
  std::int64_t num_users = 1;
  double p_vehicular = 0.0;

  bool operator==(const PopulationSpec&) const = default;
};

struct PriorityMix {
  double insensitive = 1.0 / 3.0;
  double ordinary = 1.0 / 3.0;
  double high_qos = 1.0 / 3.0;

  double sum() const { return insensitive + ordinary + high_qos; }
  bool operator==(const PriorityMix&) const = default;
};

struct WorkloadSpec {
  double arrival_rate_per_user_per_epoch = 0.0;
  double mean_session_epochs = 1.0;
  double p_realtime = 0.5;
  PriorityMix priority_mix;

  bool operator==(const WorkloadSpec&) const = default;
};

struct SignallingCostModel {
  double cost_ho_attempt = 0.0;
  double cost_ho_complete = 0.0;
  double cost_admit = 0.0;

  bool operator==(const SignallingCostModel&) const = default;
};

}  // namespace hetnetsim
