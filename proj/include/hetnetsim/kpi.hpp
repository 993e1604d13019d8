#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "hetnetsim/event_log.hpp"
#include "hetnetsim/types.hpp"

namespace hetnetsim::sim {

struct KpiReport {
  std::int64_t ho_attempts = 0;
  std::int64_t ho_successes = 0;
  std::optional<double> hosr;
  std::map<std::string, double> signalling_load_per_site;
  double new_call_blocking = 0.0;
  double hotspot_occupancy_mean = 0.0;
  std::map<RatKind, std::int64_t> per_rat_load{{RatKind::Lte, 0}, {RatKind::Umts, 0}, {RatKind::Wlan80211, 0}};
  std::uint64_t seed = 0;

  double signalling_total() const {
    double t = 0.0;
    for (const auto& [_, v] : signalling_load_per_site) t += v;
    return t;
  }

  bool operator==(const KpiReport&) const = default;
};

inline std::optional<double> success_rate(std::int64_t successes, std::int64_t attempts) {
  if (attempts <= 0) return std::nullopt;
  return static_cast<double>(successes) / static_cast<double>(attempts);
}

inline double ratio_or_zero(std::int64_t num, std::int64_t den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

inline nlohmann::ordered_json kpi_to_json(const KpiReport& r) {
  nlohmann::ordered_json j;
  j["ho_attempts"] = r.ho_attempts;
  j["ho_successes"] = r.ho_successes;
  j["hosr"] = r.hosr ? nlohmann::ordered_json(*r.hosr) : nlohmann::ordered_json(nullptr);
  auto sites = nlohmann::ordered_json::object();
  for (const auto& [id, v] : r.signalling_load_per_site) sites[id] = v;
  j["signalling_load_per_site"] = sites;
  j["new_call_blocking"] = r.new_call_blocking;
  j["hotspot_occupancy_mean"] = r.hotspot_occupancy_mean;
  auto rats = nlohmann::ordered_json::object();
  for (const auto& [rat, v] : r.per_rat_load) rats[std::string(to_string(rat))] = v;
  j["per_rat_load"] = rats;
  j["seed"] = r.seed;
  return j;
}

inline std::string serialize_kpi(const KpiReport& r) { return kpi_to_json(r).dump(2) + "\n"; }

inline KpiReport kpi_from_json(const nlohmann::ordered_json& j) {
  KpiReport r;
  r.ho_attempts = j.at("ho_attempts").get<std::int64_t>();
  r.ho_successes = j.at("ho_successes").get<std::int64_t>();
  if (!j.at("hosr").is_null()) r.hosr = j.at("hosr").get<double>();
  for (const auto& [id, v] : j.at("signalling_load_per_site").items()) r.signalling_load_per_site[id] = v.get<double>();
  r.new_call_blocking = j.at("new_call_blocking").get<double>();
  r.hotspot_occupancy_mean = j.at("hotspot_occupancy_mean").get<double>();
  for (const auto& [name, v] : j.at("per_rat_load").items()) {
    auto rat = rat_from_string(name);
    if (!rat) throw std::invalid_argument("unknown rat '" + name + "' in per_rat_load");
    r.per_rat_load[*rat] = v.get<std::int64_t>();
  }
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

namespace detail {

// Row index -> 1-based file line (the header is line 1).
[[noreturn]] inline void fail_row(std::size_t i, const std::string& msg) { throw MalformedLogError(i + 2, msg); }

}  // namespace detail

// Recomputes every KPI from the log alone.
inline KpiReport collect_kpis(const EventLog& log) {
  KpiReport r;
  struct SessionPos {
    std::string cell;
    std::int64_t since = 0;
  };
  std::unordered_map<std::string, std::string> cell_site;
  std::unordered_map<std::string, RatKind> cell_rat;
  std::unordered_map<std::int64_t, bool> user_inside;
  std::map<std::int64_t, SessionPos> sessions;
  std::vector<std::int64_t> inside_delta;
  std::int64_t initial_inside = 0;
  std::int64_t duration = 0;
  std::int64_t arrivals = 0;
  std::int64_t blocked = 0;
  bool have_run = false;

  auto site_of = [&](std::size_t i, const std::string& cell) -> const std::string& {
    auto it = cell_site.find(cell);
    if (it == cell_site.end()) detail::fail_row(i, "unknown cell '" + cell + "'");
    return it->second;
  };
  auto charge = [&](std::size_t i, const std::string& cell, double cost) {
    r.signalling_load_per_site[site_of(i, cell)] += cost;
  };
  auto load = [&](const SessionPos& p, std::int64_t until) { r.per_rat_load[cell_rat.at(p.cell)] += until - p.since; };
  auto session_at = [&](std::size_t i, const LogRow& row) -> SessionPos& {
    if (!row.session_id) detail::fail_row(i, "missing session_id");
    auto it = sessions.find(*row.session_id);
    if (it == sessions.end()) detail::fail_row(i, "unknown session " + std::to_string(*row.session_id));
    if (it->second.cell != row.from_cell) detail::fail_row(i, "session is not on cell '" + row.from_cell + "'");
    return it->second;
  };

  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const auto& row = log.rows[i];
    if (!have_run && row.kind != LogKind::Run) detail::fail_row(i, "first row must be the run row");
    if (row.epoch < 0 || (have_run && row.epoch >= duration)) detail::fail_row(i, "epoch outside the run");
    switch (row.kind) {
      case LogKind::Run: {
        if (have_run) detail::fail_row(i, "duplicate run row");
        unsigned long long seed = 0;
        long long epochs = 0;
        char tail = 0;
        if (std::sscanf(row.outcome.c_str(), "seed=%llu;epochs=%lld%c", &seed, &epochs, &tail) != 2 || epochs < 1) {
          detail::fail_row(i, "bad run descriptor '" + row.outcome + "'");
        }
        r.seed = seed;
        duration = epochs;
        inside_delta.assign(static_cast<std::size_t>(duration), 0);
        have_run = true;
        break;
      }
      case LogKind::Cell: {
        auto rat = rat_from_string(row.outcome);
        if (!rat) detail::fail_row(i, "unknown rat '" + row.outcome + "'");
        cell_site[row.from_cell] = row.to_cell;
        cell_rat[row.from_cell] = *rat;
        r.signalling_load_per_site.try_emplace(row.to_cell, 0.0);
        break;
      }
      case LogKind::User: {
        if (!row.user_id) detail::fail_row(i, "missing user_id");
        const bool inside = row.to_cell != kOutsideRegion;
        user_inside[*row.user_id] = inside;
        if (inside) ++initial_inside;
        break;
      }
      case LogKind::Mobility: {
        if (!row.user_id) detail::fail_row(i, "missing user_id");
        auto it = user_inside.find(*row.user_id);
        if (it == user_inside.end()) detail::fail_row(i, "unknown user " + std::to_string(*row.user_id));
        const bool inside = row.to_cell != kOutsideRegion;
        if (inside == it->second) detail::fail_row(i, "mobility row without region change");
        it->second = inside;
        inside_delta[static_cast<std::size_t>(row.epoch)] += inside ? 1 : -1;
        break;
      }
      case LogKind::Arrival: {
        ++arrivals;
        charge(i, row.from_cell, row.signalling_cost);
        if (row.outcome == "blocked") {
          ++blocked;
        } else if (row.outcome == "admitted" || row.outcome == "fallback") {
          if (!row.session_id) detail::fail_row(i, "admitted arrival without session_id");
          site_of(i, row.to_cell);
          if (!sessions.emplace(*row.session_id, SessionPos{row.to_cell, row.epoch}).second) {
            detail::fail_row(i, "duplicate session " + std::to_string(*row.session_id));
          }
        } else {
          detail::fail_row(i, "unknown arrival outcome '" + row.outcome + "'");
        }
        break;
      }
      case LogKind::Handover:
      case LogKind::ForcedHandover: {
        auto& pos = session_at(i, row);
        ++r.ho_attempts;
        charge(i, row.from_cell, row.signalling_cost);
        if (row.outcome == "success") {
          ++r.ho_successes;
          site_of(i, row.to_cell);
          load(pos, row.epoch);
          pos = {row.to_cell, row.epoch};
        } else if (row.outcome != "failure") {
          detail::fail_row(i, "unknown handover outcome '" + row.outcome + "'");
        }
        break;
      }
      case LogKind::Drop:
      case LogKind::End: {
        auto& pos = session_at(i, row);
        load(pos, row.epoch);
        sessions.erase(*row.session_id);
        break;
      }
    }
  }
  for (const auto& [_, pos] : sessions) load(pos, duration);

  r.hosr = success_rate(r.ho_successes, r.ho_attempts);
  r.new_call_blocking = ratio_or_zero(blocked, arrivals);
  std::int64_t inside = initial_inside;
  std::int64_t inside_sum = 0;
  for (auto d : inside_delta) {
    inside += d;
    inside_sum += inside;
  }
  r.hotspot_occupancy_mean = ratio_or_zero(inside_sum, duration * static_cast<std::int64_t>(user_inside.size()));
  return r;
}

}  // namespace hetnetsim::sim
