#pragma once

// Scenario documents: JSON decoding with strict key checking, invariant
// validation, canonical re-encoding and parameter-path overrides.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hetnetsim/fuzzy.hpp"
#include "hetnetsim/jrrm.hpp"
#include "hetnetsim/mobility.hpp"
#include "hetnetsim/types.hpp"

namespace hetnetsim {

using json = nlohmann::ordered_json;

struct HandoverConfig {
  jrrm::HysteresisConfig hysteresis;
  bool table2_semantics = true;
  std::map<std::string, jrrm::HysteresisConfig> presets;

  bool operator==(const HandoverConfig&) const = default;
};

struct Scenario {
  std::string name;
  std::vector<Site> sites;
  std::vector<Hotspot> hotspots;
  PopulationSpec population;
  mobility::MobilityParams mobility;
  fuzzy::FuzzyConfig fuzzy;
  HandoverConfig handover;
  WorkloadSpec workload;
  SignallingCostModel signalling;
  std::int64_t duration_epochs = 1;
  std::uint64_t seed = 0;

  const Cell* find_cell(std::string_view id) const {
    for (const auto& s : sites) {
      for (const auto& c : s.cells) {
        if (c.id == id) return &c;
      }
    }
    return nullptr;
  }

  std::size_t num_cells() const {
    std::size_t n = 0;
    for (const auto& s : sites) n += s.cells.size();
    return n;
  }

  bool operator==(const Scenario&) const = default;
};

enum class ErrorKind { Syntax, Schema, CrossReference };

inline constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::Schema: return "schema violation";
    case ErrorKind::CrossReference: return "cross-reference error";
  }
  return "?";
}

struct Violation {
  ErrorKind kind = ErrorKind::Schema;
  std::string path;
  std::string message;

  bool operator==(const Violation&) const = default;
};

inline std::string format_violation(const Violation& v) { return v.path + ": " + v.message; }

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(ErrorKind kind, std::string path, const std::string& message, std::size_t position = 0)
      : std::runtime_error(describe(kind, path, message, position)),
        kind_(kind),
        path_(std::move(path)),
        position_(position) {}

  explicit ScenarioError(std::vector<Violation> violations)
      : std::runtime_error(describe(violations)),
        kind_(summary_kind(violations)),
        path_(violations.empty() ? "" : violations.front().path),
        violations_(std::move(violations)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& path() const noexcept { return path_; }
  std::size_t position() const noexcept { return position_; }
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string describe(ErrorKind kind, const std::string& path, const std::string& message,
                              std::size_t position) {
    std::string out(to_string(kind));
    if (kind == ErrorKind::Syntax) out += " at byte " + std::to_string(position);
    if (!path.empty()) out += " at " + path;
    return out + ": " + message;
  }
  static ErrorKind summary_kind(const std::vector<Violation>& vs) {
    for (const auto& v : vs) {
      if (v.kind == ErrorKind::CrossReference) return ErrorKind::CrossReference;
    }
    return ErrorKind::Schema;
  }
  static std::string describe(const std::vector<Violation>& vs) {
    std::string out = std::string(to_string(summary_kind(vs))) + ": ";
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i) out += "; ";
      out += format_violation(vs[i]);
    }
    return out;
  }

  ErrorKind kind_;
  std::string path_;
  std::size_t position_ = 0;
  std::vector<Violation> violations_;
};

namespace detail {

class Reader {
 public:
  [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
    throw ScenarioError(ErrorKind::Schema, path, msg);
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }
  static std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

  static const json& object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : j.items()) {
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) fail(join(path, key), "unknown key");
    }
    return j;
  }

  static const json& field(const json& obj, const std::string& path, std::string_view key) {
    auto it = obj.find(std::string(key));
    if (it == obj.end()) fail(join(path, key), "missing required key");
    return *it;
  }

  static const json* optional_field(const json& obj, std::string_view key) {
    auto it = obj.find(std::string(key));
    return it == obj.end() ? nullptr : &*it;
  }

  static double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
  }
  static std::int64_t integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      fail(path, "integer out of range");
    }
    return j.get<std::int64_t>();
  }
  static std::uint64_t unsigned_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an unsigned integer");
    if (!j.is_number_unsigned() && j.get<std::int64_t>() < 0) fail(path, "expected an unsigned integer");
    return j.get<std::uint64_t>();
  }
  static std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }
  static bool boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
  }
  static const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
  }
};

inline CellCriteria read_criteria(const json& j, const std::string& path) {
  Reader::object(j, path, {"cost", "bandwidth", "rss", "delay"});
  CellCriteria c;
  c.cost = Reader::number(Reader::field(j, path, "cost"), Reader::join(path, "cost"));
  c.bandwidth = Reader::number(Reader::field(j, path, "bandwidth"), Reader::join(path, "bandwidth"));
  c.rss = Reader::number(Reader::field(j, path, "rss"), Reader::join(path, "rss"));
  c.delay = Reader::number(Reader::field(j, path, "delay"), Reader::join(path, "delay"));
  return c;
}

inline Cell read_cell(const json& j, const std::string& path) {
  Reader::object(j, path, {"id", "rat", "capacity_sessions", "criteria"});
  Cell c;
  c.id = Reader::string(Reader::field(j, path, "id"), Reader::join(path, "id"));
  const auto rat_path = Reader::join(path, "rat");
  const auto rat = rat_from_string(Reader::string(Reader::field(j, path, "rat"), rat_path));
  if (!rat) Reader::fail(rat_path, "expected one of lte, umts, wlan80211");
  c.rat = *rat;
  c.capacity_sessions =
      Reader::integer(Reader::field(j, path, "capacity_sessions"), Reader::join(path, "capacity_sessions"));
  c.criteria = read_criteria(Reader::field(j, path, "criteria"), Reader::join(path, "criteria"));
  return c;
}

inline jrrm::HysteresisConfig read_hysteresis(const json& j, const std::string& path) {
  jrrm::HysteresisConfig h;
  h.score_margin = Reader::number(Reader::field(j, path, "score_margin"), Reader::join(path, "score_margin"));
  h.min_dwell_epochs =
      Reader::integer(Reader::field(j, path, "min_dwell_epochs"), Reader::join(path, "min_dwell_epochs"));
  return h;
}

inline std::array<double, 3> read_label_utilities(const json& j, const std::string& path) {
  Reader::object(j, path, {"Insensitive", "Ordinary", "HighQoS"});
  std::array<double, 3> out{};
  for (auto p : kAllPriorities) {
    const auto key = to_string(p);
    out[static_cast<std::size_t>(p)] = Reader::number(Reader::field(j, path, key), Reader::join(path, key));
  }
  return out;
}

inline fuzzy::NumericCriterion read_numeric_criterion(const json& j, const std::string& path) {
  Reader::object(j, path, {"universe", "sets"});
  fuzzy::NumericCriterion c;
  const auto upath = Reader::join(path, "universe");
  const auto& u = Reader::array(Reader::field(j, path, "universe"), upath);
  if (u.size() != 2) Reader::fail(upath, "expected [lo, hi]");
  c.lo = Reader::number(u[0], Reader::index(upath, 0));
  c.hi = Reader::number(u[1], Reader::index(upath, 1));
  const auto spath = Reader::join(path, "sets");
  const auto& sets = Reader::array(Reader::field(j, path, "sets"), spath);
  if (sets.size() != fuzzy::kLabelsPerCriterion) Reader::fail(spath, "expected exactly 3 sets");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto p = Reader::index(spath, i);
    Reader::object(sets[i], p, {"label", "trapezoid", "utility"});
    auto& mf = c.sets[i];
    mf.label = Reader::string(Reader::field(sets[i], p, "label"), Reader::join(p, "label"));
    const auto tpath = Reader::join(p, "trapezoid");
    const auto& t = Reader::array(Reader::field(sets[i], p, "trapezoid"), tpath);
    if (t.size() != 4) Reader::fail(tpath, "expected [a, b, c, d]");
    mf.a = Reader::number(t[0], Reader::index(tpath, 0));
    mf.b = Reader::number(t[1], Reader::index(tpath, 1));
    mf.c = Reader::number(t[2], Reader::index(tpath, 2));
    mf.d = Reader::number(t[3], Reader::index(tpath, 3));
    c.utilities[i] = Reader::number(Reader::field(sets[i], p, "utility"), Reader::join(p, "utility"));
  }
  return c;
}

inline fuzzy::FuzzyConfig read_fuzzy(const json& j, const std::string& path) {
  Reader::object(j, path, {"weights_order", "weights", "criteria", "priority_utilities", "load_model"});
  fuzzy::FuzzyConfig f;
  if (const auto* order = Reader::optional_field(j, "weights_order")) {
    const auto opath = Reader::join(path, "weights_order");
    Reader::array(*order, opath);
    bool ok = order->size() == fuzzy::kNumCriteria;
    for (std::size_t i = 0; ok && i < fuzzy::kNumCriteria; ++i) {
      ok = (*order)[i].is_string() && (*order)[i].get<std::string>() == fuzzy::kCriterionNames[i];
    }
    if (!ok) Reader::fail(opath, "weights are ordered [cost, bandwidth, rss, priority, delay]");
  }
  const auto wpath = Reader::join(path, "weights");
  const auto& w = Reader::array(Reader::field(j, path, "weights"), wpath);
  if (w.size() != fuzzy::kNumCriteria) Reader::fail(wpath, "expected 5 weights");
  for (std::size_t i = 0; i < w.size(); ++i) f.weights[i] = Reader::number(w[i], Reader::index(wpath, i));

  const auto cpath = Reader::join(path, "criteria");
  const auto& crit = Reader::object(Reader::field(j, path, "criteria"), cpath, {"cost", "bandwidth", "rss", "delay"});
  for (auto c : fuzzy::kNumericCriteria) {
    const auto key = fuzzy::kCriterionNames[static_cast<std::size_t>(c)];
    f.numeric(c) = read_numeric_criterion(Reader::field(crit, cpath, key), Reader::join(cpath, key));
  }

  const auto ppath = Reader::join(path, "priority_utilities");
  const auto& pu =
      Reader::object(Reader::field(j, path, "priority_utilities"), ppath, {"best_effort", "qos_guaranteed"});
  f.priority.best_effort =
      read_label_utilities(Reader::field(pu, ppath, "best_effort"), Reader::join(ppath, "best_effort"));
  f.priority.qos_guaranteed =
      read_label_utilities(Reader::field(pu, ppath, "qos_guaranteed"), Reader::join(ppath, "qos_guaranteed"));

  if (const auto* lm = Reader::optional_field(j, "load_model")) {
    const auto lpath = Reader::join(path, "load_model");
    Reader::object(*lm, lpath, {"enabled", "max_utilization"});
    f.load_model.enabled = Reader::boolean(Reader::field(*lm, lpath, "enabled"), Reader::join(lpath, "enabled"));
    f.load_model.max_utilization =
        Reader::number(Reader::field(*lm, lpath, "max_utilization"), Reader::join(lpath, "max_utilization"));
  }
  return f;
}

}  // namespace detail

// Syntax and schema only; invariants are checked by validate_scenario.
inline Scenario decode_scenario(std::string_view text) {
  using detail::Reader;
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError(ErrorKind::Syntax, "", e.what(), e.byte);
  }
  Reader::object(root, "",
                 {"name", "sites", "hotspots", "population", "mobility", "fuzzy", "handover", "workload",
                  "signalling", "duration_epochs", "seed"});
  Scenario s;
  s.name = Reader::string(Reader::field(root, "", "name"), "name");

  const auto& sites = Reader::array(Reader::field(root, "", "sites"), "sites");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto p = Reader::index("sites", i);
    Reader::object(sites[i], p, {"id", "cells"});
    Site site;
    site.id = Reader::string(Reader::field(sites[i], p, "id"), Reader::join(p, "id"));
    const auto cpath = Reader::join(p, "cells");
    const auto& cells = Reader::array(Reader::field(sites[i], p, "cells"), cpath);
    for (std::size_t k = 0; k < cells.size(); ++k) site.cells.push_back(detail::read_cell(cells[k], Reader::index(cpath, k)));
    s.sites.push_back(std::move(site));
  }

  const auto& hotspots = Reader::array(Reader::field(root, "", "hotspots"), "hotspots");
  for (std::size_t i = 0; i < hotspots.size(); ++i) {
    const auto p = Reader::index("hotspots", i);
    Reader::object(hotspots[i], p, {"id", "wlan_cell", "overlay_cell"});
    Hotspot h;
    h.id = Reader::string(Reader::field(hotspots[i], p, "id"), Reader::join(p, "id"));
    h.wlan_cell = Reader::string(Reader::field(hotspots[i], p, "wlan_cell"), Reader::join(p, "wlan_cell"));
    h.overlay_cell = Reader::string(Reader::field(hotspots[i], p, "overlay_cell"), Reader::join(p, "overlay_cell"));
    s.hotspots.push_back(std::move(h));
  }

  {
    const auto& j = Reader::object(Reader::field(root, "", "population"), "population", {"num_users", "p_vehicular"});
    s.population.num_users = Reader::integer(Reader::field(j, "population", "num_users"), "population.num_users");
    s.population.p_vehicular = Reader::number(Reader::field(j, "population", "p_vehicular"), "population.p_vehicular");
  }
  {
    const std::string p = "mobility";
    const auto& j = Reader::object(Reader::field(root, "", p), p,
                                   {"p_exit", "p_enter", "vehicular_multiplier", "min_evidence", "history_capacity"});
    s.mobility.p_exit = Reader::number(Reader::field(j, p, "p_exit"), "mobility.p_exit");
    s.mobility.p_enter = Reader::number(Reader::field(j, p, "p_enter"), "mobility.p_enter");
    s.mobility.vehicular_multiplier =
        Reader::number(Reader::field(j, p, "vehicular_multiplier"), "mobility.vehicular_multiplier");
    if (const auto* v = Reader::optional_field(j, "min_evidence")) {
      s.mobility.min_evidence = Reader::integer(*v, "mobility.min_evidence");
    }
    if (const auto* v = Reader::optional_field(j, "history_capacity")) {
      s.mobility.history_capacity = Reader::integer(*v, "mobility.history_capacity");
    }
  }
  s.fuzzy = detail::read_fuzzy(Reader::field(root, "", "fuzzy"), "fuzzy");
  {
    const std::string p = "handover";
    const auto& j =
        Reader::object(Reader::field(root, "", p), p, {"score_margin", "min_dwell_epochs", "table2_semantics", "presets"});
    s.handover.hysteresis = detail::read_hysteresis(j, p);
    if (const auto* v = Reader::optional_field(j, "table2_semantics")) {
      s.handover.table2_semantics = Reader::boolean(*v, "handover.table2_semantics");
    }
    if (const auto* v = Reader::optional_field(j, "presets")) {
      if (!v->is_object()) Reader::fail("handover.presets", "expected an object");
      for (const auto& [name, preset] : v->items()) {
        const auto pp = "handover.presets." + name;
        Reader::object(preset, pp, {"score_margin", "min_dwell_epochs"});
        s.handover.presets[name] = detail::read_hysteresis(preset, pp);
      }
    }
  }
  {
    const std::string p = "workload";
    const auto& j = Reader::object(
        Reader::field(root, "", p), p,
        {"arrival_rate_per_user_per_epoch", "mean_session_epochs", "p_realtime", "priority_mix"});
    s.workload.arrival_rate_per_user_per_epoch = Reader::number(
        Reader::field(j, p, "arrival_rate_per_user_per_epoch"), "workload.arrival_rate_per_user_per_epoch");
    s.workload.mean_session_epochs =
        Reader::number(Reader::field(j, p, "mean_session_epochs"), "workload.mean_session_epochs");
    s.workload.p_realtime = Reader::number(Reader::field(j, p, "p_realtime"), "workload.p_realtime");
    const auto mix = detail::read_label_utilities(Reader::field(j, p, "priority_mix"), "workload.priority_mix");
    s.workload.priority_mix = {mix[0], mix[1], mix[2]};
  }
  {
    const std::string p = "signalling";
    const auto& j = Reader::object(Reader::field(root, "", p), p, {"cost_ho_attempt", "cost_ho_complete", "cost_admit"});
    s.signalling.cost_ho_attempt = Reader::number(Reader::field(j, p, "cost_ho_attempt"), "signalling.cost_ho_attempt");
    s.signalling.cost_ho_complete =
        Reader::number(Reader::field(j, p, "cost_ho_complete"), "signalling.cost_ho_complete");
    s.signalling.cost_admit = Reader::number(Reader::field(j, p, "cost_admit"), "signalling.cost_admit");
  }
  s.duration_epochs = Reader::integer(Reader::field(root, "", "duration_epochs"), "duration_epochs");
  s.seed = Reader::unsigned_integer(Reader::field(root, "", "seed"), "seed");
  return s;
}

namespace detail {

inline bool valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  for (char ch : id) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
                    ch == '-' || ch == '.';
    if (!ok) return false;
  }
  return true;
}

inline bool probability(double p) { return p >= 0.0 && p <= 1.0; }

class Checker {
 public:
  void schema(bool ok, std::string path, std::string msg) {
    if (!ok) out.push_back({ErrorKind::Schema, std::move(path), std::move(msg)});
  }
  void xref(bool ok, std::string path, std::string msg) {
    if (!ok) out.push_back({ErrorKind::CrossReference, std::move(path), std::move(msg)});
  }
  std::vector<Violation> out;
};

inline void check_numeric_criterion(Checker& chk, const fuzzy::NumericCriterion& c, fuzzy::Criterion which,
                                    const std::string& path) {
  const auto& labels = fuzzy::kLabels[static_cast<std::size_t>(which)];
  chk.schema(c.lo < c.hi, path + ".universe", "lo must be below hi");
  for (std::size_t i = 0; i < fuzzy::kLabelsPerCriterion; ++i) {
    const auto sp = path + ".sets[" + std::to_string(i) + "]";
    const auto& mf = c.sets[i];
    chk.schema(mf.label == labels[i], sp + ".label", "expected label '" + std::string(labels[i]) + "'");
    chk.schema(mf.valid(), sp + ".trapezoid", "breakpoints must satisfy a <= b <= c <= d");
    chk.schema(probability(c.utilities[i]), sp + ".utility", "utility must lie in [0, 1]");
  }
  // Adjacent trapezoids share their flanks, so degrees sum to 1 everywhere.
  const auto& s = c.sets;
  chk.schema(s[0].b <= c.lo && s[0].c >= c.lo, path + ".sets[0].trapezoid", "first set must cover the universe start");
  chk.schema(s[2].b <= c.hi && s[2].c >= c.hi, path + ".sets[2].trapezoid", "last set must cover the universe end");
  for (std::size_t i = 0; i + 1 < fuzzy::kLabelsPerCriterion; ++i) {
    const auto sp = path + ".sets[" + std::to_string(i + 1) + "].trapezoid";
    chk.schema(s[i].c == s[i + 1].a && s[i].d == s[i + 1].b && s[i].c < s[i].d, sp,
               "sets must form a partition of unity (shared, non-degenerate flanks)");
  }
}

inline void check_hysteresis(Checker& chk, const jrrm::HysteresisConfig& h, const std::string& path) {
  chk.schema(h.score_margin >= 0.0, path + ".score_margin", "must be non-negative");
  chk.schema(h.min_dwell_epochs >= 0, path + ".min_dwell_epochs", "must be non-negative");
}

}  // namespace detail

inline std::vector<Violation> validate_scenario(const Scenario& s) {
  detail::Checker chk;
  using detail::probability;
  chk.schema(s.duration_epochs >= 1, "duration_epochs", "must be at least 1");
  chk.schema(!s.sites.empty(), "sites", "at least one site is required");

  std::set<std::string> site_ids;
  std::set<std::string> cell_ids;
  for (std::size_t i = 0; i < s.sites.size(); ++i) {
    const auto& site = s.sites[i];
    const auto sp = "sites[" + std::to_string(i) + "]";
    chk.schema(detail::valid_identifier(site.id), sp + ".id", "identifier must match [A-Za-z0-9_.-]+");
    chk.schema(site_ids.insert(site.id).second, sp + ".id", "duplicate site id '" + site.id + "'");
    chk.schema(!site.cells.empty(), sp + ".cells", "a site needs at least one cell");
    for (std::size_t k = 0; k < site.cells.size(); ++k) {
      const auto& cell = site.cells[k];
      const auto cp = sp + ".cells[" + std::to_string(k) + "]";
      chk.schema(detail::valid_identifier(cell.id), cp + ".id", "identifier must match [A-Za-z0-9_.-]+");
      chk.schema(cell_ids.insert(cell.id).second, cp + ".id", "duplicate cell id '" + cell.id + "'");
      chk.schema(cell.capacity_sessions >= 0, cp + ".capacity_sessions", "must be non-negative");
      const auto& cr = cell.criteria;
      const std::array<double, 4> vals{cr.cost, cr.bandwidth, cr.rss, cr.delay};
      for (std::size_t n = 0; n < fuzzy::kNumericCriteria.size(); ++n) {
        const auto c = fuzzy::kNumericCriteria[n];
        const auto& u = s.fuzzy.numeric(c);
        const auto name = std::string(fuzzy::kCriterionNames[static_cast<std::size_t>(c)]);
        chk.schema(vals[n] >= u.lo && vals[n] <= u.hi, cp + ".criteria." + name, "outside the fuzzy universe");
      }
      chk.schema(cr.cost >= 0.0, cp + ".criteria.cost", "must be non-negative");
      chk.schema(cr.bandwidth >= 0.0, cp + ".criteria.bandwidth", "must be non-negative");
      chk.schema(cr.delay >= 0.0, cp + ".criteria.delay", "must be non-negative");
    }
  }

  std::set<std::string> hotspot_ids;
  for (std::size_t i = 0; i < s.hotspots.size(); ++i) {
    const auto& h = s.hotspots[i];
    const auto hp = "hotspots[" + std::to_string(i) + "]";
    chk.schema(detail::valid_identifier(h.id), hp + ".id", "identifier must match [A-Za-z0-9_.-]+");
    chk.schema(hotspot_ids.insert(h.id).second, hp + ".id", "duplicate hotspot id '" + h.id + "'");
    chk.schema(h.id != "outside", hp + ".id", "'outside' is reserved for the no-hotspot region");
    const Cell* wlan = s.find_cell(h.wlan_cell);
    const Cell* overlay = s.find_cell(h.overlay_cell);
    chk.xref(wlan != nullptr, hp + ".wlan_cell", "no cell '" + h.wlan_cell + "'");
    chk.xref(overlay != nullptr, hp + ".overlay_cell", "no cell '" + h.overlay_cell + "'");
    if (wlan) chk.xref(wlan->rat == RatKind::Wlan80211, hp + ".wlan_cell", "cell '" + h.wlan_cell + "' is not wlan80211");
    if (overlay) {
      chk.xref(is_cellular(overlay->rat), hp + ".overlay_cell", "cell '" + h.overlay_cell + "' is not lte or umts");
    }
  }
  chk.xref(!s.hotspots.empty(), "hotspots", "at least one hotspot is required to home users");

  chk.schema(s.population.num_users >= 1, "population.num_users", "must be positive");
  chk.schema(probability(s.population.p_vehicular), "population.p_vehicular", "must lie in [0, 1]");

  chk.schema(probability(s.mobility.p_exit), "mobility.p_exit", "must lie in [0, 1]");
  chk.schema(probability(s.mobility.p_enter), "mobility.p_enter", "must lie in [0, 1]");
  chk.schema(s.mobility.vehicular_multiplier >= 1.0, "mobility.vehicular_multiplier", "must be at least 1");
  chk.schema(s.mobility.min_evidence >= 0, "mobility.min_evidence", "must be non-negative");
  chk.schema(s.mobility.history_capacity >= 1, "mobility.history_capacity", "must be positive");

  for (auto c : fuzzy::kNumericCriteria) {
    detail::check_numeric_criterion(chk, s.fuzzy.numeric(c), c,
                                    "fuzzy.criteria." + std::string(fuzzy::kCriterionNames[static_cast<std::size_t>(c)]));
  }
  double wsum = 0.0;
  for (std::size_t i = 0; i < fuzzy::kNumCriteria; ++i) {
    chk.schema(s.fuzzy.weights[i] >= 0.0, "fuzzy.weights[" + std::to_string(i) + "]", "must be non-negative");
    wsum += s.fuzzy.weights[i];
  }
  chk.schema(wsum > 0.0, "fuzzy.weights", "at least one weight must be positive");
  for (std::size_t i = 0; i < 3; ++i) {
    const auto key = std::string(to_string(kAllPriorities[i]));
    chk.schema(probability(s.fuzzy.priority.best_effort[i]), "fuzzy.priority_utilities.best_effort." + key,
               "utility must lie in [0, 1]");
    chk.schema(probability(s.fuzzy.priority.qos_guaranteed[i]), "fuzzy.priority_utilities.qos_guaranteed." + key,
               "utility must lie in [0, 1]");
  }
  chk.schema(s.fuzzy.load_model.max_utilization >= 0.0 && s.fuzzy.load_model.max_utilization < 1.0,
             "fuzzy.load_model.max_utilization", "must lie in [0, 1)");

  detail::check_hysteresis(chk, s.handover.hysteresis, "handover");
  for (const auto& [name, preset] : s.handover.presets) {
    chk.schema(detail::valid_identifier(name), "handover.presets." + name, "preset name must be an identifier");
    detail::check_hysteresis(chk, preset, "handover.presets." + name);
  }

  const auto& w = s.workload;
  chk.schema(w.arrival_rate_per_user_per_epoch >= 0.0, "workload.arrival_rate_per_user_per_epoch",
             "must be non-negative");
  chk.schema(w.mean_session_epochs > 0.0, "workload.mean_session_epochs", "must be positive");
  chk.schema(probability(w.p_realtime), "workload.p_realtime", "must lie in [0, 1]");
  const auto& mix = w.priority_mix;
  const bool mix_nonneg = mix.insensitive >= 0.0 && mix.ordinary >= 0.0 && mix.high_qos >= 0.0;
  chk.schema(mix_nonneg && std::abs(mix.sum() - 1.0) <= 1e-9, "workload.priority_mix",
             "weights must be non-negative and sum to 1");

  chk.schema(s.signalling.cost_ho_attempt >= 0.0, "signalling.cost_ho_attempt", "must be non-negative");
  chk.schema(s.signalling.cost_ho_complete >= 0.0, "signalling.cost_ho_complete", "must be non-negative");
  chk.schema(s.signalling.cost_admit >= 0.0, "signalling.cost_admit", "must be non-negative");
  return chk.out;
}

// decode_scenario followed by validate_scenario; throws on any violation.
inline Scenario parse_scenario(std::string_view text) {
  auto s = decode_scenario(text);
  auto violations = validate_scenario(s);
  if (!violations.empty()) throw ScenarioError(std::move(violations));
  return s;
}

namespace detail {

inline json criterion_to_json(const fuzzy::NumericCriterion& c) {
  json sets = json::array();
  for (std::size_t i = 0; i < fuzzy::kLabelsPerCriterion; ++i) {
    const auto& mf = c.sets[i];
    sets.push_back({{"label", mf.label}, {"trapezoid", {mf.a, mf.b, mf.c, mf.d}}, {"utility", c.utilities[i]}});
  }
  return {{"universe", {c.lo, c.hi}}, {"sets", sets}};
}

inline json utilities_to_json(const std::array<double, 3>& u) {
  json out = json::object();
  for (auto p : kAllPriorities) out[std::string(to_string(p))] = u[static_cast<std::size_t>(p)];
  return out;
}

inline json hysteresis_to_json(const jrrm::HysteresisConfig& h) {
  return {{"score_margin", h.score_margin}, {"min_dwell_epochs", h.min_dwell_epochs}};
}

}  // namespace detail

inline json to_json(const Scenario& s) {
  json sites = json::array();
  for (const auto& site : s.sites) {
    json cells = json::array();
    for (const auto& c : site.cells) {
      cells.push_back({{"id", c.id},
                       {"rat", std::string(to_string(c.rat))},
                       {"capacity_sessions", c.capacity_sessions},
                       {"criteria",
                        {{"cost", c.criteria.cost},
                         {"bandwidth", c.criteria.bandwidth},
                         {"rss", c.criteria.rss},
                         {"delay", c.criteria.delay}}}});
    }
    sites.push_back({{"id", site.id}, {"cells", cells}});
  }
  json hotspots = json::array();
  for (const auto& h : s.hotspots) {
    hotspots.push_back({{"id", h.id}, {"wlan_cell", h.wlan_cell}, {"overlay_cell", h.overlay_cell}});
  }
  json criteria = json::object();
  for (auto c : fuzzy::kNumericCriteria) {
    criteria[std::string(fuzzy::kCriterionNames[static_cast<std::size_t>(c)])] =
        detail::criterion_to_json(s.fuzzy.numeric(c));
  }
  json order = json::array();
  for (auto n : fuzzy::kCriterionNames) order.push_back(std::string(n));
  json weights = json::array();
  for (double w : s.fuzzy.weights) weights.push_back(w);

  json handover = detail::hysteresis_to_json(s.handover.hysteresis);
  handover["table2_semantics"] = s.handover.table2_semantics;
  json presets = json::object();
  for (const auto& [name, p] : s.handover.presets) presets[name] = detail::hysteresis_to_json(p);
  handover["presets"] = presets;

  const auto& mix = s.workload.priority_mix;
  json out;
  out["name"] = s.name;
  out["sites"] = sites;
  out["hotspots"] = hotspots;
  out["population"] = {{"num_users", s.population.num_users}, {"p_vehicular", s.population.p_vehicular}};
  out["mobility"] = {{"p_exit", s.mobility.p_exit},
                     {"p_enter", s.mobility.p_enter},
                     {"vehicular_multiplier", s.mobility.vehicular_multiplier},
                     {"min_evidence", s.mobility.min_evidence},
                     {"history_capacity", s.mobility.history_capacity}};
  out["fuzzy"] = {{"weights_order", order},
                  {"weights", weights},
                  {"criteria", criteria},
                  {"priority_utilities",
                   {{"best_effort", detail::utilities_to_json(s.fuzzy.priority.best_effort)},
                    {"qos_guaranteed", detail::utilities_to_json(s.fuzzy.priority.qos_guaranteed)}}},
                  {"load_model",
                   {{"enabled", s.fuzzy.load_model.enabled}, {"max_utilization", s.fuzzy.load_model.max_utilization}}}};
  out["handover"] = handover;
  out["workload"] = {{"arrival_rate_per_user_per_epoch", s.workload.arrival_rate_per_user_per_epoch},
                     {"mean_session_epochs", s.workload.mean_session_epochs},
                     {"p_realtime", s.workload.p_realtime},
                     {"priority_mix", detail::utilities_to_json({mix.insensitive, mix.ordinary, mix.high_qos})}};
  out["signalling"] = {{"cost_ho_attempt", s.signalling.cost_ho_attempt},
                       {"cost_ho_complete", s.signalling.cost_ho_complete},
                       {"cost_admit", s.signalling.cost_admit}};
  out["duration_epochs"] = s.duration_epochs;
  out["seed"] = s.seed;
  return out;
}

inline std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

class UnknownPresetError : public std::invalid_argument {
 public:
  explicit UnknownPresetError(const std::string& name) : std::invalid_argument("unknown handover preset '" + name + "'") {}
};

inline Scenario apply_preset(Scenario s, const std::string& name) {
  auto it = s.handover.presets.find(name);
  if (it == s.handover.presets.end()) throw UnknownPresetError(name);
  s.handover.hysteresis = it->second;
  return s;
}

class UnknownParameterError : public std::invalid_argument {
 public:
  explicit UnknownParameterError(const std::string& path, const std::string& why = "no numeric scenario field")
      : std::invalid_argument("unknown parameter path '" + path + "': " + why), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

namespace detail {

inline json* resolve_parameter(json& doc, const std::string& path) {
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const auto seg = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (seg.empty()) throw UnknownParameterError(path);
    if (node->is_object()) {
      auto it = node->find(seg);
      if (it == node->end()) throw UnknownParameterError(path);
      node = &*it;
    } else if (node->is_array()) {
      std::size_t idx = 0;
      for (char ch : seg) {
        if (ch < '0' || ch > '9') throw UnknownParameterError(path);
        idx = idx * 10 + static_cast<std::size_t>(ch - '0');
      }
      if (idx >= node->size()) throw UnknownParameterError(path);
      node = &(*node)[idx];
    } else {
      throw UnknownParameterError(path);
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (!node->is_number()) throw UnknownParameterError(path);
  return node;
}

}  // namespace detail

// Current value of the numeric field addressed by a dotted path such as
// "handover.score_margin" or "sites.0.cells.1.capacity_sessions".
inline double get_parameter(const Scenario& s, const std::string& path) {
  json doc = to_json(s);
  return detail::resolve_parameter(doc, path)->get<double>();
}

// Copy of `s` with one numeric field overridden. Integer fields need an
// integral value.
inline Scenario set_parameter(const Scenario& s, const std::string& path, double value) {
  json doc = to_json(s);
  json* node = detail::resolve_parameter(doc, path);
  if (node->is_number_integer()) {
    if (value != std::floor(value)) throw UnknownParameterError(path, "integer field needs an integral value");
    if (node->is_number_unsigned()) {
      if (value < 0) throw UnknownParameterError(path, "field is unsigned");
      *node = static_cast<std::uint64_t>(value);
    } else {
      *node = static_cast<std::int64_t>(value);
    }
  } else {
    *node = value;
  }
  return decode_scenario(doc.dump());
}

}  // namespace hetnetsim
