#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hetnetsim/rng.hpp"
#include "hetnetsim/scenario.hpp"

namespace testsupport {

using namespace hetnetsim;

inline std::filesystem::path source_dir() { return HETNETSIM_SOURCE_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Scenario default_scenario() { return parse_scenario(slurp(source_dir() / "scenarios" / "cluster5x15.json")); }

inline CellCriteria wlan_criteria() { return {0.001, 11.0, 38.0, 1.25}; }
inline CellCriteria umts_criteria() { return {0.220, 0.5, -100.0, 18.54}; }

// One site, one LTE overlay and one WLAN cell forming a single hotspot.
inline Scenario tiny_scenario(std::int64_t wlan_capacity = 4, std::int64_t lte_capacity = 4) {
  Scenario s;
  s.name = "tiny";
  s.sites = {{"S1",
              {{"L1", RatKind::Lte, lte_capacity, umts_criteria()},
               {"W1", RatKind::Wlan80211, wlan_capacity, wlan_criteria()}}}};
  s.hotspots = {{"H1", "W1", "L1"}};
  s.population = {20, 0.2};
  s.mobility = {0.1, 0.1, 4.0, 5, 64};
  s.fuzzy = fuzzy::default_fuzzy_config();
  s.handover.hysteresis = {0.05, 0};
  s.handover.presets = {{"baseline", {0.05, 0}}, {"hardened", {0.15, 5}}};
  s.workload = {0.05, 10.0, 0.5, {0.3, 0.4, 0.3}};
  s.signalling = {2.0, 1.0, 1.0};
  s.duration_epochs = 200;
  s.seed = 7;
  return s;
}

struct RandomScenarioLimits {
  std::int64_t max_cells = 50;
  std::int64_t max_users = 500;
  std::int64_t epochs = 1000;
  double max_transition = 0.5;
};

// Valid random scenario: every site has one cellular cell and up to four WLAN
// cells, each WLAN cell forming a hotspot with its site's overlay.
inline Scenario random_scenario(std::uint64_t seed, const RandomScenarioLimits& lim = {}) {
  rng::Stream r(seed, rng::Domain::Test, 0);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * r.uniform(); };
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(r.bits() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  auto criteria = [&] { return CellCriteria{uni(0.0, 0.3), uni(0.0, 20.0), uni(-120.0, 40.0), uni(0.0, 30.0)}; };

  Scenario s;
  s.name = "random-" + std::to_string(seed);
  s.fuzzy = fuzzy::default_fuzzy_config();
  const auto max_sites = std::max<std::int64_t>(1, lim.max_cells / 5);
  const auto nsites = pick(1, max_sites);
  for (std::int64_t i = 0; i < nsites; ++i) {
    Site site;
    site.id = "S" + std::to_string(i);
    const auto overlay = site.id + "-C";
    site.cells.push_back({overlay, r.uniform() < 0.5 ? RatKind::Lte : RatKind::Umts, pick(0, 25), criteria()});
    const auto nwlan = pick(i == 0 ? 1 : 0, 4);
    for (std::int64_t k = 0; k < nwlan; ++k) {
      const auto id = site.id + "-W" + std::to_string(k);
      site.cells.push_back({id, RatKind::Wlan80211, pick(0, 10), criteria()});
      s.hotspots.push_back({"H" + std::to_string(i) + "_" + std::to_string(k), id, overlay});
    }
    s.sites.push_back(std::move(site));
  }
  s.population = {pick(1, lim.max_users), uni(0.0, 1.0)};
  s.mobility = {uni(0.0, lim.max_transition), uni(0.0, lim.max_transition), uni(1.0, 6.0), pick(0, 10), pick(1, 64)};
  s.handover.hysteresis = {uni(0.0, 0.3), pick(0, 6)};
  s.handover.table2_semantics = r.uniform() < 0.8;
  s.fuzzy.load_model = {r.uniform() < 0.7, uni(0.5, 0.95)};
  double a = uni(0.0, 1.0);
  double b = uni(0.0, 1.0);
  double c = uni(0.0, 1.0);
  const double t = a + b + c;
  a /= t;
  b /= t;
  s.workload = {uni(0.0, 0.1), uni(1.0, 40.0), uni(0.0, 1.0), {a, b, 1.0 - a - b}};
  s.signalling = {uni(0.0, 5.0), uni(0.0, 5.0), uni(0.0, 2.0)};
  s.duration_epochs = lim.epochs;
  s.seed = r.bits();
  return s;
}

}  // namespace testsupport
