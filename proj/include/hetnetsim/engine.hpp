#pragma once

// Discrete-event simulation of one scenario. Time advances in integer epochs;
// within an epoch events run in the order
//   SessionEnd < MobilityTick < SessionArrival < HandoverEvaluation,
// then by entity id, then by enqueue sequence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "hetnetsim/event_log.hpp"
#include "hetnetsim/fuzzy.hpp"
#include "hetnetsim/jrrm.hpp"
#include "hetnetsim/kpi.hpp"
#include "hetnetsim/mobility.hpp"
#include "hetnetsim/rng.hpp"
#include "hetnetsim/scenario.hpp"

namespace hetnetsim::sim {

enum class EventType : std::uint8_t { SessionEnd = 0, MobilityTick = 1, SessionArrival = 2, HandoverEvaluation = 3 };

struct ArrivalRequest {
  ServiceClass service = ServiceClass::NonRealTime;
  Priority priority = Priority::Ordinary;
  std::int64_t length = 1;
};

struct Event {
  std::int64_t epoch = 0;
  std::uint64_t sequence = 0;
  EventType kind = EventType::MobilityTick;
  std::int64_t entity = 0;  // user id or session id
  ArrivalRequest request;   // SessionArrival only

  friend bool operator>(const Event& a, const Event& b) {
    if (a.epoch != b.epoch) return a.epoch > b.epoch;
    if (a.kind != b.kind) return a.kind > b.kind;
    if (a.entity != b.entity) return a.entity > b.entity;
    return a.sequence > b.sequence;
  }
};

struct ActiveSession {
  std::int64_t session_id = 0;
  std::int64_t user_id = 0;
  ServiceClass service_class = ServiceClass::NonRealTime;
  Priority priority = Priority::Ordinary;
  std::size_t current_cell = 0;
  std::int64_t start_epoch = 0;
  std::int64_t end_epoch = 0;
  std::int64_t joined_cell_epoch = 0;

  std::int64_t dwell_epochs_on_current_cell(std::int64_t now) const { return now - joined_cell_epoch; }
};

// One hysteresis evaluation as seen by the closed-loop run.
struct TraceEntry {
  std::int64_t epoch = 0;
  std::int64_t session_id = 0;
  jrrm::ScoreSample sample;
  std::size_t source_site = 0;
  bool target_had_room = false;
};

// Signalling that hysteresis does not influence, counted per site so a replay
// can re-price it under a different cost model.
struct FixedSignalling {
  std::vector<std::int64_t> admission_requests;
  std::vector<std::int64_t> forced_attempts;
  std::vector<std::int64_t> forced_successes;
};

struct EpochSnapshot {
  std::int64_t epoch = 0;
  const jrrm::Occupancy& occupancy;
  const std::map<std::int64_t, ActiveSession>& sessions;
  const std::vector<mobility::UserState>& users;
};

struct RunOptions {
  bool record_log = true;
  bool record_trace = false;
  std::function<void(const EpochSnapshot&)> on_epoch_end;
};

struct RunResult {
  KpiReport report;
  EventLog log;
  std::vector<TraceEntry> trace;
  FixedSignalling fixed;
  std::vector<std::string> site_ids;
};

// Geometric session length on {1, 2, ...} with the given mean.
inline std::int64_t session_length(double mean_epochs, double u, std::int64_t cap) {
  const double p = mean_epochs <= 1.0 ? 1.0 : 1.0 / mean_epochs;
  if (p >= 1.0) return 1;
  const double k = std::floor(std::log1p(-u) / std::log1p(-p));
  if (!(k < static_cast<double>(cap))) return cap;
  return 1 + static_cast<std::int64_t>(k);
}

inline Priority draw_priority(const PriorityMix& mix, double u) {
  if (u < mix.insensitive) return Priority::Insensitive;
  if (u < mix.insensitive + mix.ordinary) return Priority::Ordinary;
  return Priority::HighQoS;
}

namespace detail {

class Engine {
 public:
  Engine(const Scenario& s, const RunOptions& opts) : s_(s), opts_(opts), occ_(s.sites) {
    for (const auto& site : s.sites) result_.site_ids.push_back(site.id);
    const auto nsites = s.sites.size();
    site_cost_.assign(nsites, 0.0);
    result_.fixed.admission_requests.assign(nsites, 0);
    result_.fixed.forced_attempts.assign(nsites, 0);
    result_.fixed.forced_successes.assign(nsites, 0);
    for (const auto& site : s.sites) {
      for (const auto& cell : site.cells) criteria_.push_back(cell.criteria);
    }
    for (const auto& h : s.hotspots) {
      wlan_.push_back(occ_.index_of(h.wlan_cell));
      overlay_.push_back(occ_.index_of(h.overlay_cell));
    }
    horizon_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(s.workload.mean_session_epochs)));
    semantics_ = s.handover.table2_semantics ? jrrm::PredictionSemantics::Table : jrrm::PredictionSemantics::Prose;
  }

  // Phases realize the event order without queueing the per-user events:
  // session ends come off the heap, mobility ticks run in user order, the
  // arrivals they raise are already in user order, and handover evaluations
  // run in session order over sessions that started before this epoch.
  RunResult run() {
    init_users();
    std::vector<Event> arrivals;
    for (std::int64_t e = 0; e < s_.duration_epochs; ++e) {
      while (!ends_.empty() && ends_.top().epoch == e) {
        const Event ev = ends_.top();
        ends_.pop();
        on_session_end(ev);
      }
      arrivals.clear();
      for (std::size_t u = 0; u < users_.size(); ++u) {
        on_mobility_tick({e, 0, EventType::MobilityTick, static_cast<std::int64_t>(u), {}}, arrivals);
      }
      for (const auto& ev : arrivals) on_arrival(ev);
      for (auto it = sessions_.begin(); it != sessions_.end(); ++it) {
        if (it->second.start_epoch < e) on_handover_evaluation(e, it->second);
      }
      end_of_epoch(e);
    }
    finish();
    return std::move(result_);
  }

 private:
  void schedule_end(std::int64_t epoch, std::int64_t session_id) {
    ends_.push({epoch, next_seq_++, EventType::SessionEnd, session_id, {}});
  }

  void log(LogRow row) {
    if (!opts_.record_log) return;
    row.sequence = result_.log.rows.size();
    result_.log.rows.push_back(std::move(row));
  }

  std::string region_name(const mobility::Region& r) const {
    return r.inside() ? s_.hotspots[static_cast<std::size_t>(r.hotspot)].id : std::string(kOutsideRegion);
  }

  void charge(std::size_t cell, double cost) { site_cost_[occ_.site(cell)] += cost; }

  void init_users() {
    const auto n = s_.population.num_users;
    const auto nh = static_cast<std::int64_t>(s_.hotspots.size());
    log({0, 0, LogKind::Run, {}, {}, "", "",
         "seed=" + std::to_string(s_.seed) + ";epochs=" + std::to_string(s_.duration_epochs), 0.0});
    for (std::size_t c = 0; c < occ_.size(); ++c) {
      log({0, 0, LogKind::Cell, {}, {}, occ_.id(c), s_.sites[occ_.site(c)].id, std::string(to_string(occ_.rat(c))),
           0.0});
    }
    users_.reserve(static_cast<std::size_t>(n));
    for (std::int64_t u = 0; u < n; ++u) {
      rng::Stream init(s_.seed, rng::Domain::Population, static_cast<std::uint64_t>(u));
      mobility::UserState st;
      st.user_id = u;
      st.mobility_class =
          init.uniform() < s_.population.p_vehicular ? MobilityClass::Vehicular : MobilityClass::NonVehicular;
      st.home_hotspot = static_cast<std::int32_t>(u % nh);
      st.history = mobility::TransitionRing(static_cast<std::size_t>(s_.mobility.history_capacity));
      const auto eff = mobility::effective_probs(s_.mobility, st.mobility_class);
      const double total = eff.p_exit + eff.p_enter;
      const double p_inside = total > 0.0 ? eff.p_enter / total : 0.0;
      if (init.uniform() < p_inside) st.region = mobility::Region::in(st.home_hotspot);
      log({0, 0, LogKind::User, u, {}, "", region_name(st.region),
           st.mobility_class == MobilityClass::Vehicular ? "vehicular" : "nonvehicular", 0.0});
      users_.push_back(std::move(st));
      mobility_rng_.emplace_back(s_.seed, rng::Domain::Mobility, static_cast<std::uint64_t>(u));
      workload_rng_.emplace_back(s_.seed, rng::Domain::Workload, static_cast<std::uint64_t>(u));
    }
  }

  void remove_session(std::map<std::int64_t, ActiveSession>::iterator it) {
    occ_.leave(it->second.current_cell);
    users_[static_cast<std::size_t>(it->second.user_id)].session.reset();
    sessions_.erase(it);
  }

  void on_session_end(const Event& ev) {
    auto it = sessions_.find(ev.entity);
    if (it == sessions_.end() || it->second.end_epoch != ev.epoch) return;  // dropped earlier
    log({ev.epoch, 0, LogKind::End, it->second.user_id, it->first, occ_.id(it->second.current_cell), "", "", 0.0});
    remove_session(it);
  }

  void on_mobility_tick(const Event& ev, std::vector<Event>& arrivals) {
    const auto uidx = static_cast<std::size_t>(ev.entity);
    auto& user = users_[uidx];
    const auto before = user.region;
    user = mobility::step_user(std::move(user), s_.mobility, mobility_rng_[uidx].uniform());
    if (!(user.region == before)) {
      log({ev.epoch, 0, LogKind::Mobility, user.user_id, {}, region_name(before), region_name(user.region), "", 0.0});
      if (!user.region.inside() && user.session) forced_handover(ev.epoch, user, before);
    }

    // Always consume four draws so arrival streams stay aligned across runs.
    auto& w = workload_rng_[uidx];
    const double a = w.uniform();
    ArrivalRequest req;
    req.service = w.uniform() < s_.workload.p_realtime ? ServiceClass::RealTime : ServiceClass::NonRealTime;
    req.priority = draw_priority(s_.workload.priority_mix, w.uniform());
    const double length_draw = w.uniform();
    if (a < s_.workload.arrival_rate_per_user_per_epoch && !user.session) {
      req.length = session_length(s_.workload.mean_session_epochs, length_draw, s_.duration_epochs);
      arrivals.push_back({ev.epoch, next_seq_++, EventType::SessionArrival, user.user_id, req});
    }
  }

  void forced_handover(std::int64_t epoch, mobility::UserState& user, const mobility::Region& left) {
    auto it = sessions_.find(*user.session);
    auto& sess = it->second;
    const auto h = static_cast<std::size_t>(left.hotspot);
    if (sess.current_cell != wlan_[h]) return;
    const auto from = sess.current_cell;
    const auto to = overlay_[h];
    const auto outcome = jrrm::execute_handover({occ_.id(to), 0.0}, occ_.id(from), occ_, s_.signalling);
    const auto site = occ_.site(from);
    ++ho_attempts_;
    ++result_.fixed.forced_attempts[site];
    charge(from, outcome.cost);
    log({epoch, 0, LogKind::ForcedHandover, sess.user_id, sess.session_id, occ_.id(from), occ_.id(to),
         outcome.success ? "success" : "failure", outcome.cost});
    if (outcome.success) {
      ++ho_successes_;
      ++result_.fixed.forced_successes[site];
      sess.current_cell = to;
      sess.joined_cell_epoch = epoch;
    } else {
      log({epoch, 0, LogKind::Drop, sess.user_id, sess.session_id, occ_.id(from), "", "", 0.0});
      remove_session(it);
    }
  }

  void on_arrival(const Event& ev) {
    auto& user = users_[static_cast<std::size_t>(ev.entity)];
    if (user.session) return;
    const auto& req = ev.request;
    jrrm::UserContext ctx;
    ctx.inside_hotspot = user.region.inside();
    ctx.mobility_class = user.mobility_class;
    ctx.service_class = req.service;
    ctx.priority = req.priority;
    if (ctx.inside_hotspot) ctx.prediction = mobility::predict_location(user, horizon_, s_.mobility);
    const auto decision = jrrm::select_rat(ctx, semantics_);
    const auto& hotspot = s_.hotspots[static_cast<std::size_t>(user.home_hotspot)];
    const auto result = jrrm::admit(decision, hotspot, occ_);

    ++arrivals_;
    const auto requested = occ_.index_of(result.requested_cell);
    ++result_.fixed.admission_requests[occ_.site(requested)];
    charge(requested, s_.signalling.cost_admit);
    if (result.kind == jrrm::AdmissionKind::Blocked) {
      ++blocked_;
      log({ev.epoch, 0, LogKind::Arrival, user.user_id, {}, result.requested_cell, "", "blocked",
           s_.signalling.cost_admit});
      return;
    }
    ActiveSession sess;
    sess.session_id = next_session_++;
    sess.user_id = user.user_id;
    sess.service_class = req.service;
    sess.priority = req.priority;
    sess.current_cell = occ_.index_of(*result.cell);
    sess.start_epoch = ev.epoch;
    sess.end_epoch = ev.epoch + req.length;
    sess.joined_cell_epoch = ev.epoch;
    log({ev.epoch, 0, LogKind::Arrival, user.user_id, sess.session_id, result.requested_cell, *result.cell,
         std::string(jrrm::to_string(result.kind)), s_.signalling.cost_admit});
    user.session = sess.session_id;
    if (sess.end_epoch < s_.duration_epochs) schedule_end(sess.end_epoch, sess.session_id);
    sessions_.emplace(sess.session_id, sess);
  }

  double score(std::size_t cell, Priority p, std::int64_t extra) const {
    const auto crit = fuzzy::under_load(criteria_[cell], occ_.utilization(cell, extra), s_.fuzzy.load_model);
    return fuzzy::score_network(crit.with_priority(p), s_.fuzzy, occ_.rat(cell));
  }

  void on_handover_evaluation(std::int64_t epoch, ActiveSession& sess) {
    const auto& user = users_[static_cast<std::size_t>(sess.user_id)];
    const auto h = static_cast<std::size_t>(user.home_hotspot);

    std::vector<fuzzy::Candidate> candidates;
    auto consider = [&](std::size_t cell) {
      if (cell == sess.current_cell) return;
      auto crit = fuzzy::under_load(criteria_[cell], occ_.utilization(cell, 1), s_.fuzzy.load_model);
      candidates.push_back({occ_.id(cell), crit.with_priority(sess.priority), occ_.rat(cell)});
    };
    if (user.region.inside()) consider(wlan_[h]);
    consider(overlay_[h]);
    if (candidates.empty()) return;

    const auto ranked = fuzzy::rank_networks(candidates, s_.fuzzy);
    const auto& best = ranked.front();
    const double current = score(sess.current_cell, sess.priority, 0);
    const auto dwell = sess.dwell_epochs_on_current_cell(epoch);
    const auto target = occ_.index_of(best.cell_id);
    if (opts_.record_trace) {
      result_.trace.push_back(
          {epoch, sess.session_id, {current, best.score, dwell}, occ_.site(sess.current_cell), occ_.has_room(target)});
    }
    const auto action = jrrm::evaluate_handover(current, {best.cell_id, best.score}, s_.handover.hysteresis, dwell);
    if (!action) return;

    const auto from = sess.current_cell;
    const auto outcome = jrrm::execute_handover(*action, occ_.id(from), occ_, s_.signalling);
    ++ho_attempts_;
    charge(from, outcome.cost);
    log({epoch, 0, LogKind::Handover, sess.user_id, sess.session_id, occ_.id(from), action->target_cell,
         outcome.success ? "success" : "failure", outcome.cost});
    if (outcome.success) {
      ++ho_successes_;
      sess.current_cell = target;
      sess.joined_cell_epoch = epoch;
    }
  }

  void end_of_epoch(std::int64_t e) {
    for (const auto& u : users_) {
      if (u.region.inside()) ++inside_sum_;
    }
    for (std::size_t c = 0; c < occ_.size(); ++c) result_.report.per_rat_load[occ_.rat(c)] += occ_.count(c);
    if (opts_.on_epoch_end) opts_.on_epoch_end(EpochSnapshot{e, occ_, sessions_, users_});
  }

  void finish() {
    auto& r = result_.report;
    r.seed = s_.seed;
    r.ho_attempts = ho_attempts_;
    r.ho_successes = ho_successes_;
    r.hosr = success_rate(ho_successes_, ho_attempts_);
    r.new_call_blocking = ratio_or_zero(blocked_, arrivals_);
    r.hotspot_occupancy_mean = ratio_or_zero(inside_sum_, s_.duration_epochs * s_.population.num_users);
    for (std::size_t i = 0; i < s_.sites.size(); ++i) r.signalling_load_per_site[s_.sites[i].id] = site_cost_[i];
  }

  const Scenario& s_;
  const RunOptions& opts_;
  jrrm::Occupancy occ_;
  std::vector<CellCriteria> criteria_;
  std::vector<std::size_t> wlan_;
  std::vector<std::size_t> overlay_;
  std::int64_t horizon_ = 1;
  jrrm::PredictionSemantics semantics_ = jrrm::PredictionSemantics::Table;

  std::vector<mobility::UserState> users_;
  std::vector<rng::Stream> mobility_rng_;
  std::vector<rng::Stream> workload_rng_;
  std::map<std::int64_t, ActiveSession> sessions_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> ends_;
  std::uint64_t next_seq_ = 0;
  std::int64_t next_session_ = 0;

  std::vector<double> site_cost_;
  std::int64_t ho_attempts_ = 0;
  std::int64_t ho_successes_ = 0;
  std::int64_t arrivals_ = 0;
  std::int64_t blocked_ = 0;
  std::int64_t inside_sum_ = 0;
  RunResult result_;
};

}  // namespace detail

// Runs the scenario closed-loop. Throws ScenarioError when it does not validate.
inline RunResult run(const Scenario& scenario, const RunOptions& options = {}) {
  auto violations = validate_scenario(scenario);
  if (!violations.empty()) throw ScenarioError(std::move(violations));
  return detail::Engine(scenario, options).run();
}

// Recomputes KPIs from a log and checks its declared topology against the scenario.
inline KpiReport collect_kpis(const EventLog& log, const Scenario& scenario) {
  std::size_t declared = 0;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const auto& row = log.rows[i];
    if (row.kind != LogKind::Cell) continue;
    ++declared;
    const Cell* cell = scenario.find_cell(row.from_cell);
    if (!cell || to_string(cell->rat) != row.outcome) {
      throw MalformedLogError(i + 2, "cell '" + row.from_cell + "' does not match the scenario");
    }
  }
  if (!log.rows.empty() && declared != scenario.num_cells()) {
    throw MalformedLogError(1, "log declares " + std::to_string(declared) + " cells, scenario has " +
                                   std::to_string(scenario.num_cells()));
  }
  return collect_kpis(log);
}

// Open-loop re-evaluation of a recorded closed-loop run under the variant's
// hysteresis and signalling costs. Everything hysteresis cannot influence is
// taken from the recording.
inline KpiReport replay(const RunResult& recorded, const Scenario& variant) {
  KpiReport r = recorded.report;
  const auto& sig = variant.signalling;
  const auto& fixed = recorded.fixed;
  const auto nsites = recorded.site_ids.size();
  std::vector<double> cost(nsites, 0.0);
  std::int64_t attempts = 0;
  std::int64_t successes = 0;
  for (std::size_t i = 0; i < nsites; ++i) {
    cost[i] = static_cast<double>(fixed.admission_requests[i]) * sig.cost_admit +
              static_cast<double>(fixed.forced_attempts[i]) * sig.cost_ho_attempt +
              static_cast<double>(fixed.forced_successes[i]) * sig.cost_ho_complete;
    attempts += fixed.forced_attempts[i];
    successes += fixed.forced_successes[i];
  }
  for (const auto& t : recorded.trace) {
    if (!jrrm::hysteresis_passes(t.sample.candidate_score - t.sample.current_score, t.sample.dwell_epochs,
                                 variant.handover.hysteresis)) {
      continue;
    }
    ++attempts;
    cost[t.source_site] += sig.cost_ho_attempt;
    if (t.target_had_room) {
      ++successes;
      cost[t.source_site] += sig.cost_ho_complete;
    }
  }
  r.ho_attempts = attempts;
  r.ho_successes = successes;
  r.hosr = success_rate(successes, attempts);
  r.signalling_load_per_site.clear();
  for (std::size_t i = 0; i < nsites; ++i) r.signalling_load_per_site[recorded.site_ids[i]] = cost[i];
  return r;
}

}  // namespace hetnetsim::sim
