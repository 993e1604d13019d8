#pragma once

// Run event log and its CSV form. The log is self-describing: a `run` row
// carries seed and duration, `cell` rows declare topology and `user` rows the
// initial regions, so KPIs can be recomputed from the file alone.
//
// Column use by kind:
//   run              outcome = "seed=<n>;epochs=<n>"
//   cell             from_cell = cell, to_cell = site, outcome = rat
//   user             user_id, to_cell = initial region, outcome = mobility class
//   mobility         user_id, from_cell/to_cell = regions (hotspot id or "outside")
//   arrival          user_id, session_id (when admitted), from_cell = requested cell,
//                    to_cell = serving cell (empty when blocked), outcome = admitted|fallback|blocked
//   handover         session move after hysteresis, outcome = success|failure
//   forced_handover  move caused by leaving WLAN coverage, outcome = success|failure
//   drop             session lost after a failed forced handover
//   end              session completed

#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace hetnetsim::sim {

inline constexpr std::string_view kOutsideRegion = "outside";
inline constexpr std::string_view kLogHeader =
    "epoch,sequence,kind,user_id,session_id,from_cell,to_cell,outcome,signalling_cost";

enum class LogKind { Run, Cell, User, Mobility, Arrival, Handover, ForcedHandover, Drop, End };

inline constexpr std::string_view to_string(LogKind k) {
  switch (k) {
    case LogKind::Run: return "run";
    case LogKind::Cell: return "cell";
    case LogKind::User: return "user";
    case LogKind::Mobility: return "mobility";
    case LogKind::Arrival: return "arrival";
    case LogKind::Handover: return "handover";
    case LogKind::ForcedHandover: return "forced_handover";
    case LogKind::Drop: return "drop";
    case LogKind::End: return "end";
  }
  return "?";
}

inline std::optional<LogKind> log_kind_from_string(std::string_view s) {
  for (auto k : {LogKind::Run, LogKind::Cell, LogKind::User, LogKind::Mobility, LogKind::Arrival, LogKind::Handover,
                 LogKind::ForcedHandover, LogKind::Drop, LogKind::End}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

struct LogRow {
  std::int64_t epoch = 0;
  std::uint64_t sequence = 0;
  LogKind kind = LogKind::Run;
  std::optional<std::int64_t> user_id;
  std::optional<std::int64_t> session_id;
  std::string from_cell;
  std::string to_cell;
  std::string outcome;
  double signalling_cost = 0.0;

  bool operator==(const LogRow&) const = default;
};

struct EventLog {
  std::vector<LogRow> rows;

  bool operator==(const EventLog&) const = default;
};

class MalformedLogError : public std::runtime_error {
 public:
  MalformedLogError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const EventLog& log) {
  os << kLogHeader << '\n';
  for (const auto& r : log.rows) {
    os << r.epoch << ',' << r.sequence << ',' << to_string(r.kind) << ',';
    if (r.user_id) os << *r.user_id;
    os << ',';
    if (r.session_id) os << *r.session_id;
    os << ',' << r.from_cell << ',' << r.to_cell << ',' << r.outcome << ',' << format_double(r.signalling_cost)
       << '\n';
  }
}

inline std::string to_csv(const EventLog& log) {
  std::ostringstream os;
  write_csv(os, log);
  return os.str();
}

namespace detail {

template <typename T>
T parse_number(std::string_view field, std::size_t line, std::string_view column) {
  T value{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw MalformedLogError(line, "bad " + std::string(column) + " '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace detail

inline EventLog parse_event_log(std::string_view text) {
  EventLog log;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kLogHeader) throw MalformedLogError(line_no, "missing or unexpected header");
      header_seen = true;
      continue;
    }
    if (line.empty()) {
      if (pos >= text.size()) break;
      throw MalformedLogError(line_no, "empty row");
    }
    std::vector<std::string_view> f;
    std::size_t s = 0;
    while (true) {
      auto c = line.find(',', s);
      f.push_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (f.size() != 9) {
      throw MalformedLogError(line_no, "expected 9 fields, found " + std::to_string(f.size()));
    }
    LogRow r;
    r.epoch = detail::parse_number<std::int64_t>(f[0], line_no, "epoch");
    r.sequence = detail::parse_number<std::uint64_t>(f[1], line_no, "sequence");
    auto kind = log_kind_from_string(f[2]);
    if (!kind) throw MalformedLogError(line_no, "unknown kind '" + std::string(f[2]) + "'");
    r.kind = *kind;
    if (!f[3].empty()) r.user_id = detail::parse_number<std::int64_t>(f[3], line_no, "user_id");
    if (!f[4].empty()) r.session_id = detail::parse_number<std::int64_t>(f[4], line_no, "session_id");
    r.from_cell = std::string(f[5]);
    r.to_cell = std::string(f[6]);
    r.outcome = std::string(f[7]);
    r.signalling_cost = detail::parse_number<double>(f[8], line_no, "signalling_cost");
    log.rows.push_back(std::move(r));
  }
  if (!header_seen) throw MalformedLogError(1, "missing header");
  return log;
}

}  // namespace hetnetsim::sim
