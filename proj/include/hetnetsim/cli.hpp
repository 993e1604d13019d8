#pragma once

// Command implementations behind the hetnetsim executable. Each command writes
// human output to `out`, diagnostics to `err`, and returns the exit status:
// 0 success, 1 domain or validation failure, 2 I/O or usage error.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "hetnetsim/engine.hpp"
#include "hetnetsim/kpi.hpp"
#include "hetnetsim/scenario.hpp"
#include "hetnetsim/sweep.hpp"

namespace hetnetsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to a sibling temp file, then renames over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into '" + path.string() + "'");
  }
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

inline void print_summary(std::ostream& out, const sim::KpiReport& r) {
  auto row = [&](const std::string& k, const std::string& v) {
    out << k;
    for (auto n = k.size(); n < 28; ++n) out << ' ';
    out << v << '\n';
  };
  row("ho_attempts", std::to_string(r.ho_attempts));
  row("ho_successes", std::to_string(r.ho_successes));
  row("hosr", r.hosr ? fixed(*r.hosr) : "n/a");
  row("signalling_total", fixed(r.signalling_total(), 3));
  for (const auto& [site, v] : r.signalling_load_per_site) row("signalling[" + site + "]", fixed(v, 3));
  row("new_call_blocking", fixed(r.new_call_blocking));
  row("hotspot_occupancy_mean", fixed(r.hotspot_occupancy_mean));
  for (const auto& [rat, v] : r.per_rat_load) row("load[" + std::string(to_string(rat)) + "]", std::to_string(v));
  row("seed", std::to_string(r.seed));
}

inline Scenario load_scenario(const std::string& path, const std::optional<std::string>& preset) {
  auto s = parse_scenario(read_file(path));
  if (preset) s = apply_preset(std::move(s), *preset);
  return s;
}

inline int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  try {
    const auto violations = validate_scenario(decode_scenario(text));
    if (violations.empty()) {
      out << path << ": ok\n";
      return kExitOk;
    }
    for (const auto& v : violations) out << format_violation(v) << '\n';
    return kExitDomain;
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

struct RunArgs {
  std::string path;
  std::optional<std::uint64_t> seed;
  std::string outdir = "out";
  std::optional<std::string> preset;
};

inline int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  Scenario s;
  try {
    s = load_scenario(args.path, args.preset);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  if (args.seed) s.seed = *args.seed;
  const auto result = sim::run(s);
  try {
    ensure_dir(args.outdir);
    const std::filesystem::path dir(args.outdir);
    write_atomic(dir / "kpi.json", sim::serialize_kpi(result.report));
    write_atomic(dir / "events.csv", sim::to_csv(result.log));
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  print_summary(out, result.report);
  return kExitOk;
}

inline std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double v = 0.0;
    auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw UsageError("bad sweep value '" + item + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct SweepArgs {
  std::string path;
  std::string axis;
  std::string values;
  std::string outdir = "sweep";
  std::optional<std::string> preset;
  sim::SweepMode mode = sim::SweepMode::ClosedLoop;
};

inline std::string sweep_csv(const std::vector<sim::SweepPoint>& points) {
  std::string csv = "value,ho_attempts,hosr,signalling_total,blocking\n";
  for (const auto& p : points) {
    csv += sim::format_double(p.value) + "," + std::to_string(p.report.ho_attempts) + "," +
           (p.report.hosr ? sim::format_double(*p.report.hosr) : std::string()) + "," +
           sim::format_double(p.report.signalling_total()) + "," + sim::format_double(p.report.new_call_blocking) +
           "\n";
  }
  return csv;
}

inline int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  Scenario s;
  std::vector<double> values;
  try {
    values = parse_values(args.values);
    s = load_scenario(args.path, args.preset);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  std::vector<sim::SweepPoint> points;
  try {
    sim::SweepOptions opts;
    opts.mode = args.mode;
    opts.keep_logs = args.mode == sim::SweepMode::ClosedLoop;
    points = sim::sweep(s, args.axis, values, opts);
  } catch (const UnknownParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  const std::filesystem::path dir(args.outdir);
  const bool existed = std::filesystem::exists(dir);
  std::vector<std::filesystem::path> written;
  try {
    ensure_dir(dir);
    for (std::size_t i = 0; i < points.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "point_%03zu", i);
      const auto sub = dir / name;
      ensure_dir(sub);
      written.push_back(sub);
      write_atomic(sub / "kpi.json", sim::serialize_kpi(points[i].report));
      if (args.mode == sim::SweepMode::ClosedLoop) write_atomic(sub / "events.csv", sim::to_csv(points[i].log));
    }
    written.push_back(dir / "sweep.csv");
    write_atomic(dir / "sweep.csv", sweep_csv(points));
  } catch (const IoError& e) {
    std::error_code ec;
    if (!existed) {
      std::filesystem::remove_all(dir, ec);
    } else {
      for (const auto& p : written) std::filesystem::remove_all(p, ec);
    }
    err << "error: " << e.what() << " (sweep output removed)\n";
    return kExitIo;
  }
  out << sweep_csv(points);
  return kExitOk;
}

inline int cmd_report(const std::string& log_path, bool as_json, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = read_file(log_path);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  try {
    const auto report = sim::collect_kpis(sim::parse_event_log(text));
    if (as_json) {
      out << sim::serialize_kpi(report);
    } else {
      print_summary(out, report);
    }
    return kExitOk;
  } catch (const sim::MalformedLogError& e) {
    err << "error: " << log_path << ": " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace hetnetsim::cli
