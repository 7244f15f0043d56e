// SPDX-License-Identifier: Apache-2.0
#include "engage/cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "engage/error.hpp"
#include "engage/ingest/event_store.hpp"
#include "engage/ingest/http_server.hpp"
#include "engage/ingest/service.hpp"
#include "engage/miner/comparison.hpp"
#include "engage/miner/correlation.hpp"
#include "engage/miner/features.hpp"
#include "engage/sim/simulate.hpp"
#include "engage/sim/wire.hpp"

#ifndef ENGAGE_PROFILE_DIR
#define ENGAGE_PROFILE_DIR ""
#endif

namespace engage::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitErrors = 1;
constexpr int kExitUsage = 2;

std::atomic<bool> g_shutdown{false};

extern "C" void on_signal(int) { g_shutdown.store(true); }

// Crawler markers used when no --denylist file is given.
const std::vector<std::string> kDefaultDenylist = {
    "bot", "crawler", "spider", "slurp", "headlesschrome", "curl/", "wget/",
    "python-requests"};

// Writes to --out when set, else to `fallback`.
class Output {
 public:
  Output(const fs::path& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error(Errc::kStorageFailure, path.string(), "cannot open for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

sim::Population resolve_population(const std::string& profile) {
  if (fs::is_regular_file(profile)) return sim::load_population(profile);
  const fs::path shipped = fs::path(ENGAGE_PROFILE_DIR) / (profile + ".json");
  if (!std::string_view(ENGAGE_PROFILE_DIR).empty() && fs::is_regular_file(shipped)) {
    return sim::load_population(shipped);
  }
  return sim::builtin_population(profile);
}

void append_scan(ingest::ScanResult& into, ingest::ScanResult part) {
  into.events.insert(into.events.end(), std::make_move_iterator(part.events.begin()),
                     std::make_move_iterator(part.events.end()));
  into.corrupt.insert(into.corrupt.end(), part.corrupt.begin(), part.corrupt.end());
}

// Files are read as logs; directories as store data directories.
ingest::ScanResult read_inputs(const CliConfig& config) {
  std::vector<fs::path> inputs = config.inputs;
  if (inputs.empty()) inputs.push_back(config.data_dir);
  ingest::ScanResult all;
  for (const auto& input : inputs) {
    if (input == "-") {
      append_scan(all, ingest::scan_log(std::cin, "<stdin>"));
    } else if (fs::is_directory(input)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(input)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.starts_with("events-") &&
            name.ends_with(".ndjson")) {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) append_scan(all, ingest::scan_log_file(f));
    } else {
      append_scan(all, ingest::scan_log_file(input));
    }
  }
  return all;
}

std::size_t report_corrupt(const ingest::ScanResult& scan, std::ostream& err) {
  for (const auto& c : scan.corrupt) {
    err << "warning: " << c.partition << ":" << c.line << " (byte " << c.byte_offset
        << "): " << c.error << "\n";
  }
  return scan.corrupt.size();
}

void add_common(CLI::App& cmd, CliConfig& c) {
  cmd.add_option("--data-dir", c.data_dir, "Event store directory")
      ->envname("ENGAGE_DATA_DIR");
  cmd.add_option("--out", c.out, "Output file (default: stdout)")->envname("ENGAGE_OUT");
  cmd.add_option("--format", c.format, "Output format")
      ->envname("ENGAGE_FORMAT")
      ->check(CLI::IsMember({"csv", "json"}));
}

void add_inputs(CLI::App& cmd, CliConfig& c) {
  cmd.add_option("--input,--log", c.inputs,
                 "Event log file or store directory; '-' reads stdin (default: --data-dir)")
      ->envname("ENGAGE_INPUT");
  cmd.add_flag("--dedup", c.dedup, "Drop repeated deliveries of the same event")
      ->envname("ENGAGE_DEDUP");
}

}  // namespace

void request_shutdown() { g_shutdown.store(true); }

int cmd_serve(const CliConfig& config, std::ostream& out, std::ostream& err,
              const std::function<void(int)>& on_ready) {
  g_shutdown.store(false);
  ingest::ServiceConfig sc;
  sc.queue_capacity = config.queue_capacity;
  sc.workers = config.workers;
  sc.classifier.user_agent_denylist =
      config.denylist.empty() ? kDefaultDenylist : ingest::load_denylist(config.denylist);
  sc.classifier.rate_ceiling_per_second = config.rate_ceiling;
  sc.classifier.rate_window_seconds = config.rate_window;

  ingest::LogEventStore store(config.data_dir);
  ingest::IngestionService service(sc, store);
  ingest::HttpFrontend http(service,
                            ingest::HttpConfig{config.host, config.port,
                                               config.collector_script, 16});
  try {
    http.bind();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitErrors;
  }
  service.start();
  http.start();

  auto prev_int = std::signal(SIGINT, on_signal);
  auto prev_term = std::signal(SIGTERM, on_signal);
  out << "listening on " << config.host << ":" << http.port() << std::endl;
  if (on_ready) on_ready(http.port());

  while (!g_shutdown.load()) std::this_thread::sleep_for(std::chrono::milliseconds(50));

  // Stop taking requests first, then drain what was already accepted.
  http.stop();
  service.stop();
  std::signal(SIGINT, prev_int);
  std::signal(SIGTERM, prev_term);

  const auto s = service.stats();
  out << "accepted " << s.accepted << " appended " << s.appended << " malformed "
      << s.malformed << " bot_rejected " << s.bot_rejected << " backpressure "
      << s.backpressure << std::endl;
  return s.appended == s.accepted ? kExitOk : kExitErrors;
}

int cmd_simulate(const CliConfig& config, std::ostream& out, std::ostream& err) {
  sim::SimulationConfig sc;
  sc.population = resolve_population(config.profile);
  sc.sessions = config.sessions;
  sc.seed = config.seed;
  const auto sessions = sim::simulate(sc);

  if (!config.target.empty()) {
    sim::WireTarget target;
    const auto colon = config.target.rfind(':');
    if (colon == std::string::npos) {
      err << "error: --target must be host:port\n";
      return kExitUsage;
    }
    target.host = config.target.substr(0, colon);
    target.port = std::stoi(config.target.substr(colon + 1));
    const auto stats = sim::send_sessions(sessions, target);
    err << "requests " << stats.requests << " accepted " << stats.accepted
        << " rejected " << stats.rejected << " failed " << stats.failed << "\n";
    if (config.out.empty()) return stats.failed == 0 ? kExitOk : kExitErrors;
  }

  Output sink(config.out, out);
  const auto log = sim::simulation_log(sessions);
  ingest::write_log(sink.get(), log);
  return kExitOk;
}

int cmd_mine(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const auto scan = read_inputs(config);
  std::size_t warnings = report_corrupt(scan, err);
  const auto events = config.dedup ? miner::dedup_events(scan.events) : scan.events;
  const auto table = miner::item_stats(events);
  for (const auto& [id, f] : table) {
    if (f.errors > 0) {
      err << "warning: " << f.errors << " unminable event(s) for item " << id << "\n";
      ++warnings;
    }
  }
  Output sink(config.out, out);
  miner::write_feature_table(sink.get(), table,
                             config.format == "json" ? miner::TableFormat::kJson
                                                     : miner::TableFormat::kCsv);
  if (warnings > 0) {
    err << warnings << " warning(s)\n";
    return kExitErrors;
  }
  return kExitOk;
}

int cmd_compare(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const auto scan = read_inputs(config);
  const std::size_t warnings = report_corrupt(scan, err);
  const auto events = config.dedup ? miner::dedup_events(scan.events) : scan.events;

  const auto report = miner::compare_methods(events);
  {
    Output sink(config.out, out);
    miner::write_comparison(sink.get(), report,
                            config.format == "json" ? miner::ReportFormat::kJson
                                                    : miner::ReportFormat::kCsv);
  }

  if (!config.curve_out.empty()) {
    try {
      const auto corr = miner::attention_scroll_correlation(miner::item_stats(events));
      std::ofstream curve(config.curve_out, std::ios::binary | std::ios::trunc);
      if (!curve) {
        throw Error(Errc::kStorageFailure, config.curve_out.string(),
                    "cannot open for writing");
      }
      miner::write_curve(curve, corr);
      err << "pearson " << corr.pearson << " over " << corr.items << " items\n";
    } catch (const Error& e) {
      if (e.code() != Errc::kInsufficientData && e.code() != Errc::kZeroVariance) throw;
      err << "note: no percentile curve: " << e.what() << "\n";
    }
  }
  return warnings > 0 ? kExitErrors : kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig c;
  CLI::App app{"engage: engagement telemetry pipeline"};
  app.require_subcommand(1);

  auto* serve = app.add_subcommand("serve", "Run the ingestion service");
  add_common(*serve, c);
  serve->add_option("--host", c.host, "Listen address")->envname("ENGAGE_HOST");
  serve->add_option("--port", c.port, "Listen port (0: ephemeral)")
      ->envname("ENGAGE_PORT")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--queue-capacity", c.queue_capacity, "Queued event limit")
      ->envname("ENGAGE_QUEUE_CAPACITY")
      ->check(CLI::PositiveNumber);
  serve->add_option("--workers", c.workers, "Storage worker threads")
      ->envname("ENGAGE_WORKERS")
      ->check(CLI::PositiveNumber);
  serve->add_option("--denylist", c.denylist, "User-Agent denylist file")
      ->envname("ENGAGE_DENYLIST")
      ->check(CLI::ExistingFile);
  serve->add_option("--rate-ceiling", c.rate_ceiling, "Reports per second per address")
      ->envname("ENGAGE_RATE_CEILING")
      ->check(CLI::PositiveNumber);
  serve->add_option("--rate-window", c.rate_window, "Rate window in seconds")
      ->envname("ENGAGE_RATE_WINDOW")
      ->check(CLI::PositiveNumber);
  serve->add_option("--collector-script", c.collector_script,
                    "File served at /v1/collector.js")
      ->envname("ENGAGE_COLLECTOR_SCRIPT");

  auto* simulate = app.add_subcommand("simulate", "Write a synthetic event log");
  add_common(*simulate, c);
  simulate->add_option("--seed", c.seed, "Run seed")->envname("ENGAGE_SEED");
  simulate->add_option("--sessions", c.sessions, "Number of sessions")
      ->envname("ENGAGE_SESSIONS");
  simulate->add_option("--profile", c.profile,
                       "human, bot, a shipped profile name, or a profile file")
      ->envname("ENGAGE_PROFILE");
  simulate->add_option("--target", c.target, "host:port of a running service")
      ->envname("ENGAGE_TARGET");

  auto* mine = app.add_subcommand("mine", "Compute the per-item feature table");
  add_common(*mine, c);
  add_inputs(*mine, c);

  auto* compare = app.add_subcommand("compare", "Compare page-load and pinging measurements");
  add_common(*compare, c);
  add_inputs(*compare, c);
  compare->add_option("--curve-out", c.curve_out,
                      "Write the attention/scroll percentile curve here")
      ->envname("ENGAGE_CURVE_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*serve) return cmd_serve(c, out, err);
    if (*simulate) return cmd_simulate(c, out, err);
    if (*mine) return cmd_mine(c, out, err);
    return cmd_compare(c, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitErrors;
  }
}

}  // namespace engage::cli
