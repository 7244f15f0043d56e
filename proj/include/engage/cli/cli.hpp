// SPDX-License-Identifier: Apache-2.0
// cli.hpp
// The `engage` command: serve, simulate, mine, compare.
//
// Every flag can also come from an ENGAGE_* environment variable (for
// example ENGAGE_DATA_DIR, ENGAGE_PORT); a flag on the command line wins.
// Exit status is 0 when nothing went wrong, 1 when the command ran but
// surfaced errors (corrupt records, unminable events, bind failure), 2 for
// usage errors.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace engage::cli {

struct CliConfig {
  std::string subcommand;
  std::filesystem::path data_dir = "data";
  std::string host = "0.0.0.0";
  int port = 8080;
  std::uint64_t seed = 7;
  std::size_t sessions = 100;
  std::string profile = "human";  // built-in name, shipped profile name, or path
  std::filesystem::path out;      // empty: stdout
  std::string format = "csv";     // csv | json
  std::vector<std::filesystem::path> inputs;  // files or store directories
  std::filesystem::path curve_out;
  bool dedup = false;

  // serve
  std::size_t queue_capacity = 65536;
  std::size_t workers = 4;
  std::filesystem::path denylist;
  double rate_ceiling = 10.0;
  std::int64_t rate_window = 60;
  std::filesystem::path collector_script;

  // simulate: "host:port" switches to posting over HTTP
  std::string target;
};

// Parses argv and dispatches. Diagnostics go to `err`, results to `out`
// unless --out names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// `on_ready` receives the bound port once the server accepts requests.
int cmd_serve(const CliConfig& config, std::ostream& out, std::ostream& err,
              const std::function<void(int)>& on_ready = {});
int cmd_simulate(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_mine(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const CliConfig& config, std::ostream& out, std::ostream& err);

// Makes a running cmd_serve shut down as if it had received SIGTERM.
void request_shutdown();

}  // namespace engage::cli
