#include "cli.hpp"

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <system_error>

#include "CLI11.hpp"
#include "nbview/bench.hpp"
#include "nbview/disk.hpp"
#include "nbview/errors.hpp"
#include "nbview/server.hpp"
#include "nbview/steering.hpp"

namespace nbview::cli {

namespace {

struct RunFlags {
  std::string scenario = "disk";
  long long n = 10000;
  std::optional<double> t_end;
  int port = 1234;
  std::string bind = "127.0.0.1";
  std::optional<std::string> screenshot_dir;
  std::optional<std::string> viewer;
  std::uint64_t seed = DiskParams{}.seed;
  std::optional<double> dt;
};

struct BenchFlags {
  long long n = 10000;
  double t_end = 10.0;
  double poll_ms = 10.0;
  std::uint64_t seed = DiskParams{}.seed;
  bool machine = false;
};

SharedState* g_running_state = nullptr;

extern "C" void on_signal(int) {
  if (g_running_state) g_running_state->request_quit();
}

class SignalScope {
 public:
  explicit SignalScope(SharedState& state) {
    g_running_state = &state;
    prev_int_ = std::signal(SIGINT, on_signal);
    prev_term_ = std::signal(SIGTERM, on_signal);
  }
  ~SignalScope() {
    std::signal(SIGINT, prev_int_);
    std::signal(SIGTERM, prev_term_);
    g_running_state = nullptr;
  }
  SignalScope(const SignalScope&) = delete;
  SignalScope& operator=(const SignalScope&) = delete;

 private:
  void (*prev_int_)(int);
  void (*prev_term_)(int);
};

int do_run(const RunFlags& f, std::ostream& out, std::ostream& err) {
  DiskParams params;
  params.seed = f.seed;
  if (f.dt) params.dt = *f.dt;

  SharedState state(init_selfgravitating_disk(static_cast<std::size_t>(f.n), params));

  if (f.screenshot_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*f.screenshot_dir, ec);
    if (ec) {
      err << "nbview: cannot create " << *f.screenshot_dir << ": " << ec.message() << '\n';
      return kExitFailure;
    }
    state.set_screenshot_dir(std::filesystem::path(*f.screenshot_dir));
  }

  ServerConfig config;
  config.bind_address = f.bind;
  config.port = static_cast<std::uint16_t>(f.port);
  if (f.viewer) config.viewer_page = std::filesystem::path(*f.viewer);

  ServerHandle server;
  try {
    server = start_server(state, config);
  } catch (const std::system_error& e) {
    err << "nbview: " << e.what() << '\n';
    return kExitFailure;
  }

  out << "http://" << f.bind << ':' << server.port() << "/" << std::endl;

  RunOutcome outcome;
  {
    SignalScope signals(state);
    outcome = run_simulation(state, RunOptions{.t_end = f.t_end});
  }
  server.stop();

  state.with_simulation([&](const Simulation& s) {
    out << (outcome == RunOutcome::Quit ? "quit" : "done") << " at t=" << s.time()
        << " after " << s.step_count() << " steps" << std::endl;
  });
  return kExitOk;
}

int do_bench(const BenchFlags& f, std::ostream& out) {
  BenchOptions options;
  options.n = static_cast<std::size_t>(f.n);
  options.t_end = f.t_end;
  options.poll_interval_ms = f.poll_ms;
  options.disk.seed = f.seed;

  const std::vector<BenchResult> results = run_comparison(options);
  out << report(results);
  if (f.machine) out << report_machine(results);
  return kExitOk;
}

}  // namespace

int run_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Real-time N-body simulation with a built-in browser viewer", "nbview"};
  app.require_subcommand(1);

  RunFlags run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario and serve it over HTTP");
  run_cmd->add_option("scenario", run.scenario, "Scenario to run")
      ->check(CLI::IsMember({"disk"}));
  run_cmd->add_option("--n", run.n, "Number of disk particles")->check(CLI::PositiveNumber);
  run_cmd->add_option("--t-end", run.t_end, "Stop at this code time (default: run until quit)")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--port", run.port, "TCP port, 0 for ephemeral")
      ->check(CLI::Range(0, 65535))
      ->envname("NBV_PORT");
  run_cmd->add_option("--bind", run.bind, "Bind address");
  run_cmd->add_option("--screenshot-dir", run.screenshot_dir,
                      "Store screenshots posted by the viewer here");
  run_cmd->add_option("--viewer", run.viewer, "Serve this HTML file instead of the built-in viewer");
  run_cmd->add_option("--seed", run.seed, "Disk generator seed");
  run_cmd->add_option("--dt", run.dt, "Timestep")->check(CLI::PositiveNumber);

  BenchFlags bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Compare headless and hybrid runtimes");
  bench_cmd->add_option("--n", bench.n, "Number of disk particles")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--t-end", bench.t_end, "Code time to integrate")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--poll-ms", bench.poll_ms, "Poller sleep between requests")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--seed", bench.seed, "Disk generator seed");
  bench_cmd->add_flag("--machine", bench.machine, "Also print key=value lines");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "nbview: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return do_run(run, out, err);
    return do_bench(bench, out);
  } catch (const ParameterError& e) {
    err << "nbview: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "nbview: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace nbview::cli
