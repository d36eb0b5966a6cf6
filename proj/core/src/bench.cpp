#include "nbview/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <thread>

#include "nbview/net.hpp"
#include "nbview/server.hpp"
#include "nbview/snapshot.hpp"
#include "nbview/steering.hpp"

namespace nbview {

std::string_view to_string(BenchMode mode) {
  return mode == BenchMode::Headless ? "headless" : "hybrid";
}

namespace {

using Clock = std::chrono::steady_clock;

struct Timed {
  double wall_seconds;
  std::uint64_t steps;
};

Timed integrate(SharedState& state, double t_end) {
  const auto start = Clock::now();
  run_simulation(state, RunOptions{.t_end = t_end});
  const auto stop = Clock::now();
  const std::uint64_t steps =
      state.with_simulation([](const Simulation& s) { return s.step_count(); });
  return {std::chrono::duration<double>(stop - start).count(), steps};
}

}  // namespace

BenchResult run_headless(std::size_t n, double t_end, const DiskParams& disk) {
  SharedState state(init_selfgravitating_disk(n, disk));
  const Timed t = integrate(state, t_end);
  return BenchResult{
      .mode = BenchMode::Headless,
      .n = n,
      .sim_time_units = t_end,
      .wall_seconds = t.wall_seconds,
      .steps = t.steps,
  };
}

BenchResult run_hybrid(std::size_t n, double t_end, double poll_interval_ms,
                       const DiskParams& disk) {
  SharedState state(init_selfgravitating_disk(n, disk));
  ServerConfig config;
  config.port = 0;
  ServerHandle server = start_server(state, config);
  const std::uint16_t port = server.port();

  std::atomic<bool> done{false};
  std::uint64_t frames = 0;
  std::uint64_t bytes = 0;
  const auto interval = std::chrono::duration<double, std::milli>(poll_interval_ms);
  const std::string request = make_get("/simulation");

  std::thread poller([&] {
    do {
      try {
        const auto response = parse_response(http_exchange("127.0.0.1", port, request));
        if (response && response->status == 200) {
          ++frames;
          bytes += response->body.size();
        }
      } catch (const std::system_error&) {
        // counted as a missed frame
      }
      std::this_thread::sleep_for(interval);
    } while (!done.load());
  });

  const Timed t = integrate(state, t_end);
  done.store(true);
  poller.join();
  server.stop();

  return BenchResult{
      .mode = BenchMode::Hybrid,
      .n = n,
      .sim_time_units = t_end,
      .wall_seconds = t.wall_seconds,
      .frames_served = frames,
      .bytes_served = bytes,
      .steps = t.steps,
  };
}

std::vector<BenchResult> run_comparison(const BenchOptions& options) {
  // Warm-up: a handful of steps to fault in pages and settle clocks.
  run_headless(options.n, 10.0 * options.disk.dt, options.disk);
  return {
      run_headless(options.n, options.t_end, options.disk),
      run_hybrid(options.n, options.t_end, options.poll_interval_ms, options.disk),
  };
}

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::vector<BenchResult> ordered(std::span<const BenchResult> results) {
  std::vector<BenchResult> rows(results.begin(), results.end());
  std::stable_sort(rows.begin(), rows.end(), [](const BenchResult& a, const BenchResult& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.mode < b.mode;
  });
  return rows;
}

}  // namespace

std::string report(std::span<const BenchResult> results) {
  std::ostringstream out;
  auto row = [&](std::string_view mode, std::string_view n, std::string_view wall,
                 std::string_view frames, std::string_view fps, std::string_view mbps,
                 std::string_view ratio) {
    out << std::left << std::setw(10) << mode << std::right << std::setw(9) << n
        << std::setw(11) << wall << std::setw(9) << frames << std::setw(10) << fps
        << std::setw(10) << mbps << std::setw(10) << ratio << '\n';
  };
  row("mode", "n", "wall_s", "frames", "frames/s", "MB/s", "overhead");

  const std::vector<BenchResult> rows = ordered(results);
  for (const BenchResult& r : rows) {
    std::string fps = "n/a";
    std::string mbps = "n/a";
    std::string ratio = "-";
    if (r.mode == BenchMode::Hybrid) {
      fps = fixed(static_cast<double>(r.frames_served) / r.wall_seconds, 1);
      mbps = fixed(static_cast<double>(r.bytes_served) / r.wall_seconds / 1e6, 1);
      auto base = std::find_if(rows.begin(), rows.end(), [&](const BenchResult& b) {
        return b.mode == BenchMode::Headless && b.n == r.n;
      });
      ratio = base != rows.end() ? fixed(r.wall_seconds / base->wall_seconds, 3) : "n/a";
    }
    row(to_string(r.mode), std::to_string(r.n), fixed(r.wall_seconds, 3),
        std::to_string(r.frames_served), fps, mbps, ratio);
  }
  return out.str();
}

std::string report_machine(std::span<const BenchResult> results) {
  std::ostringstream out;
  for (const BenchResult& r : ordered(results)) {
    out << "mode=" << to_string(r.mode) << " n=" << r.n
        << " t_end=" << r.sim_time_units << " wall_s=" << fixed(r.wall_seconds, 6)
        << " frames=" << r.frames_served << " bytes=" << r.bytes_served
        << " steps=" << r.steps << '\n';
  }
  return out.str();
}

}  // namespace nbview
