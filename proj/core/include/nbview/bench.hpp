#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nbview/disk.hpp"

namespace nbview {

enum class BenchMode { Headless, Hybrid };

std::string_view to_string(BenchMode mode);

struct BenchResult {
  BenchMode mode = BenchMode::Headless;
  std::size_t n = 0;  // disk particles; the simulation holds n + 1
  double sim_time_units = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t frames_served = 0;
  std::uint64_t bytes_served = 0;  // snapshot body bytes received by the poller
  std::uint64_t steps = 0;         // final step_count
};

struct BenchOptions {
  std::size_t n = 10000;
  double t_end = 10.0;
  double poll_interval_ms = 10.0;
  DiskParams disk{};
};

// Integrates the disk demo from t = 0 to t_end with no server.
BenchResult run_headless(std::size_t n, double t_end, const DiskParams& disk = {});

// Same integration with the server running on an ephemeral loopback port
// and a scripted poller fetching GET /simulation, sleeping poll_interval_ms
// between responses. The poller always completes at least one fetch.
// Throws std::system_error if the server cannot bind.
BenchResult run_hybrid(std::size_t n, double t_end, double poll_interval_ms,
                       const DiskParams& disk = {});

// Short headless warm-up (discarded), then headless and hybrid runs.
std::vector<BenchResult> run_comparison(const BenchOptions& options);

// Fixed-width table: mode, n, wall seconds, frames, frames/s, MB/s and the
// hybrid/headless wall-time ratio for rows sharing n. Rows are ordered by
// n, headless first.
std::string report(std::span<const BenchResult> results);

// One "key=value ..." line per result.
std::string report_machine(std::span<const BenchResult> results);

}  // namespace nbview
