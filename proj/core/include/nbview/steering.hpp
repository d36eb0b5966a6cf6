#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nbview/simulation.hpp"
#include "nbview/snapshot.hpp"

namespace nbview {

enum class Verb { Pause, Resume, Step, Quit };

// Lowercase wire spelling: "pause", "resume", "step", "quit".
std::optional<Verb> parse_verb(std::string_view text);
std::string_view to_string(Verb verb);

struct Command {
  Verb verb;
  std::string origin;  // diagnostic only
};

enum class LoopDirective {
  Advance,    // take one normal step
  Idle,       // paused; sleep and poll again
  Terminate,  // quit was requested
};

struct ScreenshotStored {
  std::filesystem::path path;
};
struct ScreenshotDiscarded {};
using ScreenshotOutcome = std::variant<ScreenshotStored, ScreenshotDiscarded>;

class ScreenshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::chrono::milliseconds kPausedPollInterval{10};

// Shared state between the integration thread and server threads.
//
// The simulation sits behind one exclusive guard that is held for exactly
// one timestep, one snapshot encode, or one round of command application.
// Commands go through a separate FIFO so submitters never wait on a step.
class SharedState {
 public:
  explicit SharedState(Simulation sim);

  SharedState(const SharedState&) = delete;
  SharedState& operator=(const SharedState&) = delete;

  // Encodes the current simulation plus the view slot under the guard.
  Bytes capture_snapshot() const;

  void submit_command(Command cmd);

  // Applies every queued command in arrival order. Step advances the
  // simulation only while paused. Commands after a Quit are dropped.
  LoopDirective drain_and_apply();

  // One normal timestep under the guard.
  void advance();

  // Throws ParameterError on non-finite entries. Returns the new sequence
  // number, starting at 1.
  std::uint64_t set_view_override(std::span<const float, 16> matrix);
  void clear_view_override();
  std::optional<ViewOverride> view_override() const;

  void set_screenshot_dir(std::optional<std::filesystem::path> dir);
  // Writes shot_NNNNNN.png verbatim into the screenshot directory. Throws
  // ScreenshotError if the file cannot be written.
  ScreenshotOutcome store_screenshot(std::span<const std::uint8_t> png);

  // Async-signal-safe.
  void request_quit() noexcept { quit_.store(true, std::memory_order_relaxed); }
  bool quit_requested() const noexcept {
    return quit_.load(std::memory_order_relaxed);
  }

  std::size_t pending_commands() const;

  // Runs fn(Simulation&) under the guard, e.g. to add particles between
  // steps.
  template <class Fn>
  decltype(auto) with_simulation(Fn&& fn) {
    std::lock_guard lock(sim_mutex_);
    return fn(sim_);
  }
  template <class Fn>
  decltype(auto) with_simulation(Fn&& fn) const {
    std::lock_guard lock(sim_mutex_);
    return fn(static_cast<const Simulation&>(sim_));
  }

 private:
  mutable std::mutex sim_mutex_;
  Simulation sim_;
  std::optional<ViewOverride> view_;  // guarded by sim_mutex_
  std::uint64_t view_seq_ = 0;        // survives clear_view_override()

  mutable std::mutex queue_mutex_;
  std::deque<Command> queue_;

  std::mutex shot_mutex_;
  std::optional<std::filesystem::path> shot_dir_;
  std::uint64_t shot_counter_ = 0;

  std::atomic<bool> quit_{false};
  static_assert(std::atomic<bool>::is_always_lock_free);
};

enum class RunOutcome { ReachedEnd, Quit };

struct RunOptions {
  std::optional<double> t_end;  // unbounded when empty
  std::chrono::milliseconds idle_interval = kPausedPollInterval;
};

// Integration loop: drain commands, then step, idle, or stop. Returns once
// t >= t_end or a quit was requested; a quit is honoured before the next
// step.
RunOutcome run_simulation(SharedState& state, const RunOptions& options);

}  // namespace nbview
