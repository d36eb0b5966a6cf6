#include "nbview/steering.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <thread>
#include <utility>

#include "nbview/errors.hpp"

namespace nbview {

std::optional<Verb> parse_verb(std::string_view text) {
  if (text == "pause") return Verb::Pause;
  if (text == "resume") return Verb::Resume;
  if (text == "step") return Verb::Step;
  if (text == "quit") return Verb::Quit;
  return std::nullopt;
}

std::string_view to_string(Verb verb) {
  switch (verb) {
    case Verb::Pause: return "pause";
    case Verb::Resume: return "resume";
    case Verb::Step: return "step";
    case Verb::Quit: return "quit";
  }
  return "?";
}

SharedState::SharedState(Simulation sim) : sim_(std::move(sim)) {}

Bytes SharedState::capture_snapshot() const {
  std::lock_guard lock(sim_mutex_);
  return encode_snapshot(sim_, view_);
}

void SharedState::submit_command(Command cmd) {
  std::lock_guard lock(queue_mutex_);
  queue_.push_back(std::move(cmd));
}

std::size_t SharedState::pending_commands() const {
  std::lock_guard lock(queue_mutex_);
  return queue_.size();
}

LoopDirective SharedState::drain_and_apply() {
  std::deque<Command> batch;
  {
    std::lock_guard lock(queue_mutex_);
    batch.swap(queue_);
  }

  std::lock_guard lock(sim_mutex_);
  for (const Command& cmd : batch) {
    switch (cmd.verb) {
      case Verb::Pause:
        sim_.set_paused(true);
        break;
      case Verb::Resume:
        sim_.set_paused(false);
        break;
      case Verb::Step:
        if (sim_.paused()) sim_.step();
        break;
      case Verb::Quit:
        quit_.store(true, std::memory_order_relaxed);
        return LoopDirective::Terminate;
    }
  }
  if (quit_requested()) return LoopDirective::Terminate;
  return sim_.paused() ? LoopDirective::Idle : LoopDirective::Advance;
}

void SharedState::advance() {
  std::lock_guard lock(sim_mutex_);
  sim_.step();
}

std::uint64_t SharedState::set_view_override(std::span<const float, 16> matrix) {
  for (float f : matrix) {
    if (!std::isfinite(f)) throw ParameterError("view matrix must be finite");
  }
  std::lock_guard lock(sim_mutex_);
  ViewOverride v;
  v.seq = ++view_seq_;
  std::copy(matrix.begin(), matrix.end(), v.matrix.begin());
  view_ = v;
  return v.seq;
}

void SharedState::clear_view_override() {
  std::lock_guard lock(sim_mutex_);
  view_.reset();
}

std::optional<ViewOverride> SharedState::view_override() const {
  std::lock_guard lock(sim_mutex_);
  return view_;
}

void SharedState::set_screenshot_dir(std::optional<std::filesystem::path> dir) {
  std::lock_guard lock(shot_mutex_);
  shot_dir_ = std::move(dir);
}

ScreenshotOutcome SharedState::store_screenshot(std::span<const std::uint8_t> png) {
  std::lock_guard lock(shot_mutex_);
  if (!shot_dir_) return ScreenshotDiscarded{};

  char name[32];
  std::snprintf(name, sizeof(name), "shot_%06llu.png",
                static_cast<unsigned long long>(shot_counter_));
  std::filesystem::path path = *shot_dir_ / name;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (out) {
    out.write(reinterpret_cast<const char*>(png.data()),
              static_cast<std::streamsize>(png.size()));
    out.close();
  }
  if (!out) throw ScreenshotError("cannot write " + path.string());
  ++shot_counter_;
  return ScreenshotStored{std::move(path)};
}

RunOutcome run_simulation(SharedState& state, const RunOptions& options) {
  auto reached_end = [&] {
    if (!options.t_end) return false;
    return state.with_simulation(
        [&](const Simulation& s) { return s.time() >= *options.t_end; });
  };

  for (;;) {
    if (state.quit_requested()) return RunOutcome::Quit;
    const LoopDirective d = state.drain_and_apply();
    if (d == LoopDirective::Terminate) return RunOutcome::Quit;
    if (reached_end()) return RunOutcome::ReachedEnd;
    if (d == LoopDirective::Idle) {
      std::this_thread::sleep_for(options.idle_interval);
      continue;
    }
    state.advance();
  }
}

}  // namespace nbview
