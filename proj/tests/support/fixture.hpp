#pragma once

// The committed golden snapshot (fixtures/snapshot_n3_v1.bin) and the HTTP
// transcripts under fixtures/http/ are generated from this state.

#include <array>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "nbview/snapshot.hpp"

namespace nbview::testing {

inline const std::filesystem::path kFixtureDir = NBVIEW_FIXTURE_DIR;

inline constexpr std::array<float, 16> kFixtureViewMatrix = {
    0.5f, 0.0f, 0.0f, 0.0f,   //
    0.0f, 0.5f, 0.0f, 0.0f,   //
    0.0f, 0.0f, 0.5f, 0.0f,   //
    0.25f, -0.5f, -2.0f, 1.0f};

inline Snapshot fixture_snapshot() {
  Snapshot s;
  s.header = SimHeader{
      .time = 1.5,
      .dt = 0.25,
      .gravity = 1.0,
      .softening = 0.125,
      .step_count = 6,
      .particle_count = 3,
      .flags = kFlagPaused,
  };
  s.particles = {
      Particle{.mass = 1.0, .radius = 0.1, .position = {0.0, 0.0, 0.0}, .velocity = {0.0, 0.0, 0.0}},
      Particle{.mass = 0.001, .radius = 0.02, .position = {1.0, 0.0, 0.0625}, .velocity = {0.0, 1.0, 0.0}},
      Particle{.mass = 0.5, .radius = 0.05, .position = {-2.0, 0.5, -0.25}, .velocity = {-0.125, -0.75, 0.375}},
  };
  s.view = ViewOverride{.seq = 1, .matrix = kFixtureViewMatrix};
  return s;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Bytes read_bytes(const std::filesystem::path& path) {
  const std::string s = read_file(path);
  return Bytes(s.begin(), s.end());
}

// Names of the committed request/response pairs under fixtures/http/.
inline constexpr std::array<const char*, 5> kTranscripts = {
    "get_root", "get_simulation", "post_cmd_pause", "post_shot", "get_favicon"};

}  // namespace nbview::testing
