#pragma once

// Snapshot wire format, version 1. All integers and floats little-endian.
//
//   "NBVSNAP1"                      8 bytes magic
//   version                         u32 = 1
//   repeated blocks:
//     type                          u32
//     length                        u64 (payload bytes)
//     payload
//
//   type 1 SIM_HEADER  56 bytes   t, dt, G, softening: f64
//                                 step_count, N, flags: u64 (bit 0 = paused)
//   type 2 PARTICLES   64*N bytes per particle mass, radius, x, y, z,
//                                 vx, vy, vz: f64
//   type 3 VIEW        72 bytes   seq: u64, 16 x f32 column-major matrix
//   type 0 END         0 bytes    terminates the stream
//
// Unknown block types are skipped by length.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "nbview/simulation.hpp"

namespace nbview {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::string_view kSnapshotMagic = "NBVSNAP1";
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::uint64_t kFlagPaused = 1;

enum class BlockType : std::uint32_t {
  End = 0,
  SimHeader = 1,
  Particles = 2,
  View = 3,
};

inline constexpr std::size_t kPreambleSize = 12;
inline constexpr std::size_t kBlockHeaderSize = 12;
inline constexpr std::size_t kSimHeaderPayload = 56;
inline constexpr std::size_t kParticleRecordSize = 64;
inline constexpr std::size_t kViewPayload = 72;

struct SimHeader {
  double time = 0.0;
  double dt = 0.0;
  double gravity = 0.0;
  double softening = 0.0;
  std::uint64_t step_count = 0;
  std::uint64_t particle_count = 0;
  std::uint64_t flags = 0;

  friend bool operator==(const SimHeader&, const SimHeader&) = default;
};

// Server-pushed camera. seq increases with every replacement.
struct ViewOverride {
  std::uint64_t seq = 0;
  std::array<float, 16> matrix{};

  friend bool operator==(const ViewOverride&, const ViewOverride&) = default;
};

struct Snapshot {
  std::uint32_t version = kSnapshotVersion;
  SimHeader header;
  std::vector<Particle> particles;
  std::optional<ViewOverride> view;
};

enum class SnapshotErrorKind {
  BadMagic,
  UnsupportedVersion,
  Truncated,
  CountMismatch,
  MissingEnd,
  MissingBlock,
  DuplicateBlock,
  BadBlockLength,
};

class SnapshotError : public std::runtime_error {
 public:
  SnapshotError(SnapshotErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  SnapshotErrorKind kind() const noexcept { return kind_; }

 private:
  SnapshotErrorKind kind_;
};

SimHeader header_of(const Simulation& sim);

Bytes encode_snapshot(const Simulation& sim,
                      const std::optional<ViewOverride>& view = std::nullopt);
Bytes encode_snapshot(const Snapshot& snapshot);

// Throws SnapshotError. Blocks after END are ignored.
Snapshot decode_snapshot(std::span<const std::uint8_t> bytes);

constexpr std::size_t snapshot_size(std::size_t n, bool has_view) {
  return kPreambleSize + (kBlockHeaderSize + kSimHeaderPayload) +
         (kBlockHeaderSize + kParticleRecordSize * n) + kBlockHeaderSize +
         (has_view ? kBlockHeaderSize + kViewPayload : 0);
}

static_assert(snapshot_size(0, false) == 104);
static_assert(snapshot_size(0, true) == 188);

}  // namespace nbview
