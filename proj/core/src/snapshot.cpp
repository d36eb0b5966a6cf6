#include "nbview/snapshot.hpp"

#include <bit>
#include <cstring>
#include <string>

namespace nbview {

namespace {

template <class T>
constexpr T byteswap(T v) {
  auto bytes = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(v);
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
    std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  return std::bit_cast<T>(bytes);
}

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) return byteswap(v);
  return v;
}

class Writer {
 public:
  explicit Writer(std::size_t capacity) { out_.resize(capacity); }

  template <class T>
  void put(T v) {
    const T le = to_little(v);
    std::memcpy(out_.data() + pos_, &le, sizeof(T));
    pos_ += sizeof(T);
  }
  void put_raw(std::string_view s) {
    std::memcpy(out_.data() + pos_, s.data(), s.size());
    pos_ += s.size();
  }
  void block(BlockType type, std::uint64_t length) {
    put(static_cast<std::uint32_t>(type));
    put(length);
  }

  Bytes finish() && { return std::move(out_); }
  std::size_t position() const { return pos_; }

 private:
  Bytes out_;
  std::size_t pos_ = 0;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  bool has(std::size_t n) const { return in_.size() - pos_ >= n; }
  std::size_t remaining() const { return in_.size() - pos_; }

  template <class T>
  T get() {
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return to_little(v);
  }
  void skip(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

Bytes encode(const SimHeader& h, std::span<const Particle> particles,
             const std::optional<ViewOverride>& view) {
  Writer w(snapshot_size(particles.size(), view.has_value()));
  w.put_raw(kSnapshotMagic);
  w.put(kSnapshotVersion);

  w.block(BlockType::SimHeader, kSimHeaderPayload);
  w.put(h.time);
  w.put(h.dt);
  w.put(h.gravity);
  w.put(h.softening);
  w.put(h.step_count);
  w.put(h.particle_count);
  w.put(h.flags);

  w.block(BlockType::Particles, kParticleRecordSize * particles.size());
  for (const Particle& p : particles) {
    w.put(p.mass);
    w.put(p.radius);
    w.put(p.position.x);
    w.put(p.position.y);
    w.put(p.position.z);
    w.put(p.velocity.x);
    w.put(p.velocity.y);
    w.put(p.velocity.z);
  }

  if (view) {
    w.block(BlockType::View, kViewPayload);
    w.put(view->seq);
    for (float f : view->matrix) w.put(f);
  }

  w.block(BlockType::End, 0);
  return std::move(w).finish();
}

[[noreturn]] void fail(SnapshotErrorKind kind, const std::string& what) {
  throw SnapshotError(kind, "snapshot: " + what);
}

}  // namespace

SimHeader header_of(const Simulation& sim) {
  return SimHeader{
      .time = sim.time(),
      .dt = sim.dt(),
      .gravity = sim.gravity(),
      .softening = sim.softening(),
      .step_count = sim.step_count(),
      .particle_count = sim.size(),
      .flags = sim.paused() ? kFlagPaused : 0,
  };
}

Bytes encode_snapshot(const Simulation& sim,
                      const std::optional<ViewOverride>& view) {
  return encode(header_of(sim), sim.particles(), view);
}

Bytes encode_snapshot(const Snapshot& s) {
  return encode(s.header, s.particles, s.view);
}

Snapshot decode_snapshot(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (!r.has(kSnapshotMagic.size()) ||
      std::memcmp(bytes.data(), kSnapshotMagic.data(), kSnapshotMagic.size()) != 0)
    fail(SnapshotErrorKind::BadMagic, "bad magic");
  r.skip(kSnapshotMagic.size());
  if (!r.has(4)) fail(SnapshotErrorKind::Truncated, "truncated version");
  Snapshot s;
  s.version = r.get<std::uint32_t>();
  if (s.version != kSnapshotVersion)
    fail(SnapshotErrorKind::UnsupportedVersion,
         "unsupported version " + std::to_string(s.version));

  bool have_header = false;
  bool have_particles = false;
  std::uint64_t particle_bytes = 0;
  bool at_end = false;
  while (!at_end) {
    if (r.remaining() == 0) fail(SnapshotErrorKind::MissingEnd, "missing END block");
    if (!r.has(kBlockHeaderSize))
      fail(SnapshotErrorKind::Truncated, "truncated block header");
    const auto type = r.get<std::uint32_t>();
    const auto length = r.get<std::uint64_t>();
    if (length > r.remaining())
      fail(SnapshotErrorKind::Truncated,
           "block " + std::to_string(type) + " declares " +
               std::to_string(length) + " bytes, " +
               std::to_string(r.remaining()) + " available");

    switch (static_cast<BlockType>(type)) {
      case BlockType::End:
        if (length != 0) fail(SnapshotErrorKind::BadBlockLength, "END with payload");
        at_end = true;
        break;
      case BlockType::SimHeader: {
        if (have_header) fail(SnapshotErrorKind::DuplicateBlock, "duplicate SIM_HEADER");
        if (length != kSimHeaderPayload)
          fail(SnapshotErrorKind::BadBlockLength, "SIM_HEADER length");
        SimHeader& h = s.header;
        h.time = r.get<double>();
        h.dt = r.get<double>();
        h.gravity = r.get<double>();
        h.softening = r.get<double>();
        h.step_count = r.get<std::uint64_t>();
        h.particle_count = r.get<std::uint64_t>();
        h.flags = r.get<std::uint64_t>();
        have_header = true;
        break;
      }
      case BlockType::Particles: {
        if (have_particles) fail(SnapshotErrorKind::DuplicateBlock, "duplicate PARTICLES");
        if (length % kParticleRecordSize != 0)
          fail(SnapshotErrorKind::BadBlockLength, "PARTICLES length not a multiple of 64");
        particle_bytes = length;
        s.particles.resize(length / kParticleRecordSize);
        for (Particle& p : s.particles) {
          p.mass = r.get<double>();
          p.radius = r.get<double>();
          p.position.x = r.get<double>();
          p.position.y = r.get<double>();
          p.position.z = r.get<double>();
          p.velocity.x = r.get<double>();
          p.velocity.y = r.get<double>();
          p.velocity.z = r.get<double>();
        }
        have_particles = true;
        break;
      }
      case BlockType::View: {
        if (s.view) fail(SnapshotErrorKind::DuplicateBlock, "duplicate VIEW");
        if (length != kViewPayload) fail(SnapshotErrorKind::BadBlockLength, "VIEW length");
        ViewOverride v;
        v.seq = r.get<std::uint64_t>();
        for (float& f : v.matrix) f = r.get<float>();
        s.view = v;
        break;
      }
      default:
        r.skip(static_cast<std::size_t>(length));
        break;
    }
  }
  if (!have_header) fail(SnapshotErrorKind::MissingBlock, "missing SIM_HEADER");
  if (!have_particles) fail(SnapshotErrorKind::MissingBlock, "missing PARTICLES");
  if (s.header.particle_count * kParticleRecordSize != particle_bytes ||
      s.header.particle_count != s.particles.size())
    fail(SnapshotErrorKind::CountMismatch,
         "header N=" + std::to_string(s.header.particle_count) + " but " +
             std::to_string(s.particles.size()) + " particle records");
  return s;
}

}  // namespace nbview
