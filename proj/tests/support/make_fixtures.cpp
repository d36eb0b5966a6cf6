// Writes fixtures/snapshot_n3_v1.{bin,json} and fixtures/http/*.
// Usage: nbview_make_fixtures [fixture-dir]

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fixture.hpp"
#include "json.hpp"
#include "nbview/http.hpp"
#include "nbview/net.hpp"
#include "nbview/steering.hpp"

using namespace nbview;
using nbview::testing::fixture_snapshot;

namespace {

void write(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::cout << "wrote " << path << " (" << data.size() << " bytes)\n";
}

nlohmann::json manifest(const Snapshot& s) {
  nlohmann::json j;
  j["version"] = s.version;
  j["size_bytes"] = snapshot_size(s.particles.size(), s.view.has_value());
  j["header"] = {{"t", s.header.time},
                 {"dt", s.header.dt},
                 {"G", s.header.gravity},
                 {"softening", s.header.softening},
                 {"step_count", s.header.step_count},
                 {"N", s.header.particle_count},
                 {"flags", s.header.flags}};
  for (const Particle& p : s.particles) {
    j["particles"].push_back({{"mass", p.mass},
                              {"radius", p.radius},
                              {"position", {p.position.x, p.position.y, p.position.z}},
                              {"velocity", {p.velocity.x, p.velocity.y, p.velocity.z}}});
  }
  j["view"] = {{"seq", s.view->seq}, {"matrix", s.view->matrix}};
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : nbview::testing::kFixtureDir;
  const std::filesystem::path http = dir / "http";
  std::filesystem::create_directories(http);

  const Snapshot snap = fixture_snapshot();
  const Bytes bin = encode_snapshot(snap);
  write(dir / "snapshot_n3_v1.bin", std::string_view(reinterpret_cast<const char*>(bin.data()), bin.size()));
  write(dir / "snapshot_n3_v1.json", manifest(snap).dump(2) + "\n");

  const std::filesystem::path stub = http / "viewer_stub.html";
  if (!std::filesystem::exists(stub)) {
    write(stub, "<!doctype html>\n<title>nbview</title>\n<p>viewer stub</p>\n");
  }

  SharedState state(Simulation::from_snapshot(snap));
  state.set_view_override(snap.view->matrix);
  ServerConfig config;
  config.viewer_page = stub;

  const std::string png_like = std::string("\x89PNG\r\n\x1a\n", 8) + "not really a png";
  const std::pair<const char*, std::string> requests[] = {
      {"get_root", make_get("/")},
      {"get_simulation", make_get("/simulation")},
      {"post_cmd_pause", make_post("/cmd", "pause")},
      {"post_shot", make_post("/shot", png_like)},
      {"get_favicon", make_get("/favicon.ico")},
  };
  for (const auto& [name, request] : requests) {
    const auto parsed = parse_request(request);
    const Response response = handle_request(std::get<Request>(parsed), state, config);
    write(http / (std::string(name) + ".request"), request);
    write(http / (std::string(name) + ".response"), response.to_bytes());
  }
  return 0;
}
