#pragma once

// Replays the committed HTTP transcripts against a live server over raw
// sockets.

#include <string>
#include <vector>

#include "fixture.hpp"
#include "nbview/net.hpp"
#include "nbview/server.hpp"

namespace nbview::testing {

struct TranscriptMismatch {
  std::string name;
  std::string expected;
  std::string actual;
};

inline ServerConfig transcript_config() {
  ServerConfig config;
  config.port = 0;
  config.viewer_page = kFixtureDir / "http" / "viewer_stub.html";
  return config;
}

// Returns the transcripts whose response differs byte-for-byte; requests
// are sent in recorded order on a fresh state.
inline std::vector<TranscriptMismatch> replay_transcripts() {
  SharedState state(Simulation::from_snapshot(fixture_snapshot()));
  state.set_view_override(kFixtureViewMatrix);
  ServerHandle server = start_server(state, transcript_config());

  std::vector<TranscriptMismatch> bad;
  for (const char* name : kTranscripts) {
    const std::string request = read_file(kFixtureDir / "http" / (std::string(name) + ".request"));
    const std::string expected = read_file(kFixtureDir / "http" / (std::string(name) + ".response"));
    std::string actual = http_exchange("127.0.0.1", server.port(), request);
    if (request.empty() || expected.empty() || actual != expected) {
      bad.push_back({name, expected, std::move(actual)});
    }
  }
  return bad;
}

}  // namespace nbview::testing
