#pragma once

#include <cstdint>
#include <memory>

#include "nbview/http.hpp"
#include "nbview/steering.hpp"

namespace nbview {

// Handle to a running server thread. Movable; stops the server on
// destruction.
class ServerHandle {
 public:
  ServerHandle();
  ServerHandle(ServerHandle&&) noexcept;
  ServerHandle& operator=(ServerHandle&&) noexcept;
  ~ServerHandle();

  std::uint16_t port() const;
  std::uint64_t requests_served() const;
  bool running() const;

  // Closes the listener and joins the thread. Idempotent.
  void stop();

  struct Impl;

 private:
  explicit ServerHandle(std::unique_ptr<Impl> impl);
  friend ServerHandle start_server(SharedState& state, ServerConfig config);

  std::unique_ptr<Impl> impl_;
};

// Binds and listens before returning, so bind errors are reported here as
// std::system_error. Connections are then accepted on a dedicated thread
// and served one at a time: read fully, answer, close. The state must
// outlive the server.
ServerHandle start_server(SharedState& state, ServerConfig config);

}  // namespace nbview
