#include "nbview/server.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <iostream>
#include <system_error>
#include <thread>

#include "nbview/net.hpp"

namespace nbview {

namespace {

constexpr int kIdleTimeoutMs = 5000;
constexpr int kLingerMs = 200;

std::string peer_name(const sockaddr_storage& addr) {
  char host[INET6_ADDRSTRLEN] = "?";
  std::uint16_t port = 0;
  if (addr.ss_family == AF_INET) {
    const auto* in = reinterpret_cast<const sockaddr_in*>(&addr);
    ::inet_ntop(AF_INET, &in->sin_addr, host, sizeof(host));
    port = ntohs(in->sin_port);
  } else if (addr.ss_family == AF_INET6) {
    const auto* in6 = reinterpret_cast<const sockaddr_in6*>(&addr);
    ::inet_ntop(AF_INET6, &in6->sin6_addr, host, sizeof(host));
    port = ntohs(in6->sin6_port);
  }
  return std::string(host) + ":" + std::to_string(port);
}

}  // namespace

struct ServerHandle::Impl {
  SharedState& state;
  ServerConfig config;
  UniqueFd listener;
  UniqueFd wake_read;
  UniqueFd wake_write;
  std::uint16_t port = 0;
  std::atomic<bool> stopping{false};
  std::atomic<std::uint64_t> served{0};
  std::thread thread;

  Impl(SharedState& s, ServerConfig c) : state(s), config(std::move(c)) {}

  // Waits for fd to become ready. Returns false on stop request or timeout.
  bool wait(int fd, short events, int timeout_ms) {
    pollfd fds[2] = {{fd, events, 0}, {wake_read.get(), POLLIN, 0}};
    for (;;) {
      const int rc = ::poll(fds, 2, timeout_ms);
      if (rc < 0 && errno == EINTR) continue;
      if (rc <= 0) return false;
      if (fds[1].revents != 0) return false;
      return true;
    }
  }

  bool send_response(int fd, const Response& r) {
    const std::string head = r.head();
    for (std::string_view part : {std::string_view(head), std::string_view(r.body)}) {
      while (!part.empty()) {
        if (!wait(fd, POLLOUT, kIdleTimeoutMs)) return false;
        const ssize_t n = ::send(fd, part.data(), part.size(), MSG_NOSIGNAL | MSG_DONTWAIT);
        if (n < 0) {
          if (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK) continue;
          return false;
        }
        part.remove_prefix(static_cast<std::size_t>(n));
      }
    }
    return true;
  }

  // Half-close and drain so unread request bytes do not turn the close
  // into a reset that discards the response.
  void linger_close(int fd) {
    ::shutdown(fd, SHUT_WR);
    char buf[4096];
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(kLingerMs);
    while (std::chrono::steady_clock::now() < deadline) {
      if (!wait(fd, POLLIN, kLingerMs)) break;
      const ssize_t n = ::recv(fd, buf, sizeof(buf), MSG_DONTWAIT);
      if (n == 0) break;
      if (n < 0 && errno != EINTR && errno != EAGAIN) break;
    }
  }

  void serve(UniqueFd conn, const std::string& peer) {
    std::string buffer;
    char chunk[64 * 1024];
    Response response;
    bool have_response = false;

    while (!have_response) {
      if (!wait(conn.get(), POLLIN, kIdleTimeoutMs)) return;
      const ssize_t n = ::recv(conn.get(), chunk, sizeof(chunk), MSG_DONTWAIT);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK) continue;
        return;
      }
      if (n == 0) {
        if (buffer.empty()) return;
        response = error_response(ParseError::Malformed);
        break;
      }
      buffer.append(chunk, static_cast<std::size_t>(n));

      ParseResult parsed = parse_request(buffer);
      if (auto* req = std::get_if<Request>(&parsed)) {
        req->peer = peer;
        try {
          response = handle_request(*req, state, config);
        } catch (const std::exception& e) {
          std::cerr << "nbview: request failed: " << e.what() << '\n';
          response = error_response(500);
        }
        have_response = true;
      } else if (std::get<ParseError>(parsed) != ParseError::Incomplete) {
        response = error_response(std::get<ParseError>(parsed));
        have_response = true;
      }
    }

    if (send_response(conn.get(), response)) linger_close(conn.get());
    served.fetch_add(1, std::memory_order_relaxed);
  }

  void run() {
    while (!stopping.load()) {
      if (!wait(listener.get(), POLLIN, -1)) break;
      sockaddr_storage addr{};
      socklen_t len = sizeof(addr);
      UniqueFd conn(::accept4(listener.get(), reinterpret_cast<sockaddr*>(&addr), &len,
                              SOCK_CLOEXEC));
      if (!conn) continue;
      serve(std::move(conn), peer_name(addr));
    }
  }
};

ServerHandle::ServerHandle() = default;
ServerHandle::ServerHandle(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
ServerHandle::ServerHandle(ServerHandle&&) noexcept = default;
ServerHandle& ServerHandle::operator=(ServerHandle&& o) noexcept {
  if (this != &o) {
    stop();
    impl_ = std::move(o.impl_);
  }
  return *this;
}
ServerHandle::~ServerHandle() { stop(); }

std::uint16_t ServerHandle::port() const { return impl_ ? impl_->port : 0; }

std::uint64_t ServerHandle::requests_served() const {
  return impl_ ? impl_->served.load() : 0;
}

bool ServerHandle::running() const {
  return impl_ && impl_->thread.joinable();
}

void ServerHandle::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  impl_->stopping.store(true);
  const char byte = 1;
  [[maybe_unused]] ssize_t rc = ::write(impl_->wake_write.get(), &byte, 1);
  impl_->thread.join();
  impl_->listener.reset();
}

ServerHandle start_server(SharedState& state, ServerConfig config) {
  auto impl = std::make_unique<ServerHandle::Impl>(state, std::move(config));
  const ServerConfig& cfg = impl->config;

  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE | AI_NUMERICSERV;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(cfg.port);
  if (int rc = ::getaddrinfo(cfg.bind_address.c_str(), service.c_str(), &hints, &res);
      rc != 0) {
    throw std::system_error(std::make_error_code(std::errc::address_not_available),
                            "resolve " + cfg.bind_address + ": " + ::gai_strerror(rc));
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, &::freeaddrinfo);

  UniqueFd fd(::socket(res->ai_family, res->ai_socktype | SOCK_CLOEXEC, res->ai_protocol));
  if (!fd) throw std::system_error(errno, std::system_category(), "socket");
  int one = 1;
  ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  const std::string where = cfg.bind_address + ":" + service;
  if (::bind(fd.get(), res->ai_addr, res->ai_addrlen) != 0)
    throw std::system_error(errno, std::system_category(), "bind " + where);
  if (::listen(fd.get(), 64) != 0)
    throw std::system_error(errno, std::system_category(), "listen " + where);

  sockaddr_storage bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd.get(), reinterpret_cast<sockaddr*>(&bound), &len);
  impl->port = bound.ss_family == AF_INET6
                   ? ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port)
                   : ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);

  int pipe_fds[2];
  if (::pipe2(pipe_fds, O_CLOEXEC | O_NONBLOCK) != 0)
    throw std::system_error(errno, std::system_category(), "pipe");
  impl->wake_read.reset(pipe_fds[0]);
  impl->wake_write.reset(pipe_fds[1]);
  impl->listener = std::move(fd);

  ServerHandle::Impl* raw = impl.get();
  impl->thread = std::thread([raw] { raw->run(); });
  return ServerHandle(std::move(impl));
}

}  // namespace nbview
