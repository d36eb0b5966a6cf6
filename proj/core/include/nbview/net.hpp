#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace nbview {

// Owning POSIX file descriptor.
class UniqueFd {
 public:
  UniqueFd() = default;
  explicit UniqueFd(int fd) : fd_(fd) {}
  UniqueFd(UniqueFd&& o) noexcept : fd_(o.release()) {}
  UniqueFd& operator=(UniqueFd&& o) noexcept {
    if (this != &o) reset(o.release());
    return *this;
  }
  UniqueFd(const UniqueFd&) = delete;
  UniqueFd& operator=(const UniqueFd&) = delete;
  ~UniqueFd() { reset(); }

  int get() const { return fd_; }
  explicit operator bool() const { return fd_ >= 0; }
  int release() {
    int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset(int fd = -1);

 private:
  int fd_ = -1;
};

// Connects over TCP; throws std::system_error on failure.
UniqueFd connect_tcp(const std::string& host, std::uint16_t port);

// Writes all of data; returns false if the peer went away.
bool send_all(int fd, std::string_view data);

// Sends a raw request and reads until the server closes the connection.
// Throws std::system_error on connect failure or timeout.
std::string http_exchange(const std::string& host, std::uint16_t port,
                          std::string_view request,
                          std::chrono::milliseconds timeout = std::chrono::seconds(30));

struct HttpResponse {
  int status = 0;
  std::map<std::string, std::string> headers;  // names lowercased
  std::string body;
};

// Splits a complete raw response. Returns nullopt if it is not well formed
// or the body length disagrees with Content-Length.
std::optional<HttpResponse> parse_response(std::string_view raw);

std::string make_get(std::string_view path);
std::string make_post(std::string_view path, std::string_view body);

}  // namespace nbview
