#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "nbview/steering.hpp"

namespace nbview {

enum class Method { Get, Post };

struct Request {
  Method method = Method::Get;
  std::string path;                            // request target, starts with '/'
  std::map<std::string, std::string> headers;  // names lowercased
  std::string body;
  std::string peer;  // filled in by the server, not parsed
};

enum class ParseError {
  Incomplete,        // valid so far, needs more bytes
  Malformed,         // 400
  MethodNotAllowed,  // 405
  BodyTooLarge,      // 413
};

inline constexpr std::size_t kMaxBodySize = 16u << 20;
inline constexpr std::size_t kMaxHeaderSize = 64u << 10;

using ParseResult = std::variant<Request, ParseError>;

// Parses "METHOD SP target SP HTTP/1.x CRLF", header lines up to CRLFCRLF,
// then exactly Content-Length body bytes. Bytes past the body are ignored.
ParseResult parse_request(std::string_view bytes);

struct Response {
  int status = 200;
  std::string content_type = "text/plain; charset=utf-8";
  std::string body;

  // Status line, Content-Type, Content-Length, Cache-Control,
  // Connection: close, blank line, body.
  std::string head() const;
  std::string to_bytes() const { return head() + body; }
};

std::string_view reason_phrase(int status);

Response error_response(int status);
Response error_response(ParseError error);

struct ServerConfig {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 1234;  // 0 picks an ephemeral port
  // Served for GET / instead of the embedded page when set; read on every
  // request.
  std::optional<std::filesystem::path> viewer_page;
};

// Routing:
//   GET  /            viewer page
//   GET  /simulation  current snapshot
//   POST /cmd         pause | resume | step | quit
//   POST /shot        screenshot upload
// Everything else is 404. The query string is ignored for routing.
Response handle_request(const Request& request, SharedState& state,
                        const ServerConfig& config);

// The viewer page compiled into the binary.
std::string_view embedded_viewer_page();

}  // namespace nbview
