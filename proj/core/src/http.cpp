#include "nbview/http.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

namespace nbview {

namespace {

constexpr std::size_t kMaxMethodLength = 16;

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool is_line_char(unsigned char c) { return c == ' ' || (c >= 0x21 && c <= 0x7e); }

bool is_field_char(unsigned char c) {
  return c == ' ' || c == '\t' || (c >= 0x21 && c <= 0x7e) || c >= 0x80;
}

bool is_token_char(unsigned char c) {
  if (std::isalnum(c)) return true;
  return std::string_view("!#$%&'*+-.^_`|~").find(static_cast<char>(c)) !=
         std::string_view::npos;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim_ows(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Validates an unterminated tail so garbage is rejected without waiting for
// a CRLF that may never come.
template <class Pred>
ParseError incomplete_or_malformed(std::string_view tail, Pred valid) {
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const auto c = static_cast<unsigned char>(tail[i]);
    if (c == '\r') {
      if (i + 1 < tail.size()) return ParseError::Malformed;  // CR not before LF
      continue;
    }
    if (!valid(c)) return ParseError::Malformed;
  }
  return ParseError::Incomplete;
}

std::optional<std::size_t> parse_content_length(std::string_view v) {
  if (v.empty() || v.size() > 18) return std::nullopt;
  std::size_t n = 0;
  for (char c : v) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + static_cast<std::size_t>(c - '0');
  }
  return n;
}

}  // namespace

ParseResult parse_request(std::string_view in) {
  // Method token.
  std::size_t pos = 0;
  while (pos < in.size() && is_upper(in[pos]) && pos <= kMaxMethodLength) ++pos;
  if (pos > kMaxMethodLength) return ParseError::Malformed;
  if (pos == in.size()) return ParseError::Incomplete;
  if (pos == 0 || in[pos] != ' ') return ParseError::Malformed;

  const std::size_t line_end = in.find("\r\n");
  if (line_end == std::string_view::npos) {
    if (in.size() > kMaxHeaderSize) return ParseError::Malformed;
    return incomplete_or_malformed(in.substr(pos), is_line_char);
  }

  const std::string_view line = in.substr(0, line_end);
  if (!std::all_of(line.begin(), line.end(),
                   [](char c) { return is_line_char(static_cast<unsigned char>(c)); }))
    return ParseError::Malformed;

  const std::size_t sp1 = pos;
  const std::size_t sp2 = line.find(' ', sp1 + 1);
  if (sp2 == std::string_view::npos || line.find(' ', sp2 + 1) != std::string_view::npos)
    return ParseError::Malformed;
  const std::string_view method = line.substr(0, sp1);
  const std::string_view target = line.substr(sp1 + 1, sp2 - sp1 - 1);
  const std::string_view version = line.substr(sp2 + 1);
  if (target.empty() || target.front() != '/') return ParseError::Malformed;
  if (version.size() != 8 || version.substr(0, 7) != "HTTP/1." ||
      !std::isdigit(static_cast<unsigned char>(version[7])))
    return ParseError::Malformed;

  Request req;
  if (method == "GET") {
    req.method = Method::Get;
  } else if (method == "POST") {
    req.method = Method::Post;
  } else {
    return ParseError::MethodNotAllowed;
  }
  req.path = std::string(target);

  // Header lines.
  pos = line_end + 2;
  std::optional<std::size_t> content_length;
  for (;;) {
    const std::size_t eol = in.find("\r\n", pos);
    if (eol == std::string_view::npos) {
      if (in.size() > kMaxHeaderSize) return ParseError::Malformed;
      return incomplete_or_malformed(in.substr(pos), is_field_char);
    }
    if (eol + 2 > kMaxHeaderSize) return ParseError::Malformed;
    const std::string_view field = in.substr(pos, eol - pos);
    pos = eol + 2;
    if (field.empty()) break;

    const std::size_t colon = field.find(':');
    if (colon == std::string_view::npos || colon == 0) return ParseError::Malformed;
    const std::string_view name = field.substr(0, colon);
    if (!std::all_of(name.begin(), name.end(),
                     [](char c) { return is_token_char(static_cast<unsigned char>(c)); }))
      return ParseError::Malformed;
    const std::string_view raw_value = field.substr(colon + 1);
    if (!std::all_of(raw_value.begin(), raw_value.end(),
                     [](char c) { return is_field_char(static_cast<unsigned char>(c)); }))
      return ParseError::Malformed;
    const std::string_view value = trim_ows(raw_value);
    std::string key = lowercase(name);

    if (key == "transfer-encoding") return ParseError::Malformed;
    if (key == "content-length") {
      const auto n = parse_content_length(value);
      if (!n) return ParseError::Malformed;
      if (content_length && *content_length != *n) return ParseError::Malformed;
      content_length = n;
    }

    auto [it, inserted] = req.headers.emplace(std::move(key), std::string(value));
    if (!inserted) it->second += ", " + std::string(value);
  }

  const std::size_t body_size = content_length.value_or(0);
  if (body_size > kMaxBodySize) return ParseError::BodyTooLarge;
  if (in.size() - pos < body_size) return ParseError::Incomplete;
  req.body = std::string(in.substr(pos, body_size));
  return req;
}

std::string_view reason_phrase(int status) {
  switch (status) {
    case 200: return "OK";
    case 400: return "Bad Request";
    case 404: return "Not Found";
    case 405: return "Method Not Allowed";
    case 413: return "Content Too Large";
    case 422: return "Unprocessable Content";
    case 500: return "Internal Server Error";
    default: return "Unknown";
  }
}

std::string Response::head() const {
  std::ostringstream out;
  out << "HTTP/1.1 " << status << ' ' << reason_phrase(status) << "\r\n"
      << "Content-Type: " << content_type << "\r\n"
      << "Content-Length: " << body.size() << "\r\n"
      << "Cache-Control: no-store\r\n"
      << "Connection: close\r\n\r\n";
  return out.str();
}

Response error_response(int status) {
  Response r;
  r.status = status;
  r.body = lowercase(reason_phrase(status)) + "\n";
  return r;
}

Response error_response(ParseError error) {
  switch (error) {
    case ParseError::MethodNotAllowed: return error_response(405);
    case ParseError::BodyTooLarge: return error_response(413);
    case ParseError::Incomplete:
    case ParseError::Malformed: break;
  }
  return error_response(400);
}

namespace {

Response viewer_page(const ServerConfig& config) {
  Response r;
  r.content_type = "text/html; charset=utf-8";
  if (!config.viewer_page) {
    r.body = std::string(embedded_viewer_page());
    return r;
  }
  std::ifstream in(*config.viewer_page, std::ios::binary);
  if (!in) return error_response(500);
  r.body.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return r;
}

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

Response handle_request(const Request& req, SharedState& state,
                        const ServerConfig& config) {
  const std::string_view path =
      std::string_view(req.path).substr(0, req.path.find('?'));

  if (req.method == Method::Get) {
    if (path == "/") return viewer_page(config);
    if (path == "/simulation") {
      Response r;
      r.content_type = "application/octet-stream";
      const Bytes snap = state.capture_snapshot();
      r.body.assign(snap.begin(), snap.end());
      return r;
    }
    return error_response(404);
  }

  if (path == "/cmd") {
    const auto verb = parse_verb(req.body);
    if (!verb) return error_response(422);
    state.submit_command(Command{*verb, req.peer});
    Response r;
    r.body = "ok\n";
    return r;
  }
  if (path == "/shot") {
    ScreenshotOutcome outcome;
    try {
      outcome = state.store_screenshot(as_bytes(req.body));
    } catch (const ScreenshotError&) {
      return error_response(500);
    }
    Response r;
    if (const auto* stored = std::get_if<ScreenshotStored>(&outcome)) {
      r.body = stored->path.string() + "\n";
    } else {
      r.body = "discarded\n";
    }
    return r;
  }
  return error_response(404);
}

}  // namespace nbview
