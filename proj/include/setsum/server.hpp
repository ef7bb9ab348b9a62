#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace setsum {

struct ApiConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path data_dir;  // holds <term>/<course_id>.json
  std::string token;
  std::vector<std::string> cors_allowlist;

  /// Throws InvalidArgument when the token is empty.
  void validate() const;
};

inline constexpr const char* kTokenEnvVar = "SETSUM_API_TOKEN";

/// JSON with the ApiConfig fields. A non-empty `token_override` (normally
/// the SETSUM_API_TOKEN environment variable) replaces the file's token.
ApiConfig api_config_from_json(const nlohmann::json& j, std::optional<std::string> token_override = std::nullopt);
ApiConfig load_api_config(const std::filesystem::path& path);

struct ApiResponse {
  int status = 200;
  std::string body;
};

/// Transport-independent request handling over precomputed analyses on disk.
/// Read-only; every call re-reads the file it needs.
class Api {
 public:
  explicit Api(ApiConfig config);

  /// `path` is the decoded request path; `authorization` the raw header value.
  ApiResponse handle(std::string_view method, std::string_view path, std::string_view authorization) const;

  /// Origin to echo in Access-Control-Allow-Origin, if allowed.
  std::optional<std::string> allowed_origin(std::string_view origin) const;

  const ApiConfig& config() const noexcept { return config_; }

 private:
  ApiConfig config_;
};

/// cpp-httplib binding of Api.
class HttpServer {
 public:
  explicit HttpServer(ApiConfig config);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the configured address and returns the bound port.
  int bind();
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace setsum
