#include "setsum/server.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "httplib.h"
#include "setsum/error.hpp"

namespace setsum {

using nlohmann::json;

void ApiConfig::validate() const {
  if (token.empty()) throw Error(Errc::InvalidArgument, "API token must not be empty");
}

ApiConfig api_config_from_json(const json& j, std::optional<std::string> token_override) {
  ApiConfig c;
  c.bind_address = j.value("bind_address", c.bind_address);
  c.port = j.value("port", c.port);
  c.data_dir = j.at("data_dir").get<std::string>();
  c.token = j.value("token", std::string());
  c.cors_allowlist = j.value("cors_allowlist", std::vector<std::string>{});
  if (token_override && !token_override->empty()) c.token = *token_override;
  c.validate();
  return c;
}

ApiConfig load_api_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::optional<std::string> env;
  if (const char* v = std::getenv(kTokenEnvVar)) env = v;
  auto config = api_config_from_json(json::parse(in), env);
  if (config.data_dir.is_relative()) config.data_dir = path.parent_path() / config.data_dir;
  return config;
}

namespace {

ApiResponse reply(int status, const json& body) { return {status, body.dump()}; }
ApiResponse error_reply(int status, std::string_view code) { return reply(status, {{"error", code}}); }

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    const auto next = std::min(path.find('/', pos), path.size());
    if (next > pos) parts.push_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

// Path components must not be able to escape the data directory.
bool safe_component(std::string_view s) {
  if (s.empty() || s == "." || s == "..") return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
  });
}

std::optional<json> load_course(const std::filesystem::path& root, std::string_view term, std::string_view id) {
  if (!safe_component(term) || !safe_component(id)) return std::nullopt;
  const auto file = root / std::string(term) / (std::string(id) + ".json");
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  return json::parse(in);
}

json list_courses(const std::filesystem::path& root) {
  std::vector<std::pair<std::string, std::string>> keys;
  std::error_code ec;
  if (std::filesystem::is_directory(root, ec)) {
    for (const auto& term_dir : std::filesystem::directory_iterator(root)) {
      if (!term_dir.is_directory()) continue;
      for (const auto& f : std::filesystem::directory_iterator(term_dir.path())) {
        if (!f.is_regular_file() || f.path().extension() != ".json") continue;
        keys.emplace_back(term_dir.path().filename().string(), f.path().stem().string());
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  json out = json::array();
  for (const auto& [term, id] : keys) out.push_back({{"term", term}, {"course_id", id}});
  return out;
}

json find_by(const json& items, std::string_view field, std::string_view value) {
  for (const auto& item : items) {
    if (item.at(std::string(field)).get<std::string>() == value) return item;
  }
  return nullptr;
}

}  // namespace

Api::Api(ApiConfig config) : config_(std::move(config)) { config_.validate(); }

std::optional<std::string> Api::allowed_origin(std::string_view origin) const {
  for (const auto& allowed : config_.cors_allowlist) {
    if (allowed == "*" || allowed == origin) return std::string(origin);
  }
  return std::nullopt;
}

ApiResponse Api::handle(std::string_view method, std::string_view path, std::string_view authorization) const {
  const auto parts = split_path(path);
  if (parts.size() == 2 && parts[0] == "api" && parts[1] == "health") {
    if (method != "GET") return error_reply(405, "method_not_allowed");
    return reply(200, {{"status", "ok"}});
  }
  if (parts.empty() || parts[0] != "api") return error_reply(404, "not_found");

  // Authentication precedes any lookup so unauthorized callers learn nothing.
  if (authorization != "Bearer " + config_.token) return error_reply(401, "unauthorized");
  if (method != "GET") return error_reply(405, "method_not_allowed");
  if (parts.size() < 2 || parts[1] != "courses") return error_reply(404, "not_found");

  if (parts.size() == 2) return reply(200, list_courses(config_.data_dir));
  if (parts.size() < 5) return error_reply(404, "not_found");

  const std::string_view term = parts[2], id = parts[3];
  const bool ratings_route = parts.size() == 5 && parts[4] == "ratings";
  const bool comments_route = parts.size() >= 7 && parts[4] == "comments";
  if (!ratings_route && !comments_route) return error_reply(404, "not_found");

  std::string question;
  if (comments_route) {
    question = std::string(parts[5]);
    if (question != "course" && question != "instructor") return error_reply(400, "bad_question");
  }

  const auto course = load_course(config_.data_dir, term, id);
  if (!course) return error_reply(404, "not_found");
  json header = {{"term", course->at("term")}, {"course_id", course->at("course_id")}};

  if (ratings_route) {
    json body = header;
    body["enrollment"] = course->at("enrollment");
    body["course"] = course->at("ratings").at("course");
    body["instructor"] = course->at("ratings").at("instructor");
    return reply(200, body);
  }

  const json& qa = course->at("comments").at(question);
  json body = header;
  body["question"] = question;

  if (parts.size() == 7 && parts[6] == "aspects") {
    body["stats"] = qa.at("stats");
    body["bubbles"] = qa.at("bubbles");
    return reply(200, body);
  }
  if (parts.size() == 7 && parts[6] == "sentences") {
    body["sentences"] = qa.at("sentences");
    return reply(200, body);
  }
  if (parts.size() == 9 && parts[6] == "aspects" && parts[8] == "summary") {
    const std::string aspect(parts[7]);
    const json summary = find_by(qa.at("summaries"), "aspect", aspect);
    if (summary.is_null()) return error_reply(404, "not_found");
    json sentences = json::array();
    for (const auto& sid : summary["ours"]["sentence_ids"]) {
      const json s = find_by(qa.at("sentences"), "id", sid.get<std::string>());
      if (s.is_null()) continue;
      const auto rid = s["response_id"].get<std::string>();
      sentences.push_back({{"id", s["id"]},
                           {"response_id", s["response_id"]},
                           {"index_in_comment", s["index_in_comment"]},
                           {"text", s["text"]},
                           {"p_positive", s["p_positive"]},
                           {"label", s["label"]},
                           {"centrality", s.at("centrality").at(aspect)},
                           {"parent_comment", qa.at("comments").at(rid)}});
    }
    body["aspect"] = aspect;
    body["cluster_size"] = summary["cluster_size"];
    body["k_requested"] = summary["ours"]["k_requested"];
    body["score"] = summary["ours"]["score"];
    body["baseline"] = summary["baseline"];
    body["sentences"] = sentences;
    return reply(200, body);
  }
  return error_reply(404, "not_found");
}

struct HttpServer::Impl {
  explicit Impl(ApiConfig config) : api(std::move(config)) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      ApiResponse r;
      try {
        r = api.handle(req.method, req.path, req.get_header_value("Authorization"));
      } catch (const std::exception& e) {
        r = {500, json{{"error", "internal"}, {"detail", e.what()}}.dump()};
      }
      if (auto origin = api.allowed_origin(req.get_header_value("Origin"))) {
        res.set_header("Access-Control-Allow-Origin", *origin);
        res.set_header("Vary", "Origin");
      }
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    // Browsers preflight requests that carry an Authorization header.
    server.Options(".*", [this](const httplib::Request& req, httplib::Response& res) {
      if (auto origin = api.allowed_origin(req.get_header_value("Origin"))) {
        res.set_header("Access-Control-Allow-Origin", *origin);
        res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Authorization");
        res.set_header("Vary", "Origin");
      }
      res.status = 204;
    });
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
  }

  Api api;
  httplib::Server server;
};

HttpServer::HttpServer(ApiConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
HttpServer::~HttpServer() = default;

int HttpServer::bind() {
  const auto& c = impl_->api.config();
  if (c.port == 0) return impl_->server.bind_to_any_port(c.bind_address);
  if (!impl_->server.bind_to_port(c.bind_address, c.port)) {
    throw Error(Errc::Io, "cannot bind " + c.bind_address + ":" + std::to_string(c.port));
  }
  return c.port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace setsum
