#pragma once

#include "sketchact/io.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace sketchact {

/// Data directory from SKETCHACT_DATA_DIR, else the working directory.
std::filesystem::path default_data_dir();

/// Scene and asset ids found under a data directory. Built once; read-only
/// afterwards. Scenes are *.json files holding scene/1 or scenario/1
/// documents, assets are files under assets/.
class SceneRegistry {
 public:
  SceneRegistry() = default;
  explicit SceneRegistry(const std::filesystem::path& data_dir);

  const std::map<std::string, std::filesystem::path>& scenes() const { return scenes_; }
  const std::filesystem::path& scene_path(const std::string& id) const;  // throws NotFound
  const std::filesystem::path& asset_path(const std::string& id) const;  // throws NotFound
  Json listing() const;

 private:
  std::map<std::string, std::filesystem::path> scenes_;
  std::map<std::string, std::filesystem::path> assets_;
};

/// Request documents shared by the CLI and the gateway:
///   plan:     {sketch?, scene?, scene_ref?, params?, policy?}
///   execute:  plan fields + {seed?, noise?, tolerance_profile?}
///   scenario: a scenario spec {category, scene_type?, seed?, angles?, clutter?}
/// "scene" may hold a scene/1 or a scenario/1 document; a scenario also
/// supplies the sketch, the reference path and the coverage area.
/// scene_ref is resolved through the registry and behaves like "scene".
Json plan_payload(const Json& request, const SceneRegistry* registry = nullptr);
Json execute_payload(const Json& request, const SceneRegistry* registry = nullptr);
Json scenario_payload(const Json& request);

/// Canonical scene document for an id (scenario files are passed through).
Json scene_payload(const std::string& id, const SceneRegistry& registry);

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::string request_id;
};

/// Transport-free request handling. Bodies are envelopes
/// {"request_id": ..., "payload": ...}; a bare payload is accepted too.
/// Replies echo the request id and carry either "payload" or
/// "error": {code, message, location}.
class Gateway {
 public:
  explicit Gateway(SceneRegistry registry) : registry_(std::move(registry)) {}

  HttpReply handle(const std::string& method, const std::string& path, const std::string& body,
                   const std::string& header_request_id = {}) const;

 private:
  SceneRegistry registry_;
};

/// HTTP status for an error code: 400 for validation, 404 for NotFound,
/// 500 otherwise.
int http_status(ErrorCode code);

}  // namespace sketchact
