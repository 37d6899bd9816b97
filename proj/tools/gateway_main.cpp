#include "sketchact/http.hpp"
#include "sketchact/io.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace sketchact;

int main(int argc, char** argv) {
  CLI::App app{"sketchact-gateway: HTTP service for planning, execution and scenarios"};
  std::string bind = "127.0.0.1", data_dir, cors_origin, config;
  int port = 8765;
  app.add_option("--bind", bind, "Bind address")->capture_default_str();
  app.add_option("--port", port, "Port")->capture_default_str();
  app.add_option("--data-dir", data_dir, "Scene and asset directory (default: $SKETCHACT_DATA_DIR or .)");
  app.add_option("--cors-origin", cors_origin, "Allowed browser origin; empty disables CORS");
  app.add_option("--config", config, "JSON config with data_dir, port, bind, cors_origin");
  CLI11_PARSE(app, argc, argv);

  try {
    if (!config.empty()) {
      const Json cfg = read_json(config);
      if (data_dir.empty() && cfg.contains("data_dir")) data_dir = cfg["data_dir"].get<std::string>();
      if (cors_origin.empty() && cfg.contains("cors_origin")) cors_origin = cfg["cors_origin"].get<std::string>();
      if (!app.get_option("--port")->count() && cfg.contains("port")) port = cfg["port"].get<int>();
      if (!app.get_option("--bind")->count() && cfg.contains("bind")) bind = cfg["bind"].get<std::string>();
    }
    const Gateway gateway{SceneRegistry(data_dir.empty() ? default_data_dir() : std::filesystem::path(data_dir))};
    httplib::Server server;
    mount(server, gateway, {cors_origin});
    std::cerr << "listening on " << bind << ":" << port << "\n";
    if (!server.listen(bind, port)) {
      std::cerr << "cannot listen on " << bind << ":" << port << "\n";
      return 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return is_validation_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
