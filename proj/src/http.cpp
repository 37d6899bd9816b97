#include "sketchact/http.hpp"

namespace sketchact {

namespace {

void cors(httplib::Response& res, const HttpOptions& options) {
  if (options.cors_origin.empty()) return;
  res.set_header("Access-Control-Allow-Origin", options.cors_origin);
  res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
  res.set_header("Access-Control-Allow-Headers", "Content-Type, X-Request-Id");
  res.set_header("Access-Control-Expose-Headers", "X-Request-Id");
}

}  // namespace

void mount(httplib::Server& server, const Gateway& gateway, const HttpOptions& options) {
  auto forward = [&gateway, options](const httplib::Request& req, httplib::Response& res) {
    const HttpReply reply = gateway.handle(req.method, req.path, req.body, req.get_header_value("X-Request-Id"));
    res.status = reply.status;
    res.set_header("X-Request-Id", reply.request_id);
    cors(res, options);
    res.set_content(reply.body, reply.content_type);
  };
  server.Post("/plan", forward);
  server.Post("/execute", forward);
  server.Post("/scenario", forward);
  server.Get("/scenes", forward);
  server.Get(R"(/scene/([^/]+))", forward);
  server.Get(R"(/asset/([^/]+))", forward);
  server.Options(R"(.*)", [options](const httplib::Request&, httplib::Response& res) {
    cors(res, options);
    res.status = 204;
  });
  server.set_error_handler([&gateway, options](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const HttpReply reply = gateway.handle(req.method, req.path, req.body, req.get_header_value("X-Request-Id"));
    res.status = reply.status;
    res.set_header("X-Request-Id", reply.request_id);
    cors(res, options);
    res.set_content(reply.body, reply.content_type);
  });
}

}  // namespace sketchact
