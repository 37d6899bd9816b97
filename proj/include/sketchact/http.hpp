#pragma once

#include "sketchact/service.hpp"

#include "httplib.h"

#include <string>

namespace sketchact {

struct HttpOptions {
  std::string cors_origin;  // empty disables CORS headers
};

/// Routes POST /plan, /execute, /scenario and GET /scenes, /scene/{id},
/// /asset/{id} to the gateway. The request id travels in X-Request-Id too.
void mount(httplib::Server& server, const Gateway& gateway, const HttpOptions& options = {});

}  // namespace sketchact
