#pragma once

#include <cstdlib>
#include <string>

#include <httplib.h>

#include "mcc/pipeline.hpp"

namespace mcc::service {

inline constexpr int kDefaultPort = 8471;
inline constexpr const char* kPortVariable = "MCC_PORT";
inline constexpr const char* kDefaultHost = "127.0.0.1";

/// Port from MCC_PORT, else the built-in default.
inline int default_port() {
  if (const char* v = std::getenv(kPortVariable)) {
    char* end = nullptr;
    long p = std::strtol(v, &end, 10);
    if (end && *end == '\0' && p > 0 && p < 65536) return static_cast<int>(p);
  }
  return kDefaultPort;
}

/// Registers POST /v1/<verb> for every pipeline verb. Handlers share no
/// mutable state, so httplib's worker threads can run them concurrently.
inline void install_routes(httplib::Server& server) {
  for (const auto& verb : pipeline::verbs()) {
    server.Post("/v1/" + verb, [verb](const httplib::Request& req, httplib::Response& res) {
      const auto r = pipeline::respond(verb, req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    });
  }
  server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "POST, OPTIONS"}});
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    res.status = 400;
    res.set_content(R"({"error":{"code":"BadRequest","message":"unhandled request error"}})", "application/json");
  });
}

}  // namespace mcc::service
