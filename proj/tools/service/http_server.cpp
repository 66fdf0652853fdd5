#include "service/http_server.hpp"

#include <charconv>
#include <optional>

#include <httplib.h>

namespace intentmine::service {

namespace {

void send(httplib::Response& res, const api::Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

std::optional<std::size_t> query_number(const httplib::Request& req, const char* key, std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string value = req.get_param_value(key);
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) return std::nullopt;
  return out;
}

// Ids outside int range cannot name a cluster; map them to -1 (a 404).
int cluster_id(const httplib::Request& req) {
  const std::string text = req.matches[1].str();
  int out = -1;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() ? out : -1;
}

}  // namespace

void register_routes(httplib::Server& server, api::Session& session) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });
  server.Post("/session", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, session.load_from_request(req.body));
  });
  server.Get("/clusters", [&](const httplib::Request&, httplib::Response& res) { send(res, session.clusters()); });
  server.Get(R"(/clusters/(-?\d+)/members)", [&](const httplib::Request& req, httplib::Response& res) {
    const auto page = query_number(req, "page", 0);
    const auto page_size = query_number(req, "page_size", 20);
    if (!page || !page_size) {
      send(res, {400, R"({"error":"page and page_size must be non-negative integers"})"});
      return;
    }
    send(res, session.members(cluster_id(req), *page, *page_size));
  });
  server.Post(R"(/clusters/(-?\d+)/label)", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, session.label(cluster_id(req), req.body));
  });
  server.Post("/propagate", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, session.propagate(req.body));
  });
  server.Get("/progress", [&](const httplib::Request&, httplib::Response& res) { send(res, session.progress()); });
  server.Get("/export", [&](const httplib::Request&, httplib::Response& res) {
    send(res, session.export_corpus());
  });

  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(nlohmann::json{{"error", message}}.dump(), "application/json");
  });
}

bool serve(api::Session& session, const std::string& host, int port) {
  httplib::Server server;
  register_routes(server, session);
  return server.listen(host, port);
}

}  // namespace intentmine::service
