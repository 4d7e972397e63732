#include "sieu/service.hpp"

#include <httplib.h>

#include "sieu/error.hpp"

namespace sieu {

struct Service::Impl {
  std::shared_ptr<const Engine> engine;
  httplib::Server server;
};

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

std::optional<std::size_t> parse_k(const httplib::Request& req) {
  if (!req.has_param("k")) return std::nullopt;
  auto s = req.get_param_value("k");
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 1 || v > 1000) throw RequestError(400, "k must be an integer in 1..1000");
  return static_cast<std::size_t>(v);
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const RequestError& e) {
    send_error(res, e.status(), e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

}  // namespace

Service::Service(std::shared_ptr<const Engine> engine) : impl_(std::make_unique<Impl>()) {
  impl_->engine = std::move(engine);
  auto& srv = impl_->server;
  const auto* eng = impl_->engine.get();
  auto origin = eng->config().service.cors_origin;

  srv.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
    if (origin.empty()) return;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });
  srv.Get("/api/search", [eng](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto k = parse_k(req);
      send_json(res, 200, to_json(eng->search(req.get_param_value("q"), k)));
    });
  });
  srv.Get("/api/expand", [eng](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, expand_to_json(eng->expand(req.get_param_value("q")))); });
  });

  const auto& dir = eng->config().service.static_dir;
  if (!dir.empty()) srv.set_mount_point("/", dir.string());
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool Service::running() const { return impl_->server.is_running(); }

}  // namespace sieu
