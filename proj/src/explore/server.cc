// Apache License, Version 2.0, refer to LICENSE.txt

#include "tg/server.hh"

#include <charconv>

#include "httplib.h"
#include "tg/error.hh"

namespace tg {

namespace {

constexpr std::size_t kDefaultTop = 10;
constexpr std::size_t kMaxTop = 1000;

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

// Parses a non-negative integer query or path parameter.
std::optional<long long> to_int(const std::string& s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

std::optional<std::size_t> top_param(const httplib::Request& req) {
  if (!req.has_param("top")) return kDefaultTop;
  auto v = to_int(req.get_param_value("top"));
  if (!v || *v < 1 || static_cast<std::size_t>(*v) > kMaxTop) return std::nullopt;
  return static_cast<std::size_t>(*v);
}

}  // namespace

struct ApiServer::Impl {
  const Explorer& explorer;
  httplib::Server server;

  explicit Impl(const Explorer& ex) : explorer(ex) {
    server.Get("/meta", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, explorer.meta_json());
    });
    server.Get("/flat", [this](const httplib::Request& req, httplib::Response& res) {
      const auto top = top_param(req);
      const auto n = req.has_param("n") ? to_int(req.get_param_value("n")) : std::nullopt;
      const int v = explorer.dendrogram().n_leaves;
      if (!n || *n < 1 || *n > v) return send_error(res, 400, "n must be an integer in [1, " + std::to_string(v) + "]");
      if (!top) return send_error(res, 400, "top must be an integer in [1, 1000]");
      send_json(res, 200, explorer.flat_json(static_cast<int>(*n), *top));
    });
    server.Get(R"(/node/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto id = to_int(req.matches[1]);
      const auto top = top_param(req);
      if (!top) return send_error(res, 400, "top must be an integer in [1, 1000]");
      if (!id || !explorer.has_node(static_cast<TopicId>(*id))) return send_error(res, 404, "no such node");
      send_json(res, 200, explorer.node_json(static_cast<TopicId>(*id), *top));
    });
    server.Get(R"(/path/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto id = to_int(req.matches[1]);
      if (!id || !explorer.has_node(static_cast<TopicId>(*id))) return send_error(res, 404, "no such node");
      send_json(res, 200, explorer.path_json(static_cast<TopicId>(*id)));
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) send_error(res, res.status, "not found");
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      } catch (...) {
        send_error(res, 500, "internal error");
      }
    });
  }
};

ApiServer::ApiServer(const Explorer& explorer) : impl_(std::make_unique<Impl>(explorer)) {}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw io_error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw io_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ApiServer::listen() { impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace tg
