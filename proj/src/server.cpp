#include "glossfill/exercise.hpp"

#include <httplib.h>

namespace glossfill {

struct HttpServer::Impl {
  ExerciseService& service;
  ServerOptions opts;
  httplib::Server server;

  Impl(ExerciseService& s, ServerOptions o) : service(s), opts(std::move(o)) {}

  static void send(httplib::Response& res, const ExerciseService::Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  }

  void routes() {
    server.Get("/api/session", [this](const httplib::Request&, httplib::Response& res) { send(res, service.create_session()); });
    server.Get("/api/exercise/next", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> dialect;
      if (req.has_param("dialect") && !req.get_param_value("dialect").empty()) dialect = req.get_param_value("dialect");
      send(res, service.next(req.get_param_value("session"), dialect));
    });
    server.Post(R"(/api/exercise/([^/]+)/answer)", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, service.answer(req.matches[1].str(), req.body));
    });
    server.Get("/api/progress", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, service.progress(req.get_param_value("session")));
    });
    if (!opts.static_dir.empty() && !server.set_mount_point("/", opts.static_dir))
      throw ExerciseError("BindFailed", "static directory not found: " + opts.static_dir);
  }
};

HttpServer::HttpServer(ExerciseService& service, ServerOptions opts) : impl_(std::make_unique<Impl>(service, std::move(opts))) {
  impl_->routes();
}

HttpServer::~HttpServer() = default;

int HttpServer::bind() {
  auto& o = impl_->opts;
  if (o.port == 0) {
    const int port = impl_->server.bind_to_any_port(o.host);
    if (port < 0) throw ExerciseError("BindFailed", "could not bind " + o.host);
    o.port = port;
  } else if (!impl_->server.bind_to_port(o.host, o.port)) {
    throw ExerciseError("BindFailed", "could not bind " + o.host + ":" + std::to_string(o.port));
  }
  return o.port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

} // namespace glossfill
