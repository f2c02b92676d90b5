#include "vplague/service/server.hpp"

#include <atomic>
#include <httplib.h>

namespace vplague::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json problems_body(const std::string& error, const std::vector<std::string>& problems) {
  return {{"error", error}, {"problems", problems}};
}

}  // namespace

struct Server::Impl {
  SessionManager& sessions;
  httplib::Server http;
  std::atomic<bool> stopping{false};

  explicit Impl(SessionManager& s) : sessions(s) { routes(); }

  std::shared_ptr<Session> find(const httplib::Request& req, httplib::Response& res) {
    auto session = sessions.get(req.matches[1]);
    if (!session) send_json(res, 404, {{"error", "unknown session '" + std::string(req.matches[1]) + "'"}});
    return session;
  }

  void routes() {
    http.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error& e) {
        send_json(res, 400, problems_body("malformed body", {e.what()}));
        return;
      }
      try {
        auto s = sessions.create(body);
        send_json(res, 201, {{"id", s->id()}, {"scenario", s->scenario_name()}, {"snapshot", *s->snapshot()}});
      } catch (const ScenarioError& e) {
        send_json(res, 400, problems_body("invalid scenario", e.problems()));
      } catch (const ValidationError& e) {
        send_json(res, 400, problems_body("invalid scenario", e.problems()));
      } catch (const std::invalid_argument& e) {
        send_json(res, 400, problems_body("invalid request", {e.what()}));
      }
    });

    http.Post(R"(/sessions/([^/]+)/control)", [this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req, res);
      if (!s) return;
      Command cmd;
      try {
        cmd = parse_command(json::parse(req.body));
      } catch (const json::parse_error& e) {
        send_json(res, 400, {{"accepted", false}, {"reason", std::string("malformed body: ") + e.what()}});
        return;
      } catch (const std::invalid_argument& e) {
        send_json(res, 400, {{"accepted", false}, {"reason", e.what()}});
        return;
      }
      const Ack ack = s->control(cmd);
      json body = {{"accepted", ack.accepted}, {"tick", ack.tick}};
      if (!ack.accepted) body["reason"] = ack.reason;
      send_json(res, ack.accepted ? 202 : (ack.reason == "command queue full" ? 503 : 400), body);
    });

    http.Get(R"(/sessions/([^/]+)/snapshot)", [this](const httplib::Request& req, httplib::Response& res) {
      if (auto s = find(req, res)) {
        json body = *s->snapshot();
        body["mode"] = std::string(to_string(s->mode()));
        body["finished"] = s->finished();
        send_json(res, 200, body);
      }
    });

    http.Get(R"(/sessions/([^/]+)/avatars)", [this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req, res);
      if (!s) return;
      if (!req.has_param("zone")) {
        send_json(res, 400, {{"error", "query parameter 'zone' is required"}});
        return;
      }
      try {
        const std::size_t page = req.has_param("page") ? std::stoul(req.get_param_value("page")) : 0;
        const std::size_t size = req.has_param("page_size") ? std::stoul(req.get_param_value("page_size")) : 100;
        send_json(res, 200, s->avatars(req.get_param_value("zone"), page, size));
      } catch (const std::invalid_argument& e) {
        send_json(res, 400, {{"error", e.what()}});
      } catch (const std::out_of_range&) {
        send_json(res, 400, {{"error", "page out of range"}});
      }
    });

    http.Get(R"(/sessions/([^/]+)/stream)", [this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req, res);
      if (!s) return;
      auto cursor = std::make_shared<std::size_t>(s->subscribe_cursor());
      res.set_chunked_content_provider("application/x-ndjson", [this, s, cursor](std::size_t, httplib::DataSink& sink) {
        if (stopping) {
          sink.done();
          return true;
        }
        auto [messages, next] = s->feed_since(*cursor, std::chrono::milliseconds(200));
        *cursor = next;
        for (const auto& m : messages) {
          const std::string line = m.dump() + "\n";
          if (!sink.write(line.data(), line.size())) return false;
        }
        return true;
      });
    });

    http.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"sessions", sessions.ids()}});
    });
  }
};

Server::Server(SessionManager& sessions) : impl_(std::make_unique<Impl>(sessions)) {}
Server::~Server() { stop(); }

bool Server::listen(const std::string& host, int port) { return impl_->http.listen(host, port); }
int Server::bind_any_port(const std::string& host) { return impl_->http.bind_to_any_port(host); }
bool Server::listen_after_bind() { return impl_->http.listen_after_bind(); }
bool Server::running() const { return impl_->http.is_running(); }

void Server::stop() {
  impl_->stopping = true;
  if (impl_->http.is_running()) impl_->http.stop();
}

}  // namespace vplague::service
