#include "csm/service.hpp"

#include <charconv>
#include <sstream>

#include <spdlog/spdlog.h>

#include "httplib.h"

#include "csm/errors.hpp"

namespace csm {

namespace {

using Params = std::multimap<std::string, std::string>;

std::optional<std::string> param(const Params& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

bool parse_bool(const std::string& name, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw QueryError(name + " must be true or false");
}

double parse_number(const std::string& name, const std::string& v) {
  double out = 0.0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) throw QueryError(name + " must be a number");
  return out;
}

Json error_body(const std::string& message) { return {{"error", message}}; }

template <class F>
Response guarded(F&& f) {
  try {
    return f();
  } catch (const QueryError& e) {
    return {400, error_body(e.what())};
  } catch (const NotFoundError& e) {
    return {404, error_body(e.what())};
  } catch (const ProjectionError& e) {
    return {400, error_body(e.what())};
  }
}

}  // namespace

Query parse_query(const Params& params) {
  Query q;
  if (auto v = param(params, "kind"); v && *v != "all") {
    q.kinds.clear();
    for (const auto& name : split_list(*v)) {
      auto kind = parse_interaction_kind(name);
      if (!kind) throw QueryError("unknown interaction kind: " + name);
      q.kinds.insert(*kind);
    }
  }
  if (auto v = param(params, "sort")) {
    auto m = parse_measure(*v);
    if (!m) throw QueryError("unknown measure: " + *v);
    q.sort_by = *m;
  }
  if (auto v = param(params, "desc")) q.descending = parse_bool("desc", *v);
  for (auto m : kAllMeasures) {
    const std::string name = "min_" + std::string(to_string(m));
    if (auto v = param(params, name)) q.minimums[m] = parse_number(name, *v);
  }
  if (auto v = param(params, "limit")) {
    std::size_t limit = 0;
    auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), limit);
    if (ec != std::errc() || end != v->data() + v->size()) throw QueryError("limit must be a non-negative integer");
    q.limit = limit;
  }
  if (auto v = param(params, "pair")) {
    auto names = split_list(*v);
    if (names.size() != 2) throw QueryError("pair must name two artifacts: a,b");
    q.pair = std::make_pair(names[0], names[1]);
  }
  if (auto v = param(params, "include_boundary")) q.include_boundary = parse_bool("include_boundary", *v);
  if (auto v = param(params, "include_undefined")) q.include_undefined = parse_bool("include_undefined", *v);
  return q;
}

ApiHandler::ApiHandler(const Explorer& explorer)
    : explorer_(explorer), model_doc_(export_model(explorer.model(), explorer.annotation())) {}

Response ApiHandler::health() const { return {200, {{"status", "ok"}}}; }

Response ApiHandler::model() const { return {200, model_doc_}; }

Response ApiHandler::projection(const Params& params) const {
  return guarded([&]() -> Response {
    auto v = param(params, "artifacts");
    if (!v) throw QueryError("artifacts parameter is required");
    std::vector<std::size_t> indices;
    for (const auto& name : split_list(*v)) indices.push_back(explorer_.artifact_index(name));
    const ProjectionIndexSet idx(indices, explorer_.artifacts().size());
    const auto model = project_model(explorer_.model(), idx);
    const auto log = project_log(explorer_.log(), idx);
    return {200, export_model(model, annotate(model, log))};
  });
}

Response ApiHandler::interactions(const Params& params) const {
  return guarded([&]() -> Response {
    const auto q = parse_query(params);
    return {200, export_interactions(explorer_.enumerate(q), explorer_.artifacts())};
  });
}

Response ApiHandler::highlight(const Params& params) const {
  return guarded([&]() -> Response {
    auto name = param(params, "artifact");
    if (!name) throw QueryError("artifact parameter is required");
    Anchor anchor;
    anchor.artifact = explorer_.artifact_index(*name);
    auto state = param(params, "state");
    auto from = param(params, "from");
    auto to = param(params, "to");
    if (state && !from && !to) {
      anchor.from = explorer_.state_index(anchor.artifact, *state);
    } else if (!state && from && to) {
      anchor.from = explorer_.state_index(anchor.artifact, *from);
      anchor.to = explorer_.state_index(anchor.artifact, *to);
    } else {
      throw QueryError("give either state, or from and to");
    }
    return {200, highlight_to_json(explorer_.highlight(anchor), explorer_.artifacts())};
  });
}

Service::Service(const Explorer& explorer, std::optional<std::filesystem::path> ui_dir)
    : handler_(explorer), server_(std::make_unique<httplib::Server>()) {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  };
  auto params = [](const httplib::Request& req) {
    return Params(req.params.begin(), req.params.end());
  };
  server_->Get("/api/health", [=, this](const httplib::Request&, httplib::Response& res) { reply(res, handler_.health()); });
  server_->Get("/api/model", [=, this](const httplib::Request&, httplib::Response& res) { reply(res, handler_.model()); });
  server_->Get("/api/model/projection", [=, this](const httplib::Request& req, httplib::Response& res) {
    reply(res, handler_.projection(params(req)));
  });
  server_->Get("/api/interactions", [=, this](const httplib::Request& req, httplib::Response& res) {
    reply(res, handler_.interactions(params(req)));
  });
  server_->Get("/api/highlight", [=, this](const httplib::Request& req, httplib::Response& res) {
    reply(res, handler_.highlight(params(req)));
  });
  // SO_REUSEPORT (the library default) would let a second server share a busy port.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  server_->set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
  });
  if (ui_dir) {
    if (!std::filesystem::is_directory(*ui_dir)) throw IoError("UI directory not found: " + ui_dir->string());
    if (!server_->set_mount_point("/", ui_dir->string())) throw IoError("cannot serve " + ui_dir->string());
  }
}

Service::~Service() { stop(); }

int Service::bind(int port) {
  constexpr const char* host = "127.0.0.1";
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw BindError("cannot bind an ephemeral port on " + std::string(host));
    return bound;
  }
  if (!server_->bind_to_port(host, port)) throw BindError("cannot bind " + std::string(host) + ":" + std::to_string(port));
  return port;
}

void Service::run() { server_->listen_after_bind(); }

void Service::stop() {
  if (server_) server_->stop();
}

}  // namespace csm
