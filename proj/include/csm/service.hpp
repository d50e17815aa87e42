#pragma once

// Read-only HTTP/JSON front end over an Explorer.
//
//   GET /api/health
//   GET /api/model
//   GET /api/model/projection?artifacts=a,b
//   GET /api/interactions?kind=&sort=&desc=&min_<measure>=&limit=&pair=a,b&include_boundary=&include_undefined=
//   GET /api/highlight?artifact=a&state=s   or   &from=s&to=t
//
// Static files are served from the optional UI directory.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "csm/explorer.hpp"
#include "csm/json_io.hpp"

namespace httplib {
class Server;
}

namespace csm {

/// Query string parameters -> Query. Empty values leave the default in place.
/// Throws QueryError.
Query parse_query(const std::multimap<std::string, std::string>& params);

struct Response {
  int status = 200;
  Json body;
};

/// Request handling without the transport, so it can be called directly.
class ApiHandler {
 public:
  explicit ApiHandler(const Explorer& explorer);

  Response health() const;
  Response model() const;
  Response projection(const std::multimap<std::string, std::string>& params) const;
  Response interactions(const std::multimap<std::string, std::string>& params) const;
  Response highlight(const std::multimap<std::string, std::string>& params) const;

 private:
  const Explorer& explorer_;
  Json model_doc_;
};

class Service {
 public:
  /// Throws IoError when `ui_dir` is given but is not a directory.
  Service(const Explorer& explorer, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds 127.0.0.1; port 0 picks an ephemeral port. Returns the bound port.
  /// Throws BindError when the port cannot be bound.
  int bind(int port);
  /// Blocks until stop().
  void run();
  void stop();

 private:
  ApiHandler handler_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace csm
