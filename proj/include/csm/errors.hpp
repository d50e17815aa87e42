#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input row; carries the 1-based line number of the offending row.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MappingError : public Error {
 public:
  using Error::Error;
};

/// Two events of one case assign different states to the same artifact at the same instant.
class ConflictError : public Error {
 public:
  using Error::Error;
};

class EmptyLogError : public Error {
 public:
  using Error::Error;
};

class ProjectionError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class ConformanceError : public Error {
 public:
  ConformanceError(std::size_t trace_index, const std::string& what)
      : Error("trace " + std::to_string(trace_index) + ": " + what), trace_index_(trace_index) {}
  std::size_t trace_index() const noexcept { return trace_index_; }

 private:
  std::size_t trace_index_;
};

class QueryError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// The service could not bind its listening port.
class BindError : public Error {
 public:
  using Error::Error;
};

}  // namespace csm
