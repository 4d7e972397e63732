#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sieu {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required input file or directory could not be read.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Malformed input. `line` and `column` are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& message)
      : Error(format(source, line, column, message)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& source, std::size_t line,
                            std::size_t column, const std::string& message) {
    std::string out = source;
    if (line > 0) {
      out += ":" + std::to_string(line);
      if (column > 0) out += ":" + std::to_string(column);
    }
    return out + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// A live search backend failed for one refined query.
class BackendError : public Error {
 public:
  BackendError(std::size_t query_id, const std::string& message)
      : Error("query " + std::to_string(query_id) + ": " + message),
        query_id_(query_id) {}

  std::size_t query_id() const { return query_id_; }

 private:
  std::size_t query_id_;
};

/// Request-level failures surfaced by the engine; `status` follows HTTP.
class RequestError : public Error {
 public:
  RequestError(int status, const std::string& message)
      : Error(message), status_(status) {}

  int status() const { return status_; }

 private:
  int status_;
};

}  // namespace sieu
