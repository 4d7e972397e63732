#pragma once

#include <memory>
#include <string>

#include "sieu/engine.hpp"

namespace sieu {

/// HTTP front end:
///   GET /health                 {"status":"ok"}
///   GET /api/search?q=..&k=..   full SearchResponse
///   GET /api/expand?q=..        analysis, expansions and refined queries
/// Errors are `{"error": message}` with a 4xx/5xx status.
class Service {
 public:
  explicit Service(std::shared_ptr<const Engine> engine);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws Error on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sieu
