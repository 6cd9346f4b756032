#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "vidshield/annotator.hpp"
#include "vidshield/labeler.hpp"

namespace vidshield {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string model_path;
  AnnotatorConfig annotator;
  std::size_t max_body_bytes = 256ull * 1024 * 1024;
};

// HTTP front end over the annotator. Stateless per request; the model and
// config are shared immutably across the handler threads.
//
//   POST /v1/videos:annotate   body: Y4M bytes -> 200 AnnotationResult JSON
//   GET  /healthz              -> 200 "ok" once the model is loaded
//
// Non-200 responses carry {"error":{"kind":...,"message":...}}.
class AnnotationService {
 public:
  explicit AnnotationService(ServiceConfig config);
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  void load_model(LabelModel model);
  bool model_loaded() const;

  // Blocking serve on config host:port.
  bool listen();

  // Test support: bind to an ephemeral port, serve on a caller-owned thread.
  int bind_any_port();
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vidshield
