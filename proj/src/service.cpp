#include "vidshield/service.hpp"

#include <memory>
#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "vidshield/error.hpp"
#include "vidshield/video_io.hpp"

namespace vidshield {
namespace {

std::string error_envelope(const std::string& kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  return j.dump() + "\n";
}

void respond_error(httplib::Response& res, int status, const std::string& kind,
                   const std::string& message) {
  res.status = status;
  res.set_content(error_envelope(kind, message), "application/json");
}

}  // namespace

struct AnnotationService::Impl {
  ServiceConfig config;
  httplib::Server server;

  mutable std::mutex model_mutex;
  std::shared_ptr<const LabelModel> model;

  std::shared_ptr<const LabelModel> snapshot() const {
    std::lock_guard<std::mutex> lock(model_mutex);
    return model;
  }
};

AnnotationService::AnnotationService(ServiceConfig config)
    : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);

  // Leave headroom above the app limit so the 413 path stays ours and keeps
  // the JSON envelope.
  impl_->server.set_payload_max_length(impl_->config.max_body_bytes + (1u << 20));

  impl_->server.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    if (impl_->snapshot()) {
      res.set_content("ok", "text/plain");
    } else {
      respond_error(res, 503, "ModelNotLoaded", "no model is loaded");
    }
  });

  impl_->server.Post("/v1/videos:annotate",
                     [this](const httplib::Request& req, httplib::Response& res) {
    std::shared_ptr<const LabelModel> model = impl_->snapshot();
    if (!model) {
      respond_error(res, 503, "ModelNotLoaded", "no model is loaded");
      return;
    }
    if (req.body.size() > impl_->config.max_body_bytes) {
      respond_error(res, 413, "BodyTooLarge",
                    "request body exceeds " +
                        std::to_string(impl_->config.max_body_bytes) + " bytes");
      return;
    }
    try {
      std::vector<std::uint8_t> bytes(req.body.begin(), req.body.end());
      VideoClip clip = parse_y4m(bytes);
      AnnotationResult result = annotate(clip, *model, impl_->config.annotator);
      res.set_content(annotation_to_json(result), "application/json");
    } catch (const Error& e) {
      respond_error(res, 400, error_kind_name(e.kind()), e.what());
    } catch (const std::exception& e) {
      respond_error(res, 500, "InternalError", e.what());
    }
  });
}

AnnotationService::~AnnotationService() = default;

void AnnotationService::load_model(LabelModel model) {
  auto shared = std::make_shared<const LabelModel>(std::move(model));
  std::lock_guard<std::mutex> lock(impl_->model_mutex);
  impl_->model = std::move(shared);
}

bool AnnotationService::model_loaded() const {
  return static_cast<bool>(impl_->snapshot());
}

bool AnnotationService::listen() {
  return impl_->server.listen(impl_->config.host, impl_->config.port);
}

int AnnotationService::bind_any_port() {
  return impl_->server.bind_to_any_port(impl_->config.host);
}

bool AnnotationService::listen_after_bind() {
  return impl_->server.listen_after_bind();
}

void AnnotationService::stop() { impl_->server.stop(); }

}  // namespace vidshield
