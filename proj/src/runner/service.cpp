#include "sovc/runner/service.hpp"

#include <mutex>

#include "sovc/annotate/corrections.hpp"
#include "sovc/common/error.hpp"
#include "sovc/data/dataset_io.hpp"
#include "sovc/model/checkpoint.hpp"
#include "sovc/runner/commands.hpp"

// After Eigen: <resolv.h> defines a _res macro.
#include <httplib.h>

namespace sovc::runner {

namespace fs = std::filesystem;
using nlohmann::json;

std::string encode_bmp(const data::Image& img) {
  const int row = (img.width * 3 + 3) & ~3;
  const std::uint32_t data_size = static_cast<std::uint32_t>(row) * img.height;
  std::string out(54 + data_size, '\0');
  auto put = [&](std::size_t at, std::uint32_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out[at + i] = static_cast<char>((v >> (8 * i)) & 0xff);
  };
  out[0] = 'B';
  out[1] = 'M';
  put(2, 54 + data_size, 4);
  put(10, 54, 4);
  put(14, 40, 4);
  put(18, static_cast<std::uint32_t>(img.width), 4);
  put(22, static_cast<std::uint32_t>(img.height), 4);
  put(26, 1, 2);
  put(28, 24, 2);
  put(34, data_size, 4);
  put(38, 2835, 4);
  put(42, 2835, 4);
  for (int y = 0; y < img.height; ++y) {
    std::size_t base = 54 + static_cast<std::size_t>(img.height - 1 - y) * row;
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) out[base + x * 3 + c] = static_cast<char>(img.at(y, x, 2 - c));
  }
  return out;
}

struct Service::Impl {
  RunConfig cfg;
  data::Dataset dataset;
  model::Checkpoint ckpt;
  fs::path store_path;
  annotate::CorrectionFile store;
  std::mutex store_mutex;
  httplib::Server server;

  explicit Impl(const RunConfig& c) : cfg(c) {
    if (cfg.dataset.empty()) throw ValidationError("serve needs a dataset", "dataset");
    if (cfg.checkpoint.empty()) throw ValidationError("serve needs a checkpoint", "checkpoint");
    dataset = data::load_dataset(cfg.dataset);
    ckpt = model::load_checkpoint(cfg.checkpoint);
    store_path = cfg.service.annotations.empty() ? dataset.root / "corrections.json" : fs::path(cfg.service.annotations);
    if (fs::exists(store_path)) store = annotate::read_corrections(store_path);
    server.new_task_queue = [n = cfg.service.threads] { return new httplib::ThreadPool(static_cast<std::size_t>(n)); };
    // SO_REUSEADDR only: with SO_REUSEPORT a busy port would bind silently.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    routes();
  }

  static void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }
  static void fail(httplib::Response& res, int status, const std::string& error, const std::string& field = {}) {
    send(res, status, {{"error", error}, {"field", field}});
  }

  template <typename F>
  static httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const InputError& e) {
        fail(res, 422, e.what(), e.field());
      } catch (const std::exception& e) {
        fail(res, 500, e.what());
      }
    };
  }

  json video_summary(const data::VideoRecord& v) const {
    json subjects = json::array();
    for (const auto& s : v.subjects) subjects.push_back(s.subject_id);
    return {{"video_id", v.video_id},
            {"num_frames", v.num_frames},
            {"width", v.width},
            {"height", v.height},
            {"subjects", subjects}};
  }

  json annotation_body(const std::string& vid, const std::string& sid) {
    auto key = annotate::correction_key(vid, sid);
    auto it = store.find(key);
    json c = nullptr;
    std::uint64_t version = 0;
    if (it != store.end()) {
      c = annotate::correction_to_json(it->second);
      c.erase("version");
      version = it->second.version;
    }
    return {{"video_id", vid}, {"subject_id", sid}, {"correction", c}, {"version", version}};
  }

  void routes() {
    server.Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
                 send(res, 200, {{"status", "ok"}, {"model_id", ckpt.model_id}, {"videos", dataset.videos.size()}});
               }));
    server.Get("/videos", guarded([this](const httplib::Request&, httplib::Response& res) {
                 json out = json::array();
                 for (const auto& v : dataset.videos) out.push_back(video_summary(v));
                 send(res, 200, out);
               }));
    server.Get(R"(/videos/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto* v = dataset.find_video(req.matches[1].str());
                 if (!v) return fail(res, 404, "unknown video '" + req.matches[1].str() + "'", "video_id");
                 data::Dataset one;
                 one.split = dataset.split;
                 one.videos.push_back(*v);
                 send(res, 200, data::dataset_to_json(one).at("videos").at(0));
               }));
    server.Get(R"(/videos/([^/]+)/frames/(-?\d+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto* v = dataset.find_video(req.matches[1].str());
                 if (!v) return fail(res, 404, "unknown video '" + req.matches[1].str() + "'", "video_id");
                 int i = std::stoi(req.matches[2].str());
                 if (i < 0 || i >= v->num_frames) return fail(res, 404, "frame index out of range", "frame_index");
                 auto frames = data::load_frames(dataset, *v);
                 res.set_content(encode_bmp(frames[static_cast<std::size_t>(i)]), "image/bmp");
               }));
    server.Post("/caption", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  json body = json::parse(req.body, nullptr, false);
                  if (body.is_discarded()) return fail(res, 422, "request body is not valid JSON", "body");
                  auto creq = caption_request_from_json(body);
                  if (!dataset.find_video(creq.video_id))
                    return fail(res, 404, "unknown video '" + creq.video_id + "'", "video_id");
                  send(res, 200, to_json(caption(dataset, ckpt, cfg, creq)));
                }));
    server.Get(R"(/annotations/([^/]+)/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 auto vid = req.matches[1].str(), sid = req.matches[2].str();
                 const auto* v = dataset.find_video(vid);
                 if (!v || !v->find_subject(sid)) return fail(res, 404, "unknown subject '" + vid + "/" + sid + "'", "subject_id");
                 std::lock_guard lock(store_mutex);
                 send(res, 200, annotation_body(vid, sid));
               }));
    server.Put(R"(/annotations/([^/]+)/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 auto vid = req.matches[1].str(), sid = req.matches[2].str();
                 const auto* v = dataset.find_video(vid);
                 if (!v || !v->find_subject(sid)) return fail(res, 404, "unknown subject '" + vid + "/" + sid + "'", "subject_id");
                 json body = json::parse(req.body, nullptr, false);
                 if (body.is_discarded() || !body.is_object()) return fail(res, 422, "request body is not a JSON object", "body");
                 if (!body.contains("version") || !body.at("version").is_number_integer() ||
                     body.at("version").get<std::int64_t>() < 0)
                   return fail(res, 422, "missing expected version", "version");
                 auto key = annotate::correction_key(vid, sid);
                 auto c = annotate::correction_from_json(body, key);
                 for (const auto& r : c.regions) {
                   if (r.frame_index < 0 || r.frame_index >= v->num_frames)
                     return fail(res, 422, "region frame_index out of range", "frame_index");
                   if (!r.bbox.fits(v->width, v->height)) return fail(res, 422, "region bbox outside the frame", "bbox");
                 }
                 std::lock_guard lock(store_mutex);
                 auto it = store.find(key);
                 std::uint64_t current = it == store.end() ? 0 : it->second.version;
                 if (c.version != current) {
                   res.status = 409;
                   res.set_content(json{{"error", "version mismatch"}, {"field", "version"}, {"version", current}}.dump(),
                                   "application/json");
                   return;
                 }
                 c.version = current + 1;
                 auto next = store;
                 next[key] = c;
                 auto tmp = store_path;
                 tmp += ".tmp";
                 annotate::write_corrections(next, tmp);
                 fs::rename(tmp, store_path);
                 store = std::move(next);
                 send(res, 200, annotation_body(vid, sid));
               }));
  }
};

Service::Service(const RunConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {}
Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
  return bound;
}

void Service::listen() { impl_->server.listen_after_bind(); }
void Service::stop() {
  if (impl_) impl_->server.stop();
}
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace sovc::runner
