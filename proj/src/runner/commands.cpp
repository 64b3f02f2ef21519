#include "sovc/runner/commands.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sovc/annotate/corrections.hpp"
#include "sovc/annotate/tagger.hpp"
#include "sovc/common/error.hpp"
#include "sovc/common/rng.hpp"
#include "sovc/common/text.hpp"
#include "sovc/data/dataset_io.hpp"
#include "sovc/data/frames.hpp"
#include "sovc/data/stats.hpp"
#include "sovc/metrics/report.hpp"
#include "sovc/model/train.hpp"
#include "sovc/runner/pipeline.hpp"
#include "sovc/runner/service.hpp"
#include "sovc/runner/synthetic.hpp"

namespace sovc::runner {

namespace fs = std::filesystem;
using nlohmann::json;

CaptionRequest caption_request_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("caption request must be a JSON object");
  CaptionRequest r;
  auto need = [&](const char* k) -> const json& {
    if (!j.contains(k)) throw ValidationError(std::string("missing field '") + k + "'", k);
    return j.at(k);
  };
  const auto& vid = need("video_id");
  if (!vid.is_string()) throw ValidationError("video_id must be a string", "video_id");
  r.video_id = vid.get<std::string>();
  const auto& fi = need("frame_index");
  if (!fi.is_number_integer()) throw ValidationError("frame_index must be an integer", "frame_index");
  r.frame_index = fi.get<int>();
  const auto& b = need("bbox");
  if (!b.is_array() || b.size() != 4 || !std::all_of(b.begin(), b.end(), [](const json& v) { return v.is_number_integer(); }))
    throw ValidationError("bbox must be [x, y, w, h] integers", "bbox");
  r.bbox = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
  if (j.contains("strategy") && !j.at("strategy").is_null()) {
    try {
      r.strategy = sampler::strategy_from_string(j.at("strategy").get<std::string>());
    } catch (const std::exception& e) {
      throw ValidationError(std::string("strategy: ") + e.what(), "strategy");
    }
  }
  if (j.contains("seed") && !j.at("seed").is_null()) {
    const auto& sd = j.at("seed");
    if (!sd.is_number_integer() || (!sd.is_number_unsigned() && sd.get<std::int64_t>() < 0)) throw ValidationError("seed must be a non-negative integer", "seed");
    r.seed = j.at("seed").get<std::uint64_t>();
  }
  return r;
}

json to_json(const CaptionResponse& r) {
  return {{"caption", r.caption},
          {"sampled_frame_indices", r.sampled_frame_indices},
          {"subject_crop_ref", r.subject_crop_ref},
          {"model_id", r.model_id}};
}

void validate_request(const data::Dataset& ds, const CaptionRequest& req) {
  const auto* v = ds.find_video(req.video_id);
  if (!v) throw ValidationError("unknown video '" + req.video_id + "'", "video_id");
  if (req.frame_index < 0 || req.frame_index >= v->num_frames)
    throw ValidationError("frame_index " + std::to_string(req.frame_index) + " outside [0, " +
                              std::to_string(v->num_frames) + ")",
                          "frame_index");
  if (!req.bbox.fits(v->width, v->height))
    throw ValidationError("bbox does not fit the " + std::to_string(v->width) + "x" + std::to_string(v->height) + " frame",
                          "bbox");
}

namespace {

CaptionResponse caption_with_frames(const data::FrameTensor& frames, const model::Checkpoint& ckpt,
                                    const RunConfig& cfg, const CaptionRequest& req) {
  auto scfg = cfg.sampler;
  if (req.strategy) scfg.strategy = *req.strategy;
  if (req.seed) scfg.seed = *req.seed;
  auto in = prepare_input(frames, {req.frame_index, req.bbox}, scfg, ckpt.model.config, req.video_id);
  auto gen = model::caption_example(in.example, ckpt.model, {.beam_width = cfg.beam_width});
  CaptionResponse r;
  r.caption = gen.caption;
  r.sampled_frame_indices = in.frame_indices;
  const auto& b = req.bbox;
  r.subject_crop_ref = req.video_id + "/frames/" + std::to_string(req.frame_index) + "#xywh=" + std::to_string(b.x) +
                       "," + std::to_string(b.y) + "," + std::to_string(b.w) + "," + std::to_string(b.h);
  r.model_id = ckpt.model_id;
  return r;
}

data::Dataset load(const std::string& path, bool check_frames = true) {
  if (path.empty()) throw ValidationError("no dataset given (set dataset)", "dataset");
  return data::load_dataset(path, {.check_frames = check_frames});
}

fs::path log_path(const RunConfig& cfg) { return cfg.log.empty() ? fs::path(cfg.checkpoint + ".log.jsonl") : fs::path(cfg.log); }

model::Checkpoint load_model(const RunConfig& cfg) {
  if (cfg.checkpoint.empty()) throw ValidationError("no checkpoint given (set checkpoint)", "checkpoint");
  return model::load_checkpoint(cfg.checkpoint);
}

}  // namespace

CaptionResponse caption(const data::Dataset& ds, const model::Checkpoint& ckpt, const RunConfig& cfg,
                        const CaptionRequest& req) {
  validate_request(ds, req);
  auto frames = data::load_frames(ds, *ds.find_video(req.video_id));
  return caption_with_frames(frames, ckpt, cfg, req);
}

TrainSummary cmd_train(const RunConfig& cfg) {
  auto ds = load(cfg.dataset);
  if (ds.split != data::Split::Train)
    throw ValidationError("dataset split is '" + data::to_string(ds.split) + "'; training needs the train split",
                          "dataset");
  if (cfg.checkpoint.empty()) throw ValidationError("no checkpoint path given (set checkpoint)", "checkpoint");

  model::CaptionModel m;
  model::AdamState opt;
  if (cfg.resume && fs::exists(cfg.checkpoint)) {
    auto ck = model::load_checkpoint(cfg.checkpoint);
    m = std::move(ck.model);
    if (ck.optimizer) opt = std::move(*ck.optimizer);
  } else {
    m = model::CaptionModel::init(cfg.model, build_vocabulary(ds, cfg.min_freq), cfg.train.seed);
  }
  auto set = prepare_training_set(ds, cfg.sampler, m.config, m.vocab);
  if (set.examples.empty()) throw ValidationError("dataset has no annotated subject with captions", "dataset");

  TrainSummary summary;
  summary.examples = set.examples.size();
  summary.parameters = m.num_parameters();
  auto remaining = cfg.train;
  remaining.steps = std::max(0, cfg.train.steps - static_cast<int>(opt.step));

  std::ofstream log(log_path(cfg), cfg.resume ? std::ios::app : std::ios::trunc);
  if (!log) throw InputError("cannot open training log " + log_path(cfg).string(), "log");
  try {
    model::train(m, opt, set.examples, remaining, [&](const model::TrainLogEntry& e) {
      log << json{{"step", e.step}, {"loss", e.loss}, {"lr", e.lr}}.dump() << "\n" << std::flush;
      summary.final_loss = e.loss;
      if (e.step % cfg.checkpoint_every == 0) model::save_checkpoint(cfg.checkpoint, m, &opt);
    });
  } catch (const DivergenceError&) {
    model::save_checkpoint(cfg.checkpoint, m, &opt);
    throw;
  }
  model::save_checkpoint(cfg.checkpoint, m, &opt);
  summary.steps = opt.step;
  return summary;
}

json cmd_caption(const RunConfig& cfg, const CaptionRequest& req) {
  auto ds = load(cfg.dataset, false);
  validate_request(ds, req);
  auto ckpt = load_model(cfg);
  return to_json(caption(ds, ckpt, cfg, req));
}

std::vector<json> cmd_predict(const RunConfig& cfg) {
  auto ds = load(cfg.dataset);
  auto ckpt = load_model(cfg);
  std::vector<json> out;
  for (const auto& v : ds.videos) {
    std::optional<data::FrameTensor> frames;
    for (const auto& s : v.subjects) {
      if (s.regions.empty() || s.captions.empty()) continue;
      if (!frames) frames = data::load_frames(ds, v);
      const auto& r = s.regions.front();
      auto resp = caption_with_frames(*frames, ckpt, cfg, {v.video_id, r.frame_index, r.bbox, {}, {}});
      out.push_back({{"id", metrics::sample_key(v.video_id, s.subject_id)}, {"caption", resp.caption}});
    }
  }
  return out;
}

json cmd_eval(const fs::path& dataset, const fs::path& preds) {
  auto ds = data::load_dataset(dataset, {.check_frames = false});
  annotate::RuleBasedTagger tagger;
  const auto& blacklist = annotate::default_blacklist();
  auto pairs = metrics::build_eval_pairs(ds, metrics::read_predictions_jsonl(preds), tagger, blacklist);
  return metrics::report_to_json(metrics::evaluate(pairs, tagger, blacklist));
}

json cmd_sample(const RunConfig& cfg, const std::string& video_id, const std::string& subject_id) {
  auto ds = load(cfg.dataset);
  const auto* v = ds.find_video(video_id);
  if (!v) throw ValidationError("unknown video '" + video_id + "'", "video");
  const auto* s = v->find_subject(subject_id);
  if (!s) throw ValidationError("unknown subject '" + subject_id + "' in video '" + video_id + "'", "subject");
  if (s->regions.empty()) throw ValidationError("subject '" + subject_id + "' has no region", "subject");
  auto frames = data::load_frames(ds, *v);
  auto crop = data::crop_subject(frames, s->regions.front());
  sampler::ToyExtractor extractor;
  auto scfg = cfg.sampler;
  scfg.seed = derive_seed(cfg.sampler.seed, video_id);
  auto res = sampler::sample_frames(sampler::extract_frame_features(frames, crop, extractor), scfg);
  json probs = json::array();
  for (const auto& t : res.probs) probs.push_back({{"members", t.members}, {"probs", t.probs}});
  return {{"video_id", video_id},
          {"subject_id", subject_id},
          {"strategy", sampler::to_string(cfg.sampler.strategy)},
          {"seed", cfg.sampler.seed},
          {"num_frames", cfg.sampler.num_frames},
          {"indices", res.indices},
          {"probs", probs}};
}

json cmd_stats(const RunConfig& cfg) { return data::stats_to_json(data::dataset_stats(load(cfg.dataset, false))); }

json cmd_annotate(const fs::path& draft, const fs::path& detections, const fs::path& corrections, const fs::path& out) {
  auto ds = data::load_dataset(draft, {.check_frames = false, .allow_unannotated = true});
  auto dets = annotate::read_detections_jsonl(detections);
  annotate::CorrectionFile corr;
  if (!corrections.empty()) corr = annotate::read_corrections(corrections);
  annotate::RuleBasedTagger tagger;
  annotate::TrigramSimilarity sim;
  auto res = annotate::annotate_dataset(ds, dets, corr, tagger, annotate::default_blacklist(), sim);
  res.merged.dataset.root = ds.root;
  data::save_dataset(res.merged.dataset, out);
  return {{"discarded", res.merged.report.discarded},
          {"needs_manual", res.merged.report.needs_manual},
          {"empty_videos", res.merged.report.empty_videos},
          {"discarded_captions", res.discarded_captions}};
}

namespace {

void emit(const json& j, const std::string& out_file, std::ostream& out) {
  if (out_file.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out_file);
  if (!f) throw InputError("cannot write " + out_file, "out");
  f << j.dump(2) << "\n";
}

std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const auto& a = extras[i];
    if (!a.starts_with("--") || a.size() < 3) throw ValidationError("unexpected argument '" + a + "'", a);
    auto name = a.substr(2);
    auto eq = name.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(name.substr(0, eq), name.substr(eq + 1));
    } else {
      if (i + 1 >= extras.size()) throw ValidationError("option '" + a + "' needs a value", name);
      out.emplace_back(name, extras[++i]);
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subject-oriented video captioning"};
  app.require_subcommand(1);
  app.allow_extras();
  std::string config_file, dataset, checkpoint, out_file;
  auto common = [&](CLI::App* s) {
    s->allow_extras();
    s->add_option("--config", config_file, "JSON run configuration");
    s->add_option("--dataset", dataset, "dataset directory or annotations.json");
    s->add_option("--checkpoint", checkpoint, "model checkpoint");
    s->add_option("--out", out_file, "output file (stdout when omitted)");
  };

  auto* annotate_cmd = app.add_subcommand("annotate", "build subject annotations from detections");
  std::string detections, corrections;
  common(annotate_cmd);
  annotate_cmd->add_option("--detections", detections)->required();
  annotate_cmd->add_option("--corrections", corrections);

  auto* sample_cmd = app.add_subcommand("sample", "sample frames for one subject");
  std::string video, subject, strategy;
  std::optional<int> t_frames;
  std::optional<std::uint64_t> seed;
  common(sample_cmd);
  sample_cmd->add_option("--video", video)->required();
  sample_cmd->add_option("--subject", subject)->required();
  sample_cmd->add_option("--strategy", strategy);
  sample_cmd->add_option("--T", t_frames);
  sample_cmd->add_option("--seed", seed);

  auto* train_cmd = app.add_subcommand("train", "train a captioning model");
  bool resume = false;
  common(train_cmd);
  train_cmd->add_flag("--resume", resume, "continue from the checkpoint's optimizer state");

  auto* caption_cmd = app.add_subcommand("caption", "caption one subject given a bounding box");
  std::string request_file;
  std::optional<int> frame_index;
  std::vector<int> bbox;
  common(caption_cmd);
  caption_cmd->add_option("--request", request_file, "CaptionRequest JSON file");
  caption_cmd->add_option("--video", video);
  caption_cmd->add_option("--frame", frame_index);
  caption_cmd->add_option("--bbox", bbox, "x y w h")->expected(4)->delimiter(',');
  caption_cmd->add_option("--strategy", strategy);
  caption_cmd->add_option("--seed", seed);

  auto* predict_cmd = app.add_subcommand("predict", "caption every annotated subject (JSON lines)");
  common(predict_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "score predictions against a dataset");
  std::string preds;
  common(eval_cmd);
  eval_cmd->add_option("--preds", preds)->required();

  auto* stats_cmd = app.add_subcommand("stats", "dataset statistics");
  common(stats_cmd);

  auto* synth_cmd = app.add_subcommand("synth", "write the synthetic two-square dataset");
  int videos = 8;
  common(synth_cmd);
  synth_cmd->add_option("--videos", videos);

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP caption and annotation service");
  common(serve_cmd);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  CLI::App* sub = app.get_subcommands().front();

  try {
    std::vector<std::pair<std::string, std::string>> overrides;
    if (!dataset.empty()) overrides.emplace_back("dataset", json(dataset).dump());
    if (!checkpoint.empty()) overrides.emplace_back("checkpoint", json(checkpoint).dump());
    if (resume) overrides.emplace_back("resume", "true");
    if (!strategy.empty()) overrides.emplace_back("sampler.strategy", json(strategy).dump());
    if (t_frames) overrides.emplace_back("sampler.num_frames", std::to_string(*t_frames));
    if (seed && sub != caption_cmd) overrides.emplace_back("sampler.seed", std::to_string(*seed));
    for (auto& o : parse_overrides(sub->remaining())) overrides.push_back(std::move(o));
    RunConfig cfg = resolve_config(config_file, sovc_environment(), overrides);

    if (sub == annotate_cmd) {
      if (out_file.empty()) throw ValidationError("annotate needs --out", "out");
      emit(cmd_annotate(cfg.dataset, detections, corrections, out_file), "", out);
    } else if (sub == sample_cmd) {
      emit(cmd_sample(cfg, video, subject), out_file, out);
    } else if (sub == train_cmd) {
      auto s = cmd_train(cfg);
      emit({{"checkpoint", cfg.checkpoint},
            {"steps", s.steps},
            {"final_loss", s.final_loss},
            {"examples", s.examples},
            {"parameters", s.parameters}},
           out_file, out);
    } else if (sub == caption_cmd) {
      CaptionRequest req;
      if (!request_file.empty()) {
        std::ifstream f(request_file);
        if (!f) throw InputError("cannot open " + request_file, "request");
        json j = json::parse(f, nullptr, false);
        if (j.is_discarded()) throw ParseError("request file is not valid JSON", "request");
        req = caption_request_from_json(j);
      } else {
        if (video.empty()) throw ValidationError("caption needs --video", "video_id");
        if (!frame_index) throw ValidationError("caption needs --frame", "frame_index");
        if (bbox.size() != 4) throw ValidationError("caption needs --bbox x,y,w,h", "bbox");
        req = {video, *frame_index, {bbox[0], bbox[1], bbox[2], bbox[3]}, {}, {}};
      }
      if (!strategy.empty()) req.strategy = sampler::strategy_from_string(strategy);
      if (seed) req.seed = *seed;
      emit(cmd_caption(cfg, req), out_file, out);
    } else if (sub == predict_cmd) {
      std::ofstream f;
      if (!out_file.empty()) {
        f.open(out_file);
        if (!f) throw InputError("cannot write " + out_file, "out");
      }
      std::ostream& dst = out_file.empty() ? out : f;
      for (const auto& line : cmd_predict(cfg)) dst << line.dump() << "\n";
    } else if (sub == eval_cmd) {
      emit(cmd_eval(cfg.dataset, preds), out_file, out);
    } else if (sub == stats_cmd) {
      emit(cmd_stats(cfg), out_file, out);
    } else if (sub == synth_cmd) {
      if (out_file.empty()) throw ValidationError("synth needs --out", "out");
      SyntheticOptions opts;
      opts.num_videos = videos;
      auto ds = write_synthetic_dataset(out_file, opts);
      emit({{"videos", ds.videos.size()}, {"path", out_file}}, "", out);
    } else if (sub == serve_cmd) {
      Service service(cfg);
      int port = service.bind(cfg.service.host, cfg.service.port);
      err << "listening on " << cfg.service.host << ":" << port << "\n";
      service.listen();
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_input_error() ? 2 : 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sovc::runner
