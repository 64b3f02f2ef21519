#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "sovc/annotate/candidates.hpp"
#include "sovc/annotate/corrections.hpp"
#include "sovc/annotate/similarity.hpp"
#include "sovc/annotate/subjects.hpp"
#include "sovc/common/error.hpp"
#include "sovc/data/dataset_io.hpp"

using namespace sovc::annotate;
using sovc::data::BBox;

namespace {

const RuleBasedTagger kTagger;

std::vector<std::string> subjects(const std::string& caption) {
  return extract_subjects(caption, kTagger, default_blacklist());
}

Detection det(const std::string& label, double conf, int frame = 0, BBox box = {0, 0, 2, 2}) {
  return {frame, box, label, conf};
}

sovc::data::Dataset draft_dataset() {
  sovc::data::Dataset ds;
  sovc::data::VideoRecord v1{.video_id = "v1", .frame_source = "x", .num_frames = 4, .width = 10, .height = 10};
  v1.subjects.push_back({.subject_id = "man", .subject_word = "man", .regions = {}, .captions = {"a man walks"}});
  v1.subjects.push_back({.subject_id = "dog", .subject_word = "dog", .regions = {}, .captions = {"a dog runs"}});
  sovc::data::VideoRecord v2{.video_id = "v2", .frame_source = "y", .num_frames = 2, .width = 8, .height = 8};
  v2.subjects.push_back({.subject_id = "cat", .subject_word = "cat", .regions = {}, .captions = {"a cat sleeps"}});
  ds.videos = {v1, v2};
  return ds;
}

CandidateTable candidates_for(const sovc::data::Dataset& ds) {
  ExactMatchSimilarity sim;
  CandidateTable t;
  t["v1/man"] = rank_candidates("man", {det("man", 0.8, 1, {1, 1, 3, 3}), det("dog", 0.9, 0, {2, 2, 2, 2})}, sim);
  t["v1/dog"] = rank_candidates("dog", {det("man", 0.8, 1, {1, 1, 3, 3}), det("dog", 0.9, 0, {2, 2, 2, 2})}, sim);
  t["v2/cat"] = rank_candidates("cat", {det("cat", 0.4, 1, {0, 0, 8, 8})}, sim);
  (void)ds;
  return t;
}

}  // namespace

TEST_CASE("extract_subjects: simple captions") {
  CHECK(subjects("a man is driving a car") == std::vector<std::string>{"man"});
  CHECK(subjects("A woman is driving a car.") == std::vector<std::string>{"woman"});
  CHECK(subjects("two men are talking") == std::vector<std::string>{"men"});
  CHECK(subjects("a man and a woman are dancing") == std::vector<std::string>{"man", "woman"});
  CHECK(subjects("a small white dog runs on the grass") == std::vector<std::string>{"dog"});
  CHECK(subjects("a cook is cooking") == std::vector<std::string>{"cook"});
}

TEST_CASE("extract_subjects: blacklisted head recurses into the of-phrase") {
  CHECK(subjects("a video of a dog") == std::vector<std::string>{"dog"});
  CHECK(subjects("a video of a cat playing") == std::vector<std::string>{"cat"});
  CHECK(subjects("a video is shown").empty());
  CHECK(subjects("a group of people is dancing") == std::vector<std::string>{"group"});
}

TEST_CASE("extract_subjects: no subject, punctuation only, and empty caption") {
  CHECK(subjects("run fast now").empty());
  CHECK(subjects("...").empty());
  CHECK_THROWS_AS(subjects(""), sovc::ContractError);
}

TEST_CASE("extract_subject_phrases keeps the full phrase for multi-word subjects") {
  auto p = extract_subject_phrases("an ice hockey player is skating", kTagger, default_blacklist());
  REQUIRE(p.size() == 1);
  CHECK(p[0].head == "player");
  CHECK(p[0].phrase == "ice hockey player");
}

TEST_CASE("extract_subjects is pure") {
  for (const char* c : {"a man is driving a car", "a video of a dog", "people are walking"})
    CHECK(subjects(c) == subjects(c));
}

TEST_CASE("custom tagger plugs in") {
  struct AllNouns : PosTagger {
    std::vector<PosTag> tag(const std::vector<std::string>& t) const override {
      return std::vector<PosTag>(t.size(), PosTag::Noun);
    }
  };
  CHECK(extract_subjects("red car", AllNouns{}, {}) == std::vector<std::string>{"car"});
}

TEST_CASE("group_captions_by_subject drops abstract captions") {
  auto g = group_captions_by_subject({"a man is walking", "a video of a man", "a video is shown", "a dog barks"},
                                     kTagger, default_blacklist());
  REQUIRE(g.subjects.size() == 2);
  CHECK(g.subjects[0].subject_word == "man");
  CHECK(g.subjects[0].captions.size() == 2);
  CHECK(g.subjects[1].subject_word == "dog");
  CHECK(g.discarded == std::vector<std::string>{"a video is shown"});
}

TEST_CASE("rank_candidates: exact match and tie-breaks") {
  ExactMatchSimilarity exact;
  auto r = rank_candidates("dog", {det("car", 0.99), det("dog", 0.5)}, exact);
  REQUIRE(r.size() == 2);
  CHECK(r[0].detection.class_label == "dog");
  CHECK(r[0].similarity == 1.0);

  auto t = rank_candidates("dog", {det("dog", 0.7, 0), det("dog", 0.9, 3)}, exact);
  CHECK(t[0].detection.confidence == 0.9);

  auto f = rank_candidates("dog", {det("dog", 0.7, 5), det("dog", 0.7, 2)}, exact);
  CHECK(f[0].detection.frame_index == 2);

  CHECK(rank_candidates("dog", {}, exact).empty());
}

TEST_CASE("rank_candidates: trigram similarity golden ordering") {
  // Similarities frozen from tests/oracles/trigram_similarity.py.
  TrigramSimilarity sim;
  CHECK(sim.similarity("puppy", "pup") == doctest::Approx(0.516397779494).epsilon(1e-12));
  CHECK(sim.similarity("puppy", "puppies") == doctest::Approx(0.507092552837).epsilon(1e-12));
  CHECK(sim.similarity("puppy", "dog") == 0.0);
  CHECK(sim.similarity("man", "woman") == doctest::Approx(0.516397779494).epsilon(1e-12));

  auto r = rank_candidates("puppy",
                           {det("dog", 0.5, 0), det("person", 0.9, 3), det("pup", 0.2, 1), det("puppies", 0.3, 2)},
                           sim);
  std::vector<std::string> order;
  for (const auto& c : r) order.push_back(c.detection.class_label);
  CHECK(order == std::vector<std::string>{"pup", "puppies", "person", "dog"});

  TrigramSimilarity with_syn(std::set<std::pair<std::string, std::string>>{{"dog", "puppy"}});
  CHECK(with_syn.similarity("puppy", "dog") == 1.0);
}

TEST_CASE("property: rank_candidates order is a total order independent of input order") {
  TrigramSimilarity sim;
  std::mt19937 gen(3);
  const std::vector<std::string> labels = {"dog", "man", "woman", "person", "cat", "puppy"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Detection> dets;
    for (int i = 0; i < 8; ++i) {
      dets.push_back(det(labels[gen() % labels.size()], (gen() % 4) / 4.0, static_cast<int>(gen() % 3),
                         {static_cast<int>(gen() % 3), 0, 1, 1}));
    }
    auto a = rank_candidates("man", dets, sim);
    std::shuffle(dets.begin(), dets.end(), gen);
    auto b = rank_candidates("man", dets, sim);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].detection.class_label == b[i].detection.class_label);
      CHECK(a[i].detection.bbox == b[i].detection.bbox);
      CHECK(a[i].detection.frame_index == b[i].detection.frame_index);
      CHECK(a[i].detection.confidence == b[i].detection.confidence);
    }
  }
}

TEST_CASE("merge_corrections: default policy installs top-1") {
  auto ds = draft_dataset();
  auto m = merge_corrections(ds, candidates_for(ds), {});
  REQUIRE(m.dataset.videos.size() == 2);
  const auto& man = m.dataset.videos[0].subjects[0];
  REQUIRE(man.regions.size() == 1);
  CHECK(man.regions[0].frame_index == 1);
  CHECK(man.regions[0].bbox == BBox{1, 1, 3, 3});
  CHECK(m.dataset.videos[0].subjects[1].regions[0].bbox == BBox{2, 2, 2, 2});
  CHECK(m.report.discarded.empty());
}

TEST_CASE("merge_corrections: accept, manual, discard") {
  auto ds = draft_dataset();
  CorrectionFile c;
  c["v1/man"] = {.decision = Decision::Accept, .index = 1};
  c["v1/dog"] = {.decision = Decision::Manual, .regions = {{3, {0, 0, 5, 5}}}};
  c["v2/cat"] = {.decision = Decision::Discard};
  auto m = merge_corrections(ds, candidates_for(ds), c);
  CHECK(m.dataset.videos[0].subjects[0].regions[0].bbox == BBox{2, 2, 2, 2});
  CHECK(m.dataset.videos[0].subjects[1].regions[0] == sovc::data::SubjectRegion{3, {0, 0, 5, 5}});
  // The only subject of v2 was discarded: the video stays, flagged.
  REQUIRE(m.dataset.videos.size() == 2);
  CHECK(m.dataset.videos[1].subjects.empty());
  CHECK(m.report.discarded == std::vector<std::string>{"v2/cat"});
  CHECK(m.report.empty_videos == std::vector<std::string>{"v2"});
}

TEST_CASE("merge_corrections: errors") {
  auto ds = draft_dataset();
  CorrectionFile dangling;
  dangling["v9/x"] = {.decision = Decision::Discard};
  dangling["v1/ghost"] = {.decision = Decision::Discard};
  try {
    merge_corrections(ds, candidates_for(ds), dangling);
    FAIL("expected ValidationError");
  } catch (const sovc::ValidationError& e) {
    CHECK(std::string(e.what()).find("v9/x") != std::string::npos);
    CHECK(std::string(e.what()).find("v1/ghost") != std::string::npos);
  }
  CorrectionFile out_of_range;
  out_of_range["v2/cat"] = {.decision = Decision::Accept, .index = 1};
  CHECK_THROWS_AS(merge_corrections(ds, candidates_for(ds), out_of_range), sovc::ValidationError);
  CorrectionFile bad_manual;
  bad_manual["v2/cat"] = {.decision = Decision::Manual, .regions = {{0, {4, 4, 5, 5}}}};
  CHECK_THROWS_AS(merge_corrections(ds, candidates_for(ds), bad_manual), sovc::ValidationError);
}

TEST_CASE("merge_corrections: subject without candidates is flagged for manual work") {
  auto ds = draft_dataset();
  auto cands = candidates_for(ds);
  cands.erase("v2/cat");
  auto m = merge_corrections(ds, cands, {});
  CHECK(m.report.needs_manual == std::vector<std::string>{"v2/cat"});
  CHECK(m.dataset.videos[1].subjects.empty());
}

TEST_CASE("property: merge_corrections always yields a valid dataset") {
  std::mt19937 gen(17);
  TrigramSimilarity sim;
  for (int trial = 0; trial < 200; ++trial) {
    sovc::data::Dataset ds;
    CandidateTable cands;
    CorrectionFile corr;
    const int nv = 1 + static_cast<int>(gen() % 3);
    for (int v = 0; v < nv; ++v) {
      sovc::data::VideoRecord rec{.video_id = "v" + std::to_string(v), .frame_source = "f",
                                  .num_frames = 1 + static_cast<int>(gen() % 5), .width = 4 + static_cast<int>(gen() % 8),
                                  .height = 4 + static_cast<int>(gen() % 8)};
      const int ns = 1 + static_cast<int>(gen() % 3);
      for (int s = 0; s < ns; ++s) {
        const std::string sid = "s" + std::to_string(s);
        rec.subjects.push_back({.subject_id = sid, .subject_word = "man", .regions = {}, .captions = {"a man"}});
        std::vector<Detection> dets;
        const int nd = static_cast<int>(gen() % 3);
        for (int d = 0; d < nd; ++d)
          dets.push_back(det("person", 0.5, static_cast<int>(gen() % static_cast<unsigned>(rec.num_frames)),
                             {0, 0, 1 + static_cast<int>(gen() % 4), 1 + static_cast<int>(gen() % 4)}));
        const auto key = correction_key(rec.video_id, sid);
        cands[key] = rank_candidates("man", dets, sim);
        switch (gen() % 4) {
          case 0: break;
          case 1: if (nd > 0) corr[key] = {.decision = Decision::Accept, .index = static_cast<int>(gen() % static_cast<unsigned>(nd))}; break;
          case 2: corr[key] = {.decision = Decision::Manual, .regions = {{0, {1, 1, 2, 2}}}}; break;
          case 3: corr[key] = {.decision = Decision::Discard}; break;
        }
      }
      ds.videos.push_back(rec);
    }
    auto m = merge_corrections(ds, cands, corr);
    CHECK_NOTHROW(sovc::data::validate_dataset(m.dataset, {.check_frames = false}));
  }
}

TEST_CASE("corrections file and detections JSONL round-trip") {
  auto dir = std::filesystem::temp_directory_path() / "sovc_test_annotate";
  std::filesystem::create_directories(dir);
  CorrectionFile c;
  c["v1/man"] = {.decision = Decision::Accept, .index = 2, .version = 3};
  c["v1/dog"] = {.decision = Decision::Manual, .regions = {{1, {0, 1, 2, 3}}}};
  c["v2/cat"] = {.decision = Decision::Discard};
  write_corrections(c, dir / "c.json");
  auto back = read_corrections(dir / "c.json");
  REQUIRE(back.size() == 3);
  CHECK(back["v1/man"].index == 2);
  CHECK(back["v1/man"].version == 3);
  CHECK(back["v1/dog"].regions[0] == sovc::data::SubjectRegion{1, {0, 1, 2, 3}});
  CHECK(back["v2/cat"].decision == Decision::Discard);

  std::ofstream(dir / "d.jsonl") << R"({"video_id": "v1", "frame_index": 0, "bbox": [0,0,2,2], "class_label": "Dog", "confidence": 0.5})"
                                 << "\n\n"
                                 << R"({"video_id": "v2", "frame_index": 1, "bbox": [1,1,2,2], "class_label": "cat", "confidence": 0.25})"
                                 << "\n";
  auto d = read_detections_jsonl(dir / "d.jsonl");
  CHECK(d["v1"][0].class_label == "dog");
  CHECK(d["v2"][0].confidence == 0.25);
  std::ofstream(dir / "bad.jsonl") << R"({"video_id": "v1", "frame_index": 0, "bbox": [0,0,2,2], "class_label": "x", "confidence": 1.5})";
  CHECK_THROWS_AS(read_detections_jsonl(dir / "bad.jsonl"), sovc::ValidationError);
}

TEST_CASE("annotate_dataset runs the four construction steps") {
  sovc::data::Dataset draft;
  sovc::data::VideoRecord v{.video_id = "v1", .frame_source = "x", .num_frames = 3, .width = 10, .height = 10};
  v.raw_captions = {"a man is riding a horse", "a man rides", "a horse is running", "a video is shown"};
  draft.videos.push_back(v);
  std::map<std::string, std::vector<Detection>> dets;
  dets["v1"] = {det("person", 0.9, 0, {0, 0, 3, 3}), det("horse", 0.8, 1, {2, 2, 5, 5}), det("man", 0.6, 2, {1, 1, 2, 2})};
  auto r = annotate_dataset(draft, dets, {}, kTagger, default_blacklist(), TrigramSimilarity{});
  const auto& out = r.merged.dataset.videos[0];
  REQUIRE(out.subjects.size() == 2);
  CHECK(out.subjects[0].subject_word == "man");
  CHECK(out.subjects[0].captions.size() == 2);
  CHECK(out.subjects[0].regions[0].frame_index == 2);
  CHECK(out.subjects[1].subject_word == "horse");
  CHECK(out.subjects[1].regions[0].bbox == BBox{2, 2, 5, 5});
  CHECK(out.raw_captions.empty());
  CHECK(r.discarded_captions["v1"].size() == 1);
}
