// Copyright 2026 The ccreid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ccreid/pipeline.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ccreid/error.h"
#include "ccreid/track.h"
#include "parallel.h"
#include "text_util.h"

namespace ccreid {
namespace {

using internal::Json;
using internal::OrderedJson;

void CheckUnit(double v, const char* name) {
  if (!(v >= 0 && v <= 1)) throw ValidationError(std::string(name) + " outside [0, 1]");
}

void ValidateValues(const RunConfig& c) {
  CheckUnit(c.alpha, "alpha");
  CheckUnit(c.enrichment_fraction, "enrichment_fraction");
  c.thresholds.Validate();
  c.eval.Validate();
}

void RequireFile(const std::filesystem::path& p, const char* key, bool required) {
  if (p.empty()) {
    if (required) throw ValidationError(std::string("config: '") + key + "' is required");
    return;
  }
  if (!std::filesystem::is_regular_file(p)) {
    throw ValidationError(std::string("config: ") + key + " '" + p.string() +
                          "' does not exist");
  }
}

EnrichmentThresholds ParseThresholds(const Json& j, EnrichmentThresholds t) {
  if (j.is_string()) return EnrichmentThresholds::Preset(j.get<std::string>());
  if (!j.is_object()) throw ValidationError("config: thresholds must be a name or object");
  for (const auto& [key, value] : j.items()) {
    if (key == "preset") {
      t = EnrichmentThresholds::Preset(value.get<std::string>());
    } else if (key == "det_enrich") {
      t.det_enrich = value.get<double>();
    } else if (key == "det_inference") {
      t.det_inference = value.get<double>();
    } else if (key == "sim_min") {
      t.sim_min = value.get<double>();
    } else if (key == "rank_diff_min") {
      t.rank_diff_min = value.get<double>();
    } else if (key == "unknown_sim_max") {
      t.unknown_sim_max = value.get<double>();
    } else if (key == "open_set") {
      t.open_set = value.get<bool>();
    } else {
      throw ValidationError("config: unknown threshold key '" + key + "'");
    }
  }
  return t;
}

std::set<IdentityLabel> GalleryIdentities(const CropManifest& gallery) {
  std::set<IdentityLabel> ids;
  for (const CropRecord& c : LabeledCrops(gallery)) ids.insert(*c.label);
  return ids;
}

// Per-identity maximum over several score vectors.
ScoreVector ElementwiseMax(std::span<const ScoreVector> vectors, ScoreSource source) {
  ScoreVector out;
  out.source = source;
  for (const ScoreVector& v : vectors) {
    for (const auto& [id, s] : v.scores) {
      auto [it, fresh] = out.scores.emplace(id, s);
      if (!fresh) it->second = std::max(it->second, s);
    }
  }
  return out;
}

OrderedJson ScoresJson(const ScoreVector& v) {
  OrderedJson j = OrderedJson::object();
  for (const auto& [id, s] : v.scores) j[id.str()] = s;
  return j;
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

Granularity ParseGranularity(std::string_view text) {
  if (text == "track") return Granularity::kTrack;
  if (text == "image") return Granularity::kImage;
  throw ValidationError("unknown granularity '" + std::string(text) + "'");
}

std::string_view GranularityName(Granularity g) {
  return g == Granularity::kTrack ? "track" : "image";
}

void RunConfig::Validate() const {
  ValidateValues(*this);
  RequireFile(gallery_manifest, "gallery_manifest", true);
  RequireFile(query_manifest, "query_manifest", true);
  RequireFile(reid_embeddings, "reid_embeddings", true);
  RequireFile(face_embeddings, "face_embeddings", false);
  RequireFile(face_observations, "face_observations", false);
  RequireFile(clothes_file, "clothes_file", false);
  if (face_embeddings.empty() != face_observations.empty()) {
    throw ValidationError(
        "config: face_embeddings and face_observations must be given together");
  }
}

RunConfig ParseRunConfig(std::string_view text, const std::filesystem::path& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError("config", 0, e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");

  RunConfig c;
  auto path = [&](const Json& v) {
    std::filesystem::path p = v.get<std::string>();
    return p.is_relative() ? base_dir / p : p;
  };
  // Thresholds first so a top-level open_set applies on top of a preset.
  if (j.contains("thresholds")) c.thresholds = ParseThresholds(j["thresholds"], c.thresholds);
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "thresholds") continue;
      if (key == "gallery_manifest") c.gallery_manifest = path(value);
      else if (key == "query_manifest") c.query_manifest = path(value);
      else if (key == "reid_embeddings") c.reid_embeddings = path(value);
      else if (key == "face_embeddings") c.face_embeddings = path(value);
      else if (key == "face_observations") c.face_observations = path(value);
      else if (key == "clothes_file") c.clothes_file = path(value);
      else if (key == "output_dir") c.output_dir = path(value);
      else if (key == "alpha") c.alpha = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "enrichment_fraction") c.enrichment_fraction = value.get<double>();
      else if (key == "enrichment") c.enrichment = value.get<bool>();
      else if (key == "granularity") c.granularity = ParseGranularity(value.get<std::string>());
      else if (key == "threads") c.threads = value.get<std::size_t>();
      else if (key == "setting") c.eval.clothes_mode = ParseClothesMode(value.get<std::string>());
      else if (key == "min_track_len") c.eval.min_track_len = value.get<std::size_t>();
      else if (key == "open_set") {
        c.thresholds.open_set = value.get<bool>();
        if (!j.contains("set_mode")) {
          c.eval.set_mode = c.thresholds.open_set ? SetMode::kOpen : SetMode::kClosed;
        }
      } else if (key == "set_mode") {
        c.eval.set_mode = ParseSetMode(value.get<std::string>());
      } else {
        throw ValidationError("config: unknown key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  ValidateValues(c);
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return ParseRunConfig(buf.str(), path.parent_path());
  } catch (const Error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

RunInputs LoadRunInputs(const RunConfig& config) {
  config.Validate();
  RunInputs in;
  in.gallery = LoadCropManifest(config.gallery_manifest);
  in.query = LoadCropManifest(config.query_manifest);
  in.reid = LoadEmbeddings(config.reid_embeddings, Modality::kReid);
  if (!config.face_embeddings.empty()) {
    in.face = LoadEmbeddings(config.face_embeddings, Modality::kFace);
    in.face_obs = LoadFaceObservations(config.face_observations);
  }
  return in;
}

AnnotatedPredictions Annotate(const RunConfig& config, const RunInputs& inputs) {
  ValidateValues(config);
  const std::vector<CropRecord> labeled = LabeledCrops(inputs.gallery);
  if (labeled.empty()) throw ValidationError("gallery manifest has no labeled crops");
  // Query labels are ground truth for evaluation only; prediction never reads
  // them.
  const std::vector<CropRecord> pool = ValidCrops(inputs.query);
  const TrackSet tracks = BuildTracks(inputs.query);

  const bool face_data = !inputs.face.empty() && !inputs.face_obs.empty();
  AnnotatedPredictions out;
  Gallery g_enriched(Modality::kReid);
  Gallery g_face(Modality::kFace);
  if (config.enrichment && face_data) {
    EnrichmentResult er =
        EnrichGallery(labeled, pool, inputs.reid, inputs.face, inputs.face_obs,
                      config.thresholds, config.enrichment_fraction, config.seed);
    g_enriched = std::move(er.enriched);
    g_face = std::move(er.face_gallery);
    out.decisions = std::move(er.decisions);
  } else {
    g_enriched = LabeledReidGallery(labeled, inputs.reid);
    if (face_data && config.alpha < 1.0) {
      g_face = BuildFaceGallery(labeled, inputs.face, inputs.face_obs, config.thresholds);
    }
  }

  const ScoringOptions options{config.alpha, config.thresholds.det_inference};
  std::vector<TrackPrediction> track_preds(tracks.size());
  std::vector<std::vector<CropPrediction>> crop_preds(tracks.size());
  internal::ParallelFor(tracks.size(), config.threads, [&](std::size_t i) {
    const Track& track = tracks[i];
    TrackPrediction& tp = track_preds[i];
    tp.vid_name = track.vid_name;
    tp.track_id = track.track_id;
    tp.n_crops = track.crops.size();
    if (config.granularity == Granularity::kTrack) {
      tp.prediction = PredictTrack(track, inputs.reid, inputs.face, inputs.face_obs,
                                   g_enriched, g_face, options);
      for (const CropRecord& c : track.crops) {
        crop_preds[i].push_back({c.im_name, tp.prediction.label});
      }
      return;
    }
    std::vector<ScoreVector> fused, reid, face;
    std::size_t n_faces = 0;
    for (const CropRecord& c : track.crops) {
      Track single{track.vid_name, track.track_id, {c}, std::nullopt};
      Prediction p = PredictTrack(single, inputs.reid, inputs.face, inputs.face_obs,
                                  g_enriched, g_face, options);
      crop_preds[i].push_back({c.im_name, p.label});
      n_faces += p.n_faces;
      fused.push_back(std::move(p.fused_scores));
      reid.push_back(std::move(p.reid_scores));
      face.push_back(std::move(p.face_scores));
    }
    tp.prediction.label = ImageModelTrackVote(fused);
    tp.prediction.fused_scores = ElementwiseMax(fused, ScoreSource::kFused);
    tp.prediction.reid_scores = ElementwiseMax(reid, ScoreSource::kReid);
    tp.prediction.face_scores = ElementwiseMax(face, ScoreSource::kFace);
    tp.prediction.n_images = track.crops.size();
    tp.prediction.n_faces = n_faces;
  });

  out.tracks = std::move(track_preds);
  for (auto& crops : crop_preds) {
    for (auto& c : crops) out.crops.push_back(std::move(c));
  }
  return out;
}

void WriteAnnotations(const AnnotatedPredictions& predictions,
                      const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());
  {
    auto out = OpenOutput(out_dir / "tracks.jsonl");
    for (const TrackPrediction& t : predictions.tracks) {
      OrderedJson rec;
      rec["vid_name"] = t.vid_name;
      rec["track_id"] = t.track_id;
      rec["label"] = t.prediction.label.str();
      rec["score_vector"] = ScoresJson(t.prediction.fused_scores);
      rec["n_images"] = t.prediction.n_images;
      rec["n_faces"] = t.prediction.n_faces;
      out << rec.dump() << '\n';
    }
  }
  {
    auto out = OpenOutput(out_dir / "crops.jsonl");
    for (const CropPrediction& c : predictions.crops) {
      OrderedJson rec;
      rec["im_name"] = c.im_name;
      rec["label"] = c.label.str();
      out << rec.dump() << '\n';
    }
  }
  {
    auto out = OpenOutput(out_dir / "decisions.jsonl");
    WriteDecisions(out, predictions.decisions);
  }
}

AnnotatedPredictions LoadAnnotations(const std::filesystem::path& dir) {
  AnnotatedPredictions out;
  auto read_lines = [](const std::filesystem::path& path, auto&& fn) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (internal::IsBlank(line)) continue;
      try {
        fn(Json::parse(line));
      } catch (const Json::exception& e) {
        throw ParseError(path.string(), line_no, e.what());
      } catch (const ValidationError& e) {
        throw ParseError(path.string(), line_no, e.what());
      }
    }
  };
  read_lines(dir / "tracks.jsonl", [&](const Json& rec) {
    TrackPrediction t;
    t.vid_name = rec.at("vid_name").get<std::string>();
    t.track_id = rec.at("track_id").get<std::int64_t>();
    t.prediction.label = IdentityLabel::Parse(rec.at("label").get<std::string>());
    t.prediction.fused_scores.source = ScoreSource::kFused;
    for (const auto& [id, s] : rec.at("score_vector").items()) {
      t.prediction.fused_scores.scores[IdentityLabel::Parse(id)] = s.get<double>();
    }
    t.prediction.n_images = rec.at("n_images").get<std::size_t>();
    t.prediction.n_faces = rec.at("n_faces").get<std::size_t>();
    t.n_crops = t.prediction.n_images;
    out.tracks.push_back(std::move(t));
  });
  read_lines(dir / "crops.jsonl", [&](const Json& rec) {
    out.crops.push_back({rec.at("im_name").get<std::string>(),
                         IdentityLabel::Parse(rec.at("label").get<std::string>())});
  });
  return out;
}

MetricsReport EvaluatePredictions(const AnnotatedPredictions& predictions,
                                  const RunInputs& inputs, const EvalSetting& setting) {
  setting.Validate();
  const std::set<IdentityLabel> gallery_ids = GalleryIdentities(inputs.gallery);

  std::map<std::string, IdentityLabel, std::less<>> crop_pred, crop_truth;
  for (const CropPrediction& c : predictions.crops) {
    const CropRecord* rec = inputs.query.Find(c.im_name);
    if (rec == nullptr) {
      throw ValidationError("prediction for unknown crop '" + c.im_name + "'");
    }
    if (!rec->label || rec->invalid) continue;
    if (!crop_pred.emplace(c.im_name, c.label).second) {
      throw ValidationError("duplicate prediction for crop '" + c.im_name + "'");
    }
  }
  for (const CropRecord& c : inputs.query.records()) {
    if (!c.invalid && c.label) crop_truth.emplace(c.im_name, *c.label);
  }
  const AccuracyResult image =
      PerImageAccuracy(crop_pred, crop_truth, gallery_ids, setting.set_mode);

  std::map<std::pair<std::string, std::int64_t>, const Track*> by_key;
  const TrackSet tracks = BuildTracks(inputs.query);
  for (const Track& t : tracks) by_key[{t.vid_name, t.track_id}] = &t;
  std::vector<TrackOutcome> outcomes;
  for (const TrackPrediction& tp : predictions.tracks) {
    auto it = by_key.find({tp.vid_name, tp.track_id});
    if (it == by_key.end()) {
      throw ValidationError("prediction for unknown track (" + tp.vid_name + ", " +
                            std::to_string(tp.track_id) + ")");
    }
    outcomes.push_back({it->second->crops.size(), tp.prediction.label,
                        it->second->ground_truth});
  }
  const AccuracyResult track = PerTrackAccuracy(outcomes, gallery_ids, setting);

  MetricsReport report;
  report.per_image_acc = image.accuracy();
  report.per_track_acc = track.accuracy();
  if (track.evaluated > 0) {
    report.top1 = *report.per_track_acc;
    report.n_queries_evaluated = track.evaluated;
    report.n_queries_excluded = track.excluded;
  } else {
    report.top1 = report.per_image_acc.value_or(0.0);
    report.n_queries_evaluated = image.evaluated;
    report.n_queries_excluded = image.excluded;
  }
  return report;
}

MetricsReport EvaluateRankingRun(const RunConfig& config, const RunInputs& inputs,
                                 ClothesMode mode) {
  std::map<std::string, ClothesRecord, std::less<>> clothes;
  if (!config.clothes_file.empty()) clothes = LoadClothesFile(config.clothes_file);
  auto meta_of = [&](const CropRecord& c) {
    SampleMeta m{c.im_name, *c.label, std::nullopt, std::nullopt};
    if (auto it = clothes.find(c.im_name); it != clothes.end()) {
      m.clothes_id = it->second.clothes_id;
      m.camera_id = it->second.camera_id;
    }
    return m;
  };
  auto vector_of = [&](const CropRecord& c) {
    auto v = inputs.reid.Find(c.im_name);
    if (!v) throw ValidationError("crop '" + c.im_name + "' has no ReID embedding");
    return *v;
  };

  RankingGallery gallery;
  gallery.dim = inputs.reid.dim();
  for (const CropRecord& c : LabeledCrops(inputs.gallery)) {
    gallery.meta.push_back(meta_of(c));
    auto v = vector_of(c);
    gallery.vectors.insert(gallery.vectors.end(), v.begin(), v.end());
  }
  std::vector<SampleMeta> queries;
  std::vector<double> query_vectors;
  for (const CropRecord& c : LabeledCrops(inputs.query)) {
    queries.push_back(meta_of(c));
    auto v = vector_of(c);
    query_vectors.insert(query_vectors.end(), v.begin(), v.end());
  }
  return EvaluateRanking(queries, query_vectors, gallery, mode);
}

}  // namespace ccreid
