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

#ifndef CCREID_PIPELINE_H_
#define CCREID_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccreid/embeddings.h"
#include "ccreid/enrichment.h"
#include "ccreid/evaluation.h"
#include "ccreid/face_observation.h"
#include "ccreid/manifest.h"
#include "ccreid/scoring.h"

namespace ccreid {

enum class Granularity { kTrack, kImage };

Granularity ParseGranularity(std::string_view text);
std::string_view GranularityName(Granularity g);

struct RunConfig {
  std::filesystem::path gallery_manifest;
  std::filesystem::path query_manifest;
  std::filesystem::path reid_embeddings;
  // Optional; without face data the face module is disabled.
  std::filesystem::path face_embeddings;
  std::filesystem::path face_observations;
  std::filesystem::path clothes_file;
  std::filesystem::path output_dir;

  double alpha = kDefaultAlpha;
  EnrichmentThresholds thresholds;
  EvalSetting eval;
  std::uint64_t seed = 0;
  double enrichment_fraction = 1.0;
  bool enrichment = true;
  Granularity granularity = Granularity::kTrack;
  // 0 picks the hardware concurrency.
  std::size_t threads = 0;

  // Throws ValidationError on out-of-range values or missing input files.
  void Validate() const;
};

// Parses a JSON config object; relative paths resolve against `base_dir`.
// Keys mirror the RunConfig fields; thresholds may be given as a preset name
// ("thresholds": "prcc") or an object, and eval fields sit at top level
// ("setting", "set_mode", "min_track_len").
RunConfig ParseRunConfig(std::string_view text,
                         const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

struct RunInputs {
  CropManifest gallery;
  CropManifest query;
  EmbeddingSet reid{Modality::kReid};
  EmbeddingSet face{Modality::kFace};
  FaceObservationSet face_obs;
};

// Loads every input named by `config`. Errors name the failing file.
RunInputs LoadRunInputs(const RunConfig& config);

struct TrackPrediction {
  std::string vid_name;
  std::int64_t track_id = 0;
  Prediction prediction;
  std::size_t n_crops = 0;
};

struct CropPrediction {
  std::string im_name;
  IdentityLabel label = IdentityLabel::Unknown();
};

struct AnnotatedPredictions {
  std::vector<TrackPrediction> tracks;
  std::vector<CropPrediction> crops;
  std::vector<EnrichmentDecision> decisions;
};

// Builds G_face and G_enriched (or the plain labeled gallery when enrichment
// is off) and predicts every query track. Output order follows the track
// order of BuildTracks, so results are deterministic for a fixed config.
AnnotatedPredictions Annotate(const RunConfig& config, const RunInputs& inputs);

// Writes tracks.jsonl, crops.jsonl and decisions.jsonl into `out_dir`.
void WriteAnnotations(const AnnotatedPredictions& predictions,
                      const std::filesystem::path& out_dir);
// Reads tracks.jsonl and crops.jsonl back (score vectors included).
AnnotatedPredictions LoadAnnotations(const std::filesystem::path& dir);

// Per-image and per-track accuracy of predictions against the query
// manifest's labels. top1 is the per-track accuracy when any track is
// eligible, else the per-image accuracy. mAP is not applicable.
MetricsReport EvaluatePredictions(const AnnotatedPredictions& predictions,
                                  const RunInputs& inputs,
                                  const EvalSetting& setting);

// Ranking evaluation of query crops against the labeled gallery crops using
// ReID embeddings. Clothes ids come from `clothes_file` when set.
MetricsReport EvaluateRankingRun(const RunConfig& config,
                                 const RunInputs& inputs, ClothesMode mode);

}  // namespace ccreid

#endif  // CCREID_PIPELINE_H_
