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

#ifndef CCREID_EVALUATION_H_
#define CCREID_EVALUATION_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccreid/identity.h"
#include "ccreid/scoring.h"

namespace ccreid {

enum class ClothesMode { kGeneral, kSameClothes, kClothesChanging };
enum class SetMode { kOpen, kClosed };

ClothesMode ParseClothesMode(std::string_view text);
SetMode ParseSetMode(std::string_view text);
std::string_view ClothesModeName(ClothesMode m);
std::string_view SetModeName(SetMode m);

struct EvalSetting {
  ClothesMode clothes_mode = ClothesMode::kGeneral;
  SetMode set_mode = SetMode::kClosed;
  // Tracks shorter than this are ignored by per-track accuracy.
  std::size_t min_track_len = 10;

  void Validate() const;
};

struct MetricsReport {
  double top1 = 0;
  std::optional<double> map;
  std::optional<double> per_image_acc;
  std::optional<double> per_track_acc;
  std::size_t n_queries_evaluated = 0;
  std::size_t n_queries_excluded = 0;
};

// Identity and clothing of one evaluation sample.
struct SampleMeta {
  std::string sample_id;
  IdentityLabel identity = IdentityLabel::Unknown();
  std::optional<std::string> clothes_id;
  std::optional<std::string> camera_id;
};

// Line-delimited {sample_id, clothes_id?, camera_id?} records keyed by
// sample id.
struct ClothesRecord {
  std::optional<std::string> clothes_id;
  std::optional<std::string> camera_id;
};
std::map<std::string, ClothesRecord, std::less<>> LoadClothesFile(
    const std::filesystem::path& path);
std::map<std::string, ClothesRecord, std::less<>> ParseClothesFile(
    std::istream& in, const std::string& source);

// Indices of `gallery` kept for `query` under `mode`:
//   general          - everything;
//   same_clothes     - drops the query identity's samples in other clothes;
//   clothes_changing - drops the query identity's samples in the same clothes.
// Throws ValidationError when a needed clothes_id is missing.
std::vector<std::size_t> ApplySettingFilter(const SampleMeta& query,
                                            std::span<const SampleMeta> gallery,
                                            ClothesMode mode);

// Mean over relevant ranks k of precision@k; `relevance` is in rank order.
// Returns 0 when nothing is relevant.
double AveragePrecision(const std::vector<bool>& relevance);

struct RankOutcome {
  bool top1_hit = false;
  double average_precision = 0;
};

// Gallery of unit vectors for ranking evaluation.
struct RankingGallery {
  std::vector<SampleMeta> meta;
  std::vector<double> vectors;
  std::size_t dim = 0;

  std::span<const double> row(std::size_t i) const {
    return {vectors.data() + i * dim, dim};
  }
};

// Ranks the filtered gallery by descending cosine similarity (ties keep
// gallery order). Empty when the filtered gallery holds no sample of the
// query identity; such queries are excluded, not failed.
std::optional<RankOutcome> RankMetrics(std::span<const double> query_vec,
                                       const SampleMeta& query_meta,
                                       const RankingGallery& gallery,
                                       ClothesMode mode);

// Top-1 and mAP over all queries. `query_vectors` is row-major with the
// gallery's dim.
MetricsReport EvaluateRanking(std::span<const SampleMeta> queries,
                              std::span<const double> query_vectors,
                              const RankingGallery& gallery,
                              ClothesMode mode);

// Weighted average of same-clothes and clothes-changing reports by their
// evaluated query counts.
MetricsReport WeightedGeneral(const MetricsReport& same_clothes,
                              const MetricsReport& clothes_changing);

struct AccuracyResult {
  std::size_t correct = 0;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;

  std::optional<double> accuracy() const {
    if (evaluated == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(evaluated);
  }
};

// Label a prediction must carry to be correct under `mode`; empty when the
// sample is excluded (closed set, identity not in the gallery).
std::optional<IdentityLabel> ExpectedLabel(
    const IdentityLabel& truth, const std::set<IdentityLabel>& gallery_ids,
    SetMode mode);

// Fraction of crops labeled correctly. Every ground-truth crop needs a
// prediction and every prediction a ground truth; otherwise ValidationError.
AccuracyResult PerImageAccuracy(
    const std::map<std::string, IdentityLabel, std::less<>>& predictions,
    const std::map<std::string, IdentityLabel, std::less<>>& ground_truth,
    const std::set<IdentityLabel>& gallery_ids, SetMode mode);

struct TrackOutcome {
  std::size_t n_crops = 0;
  IdentityLabel predicted = IdentityLabel::Unknown();
  std::optional<IdentityLabel> truth;
};

// Fraction of tracks labeled correctly; tracks shorter than min_track_len or
// without ground truth are excluded.
AccuracyResult PerTrackAccuracy(std::span<const TrackOutcome> tracks,
                                const std::set<IdentityLabel>& gallery_ids,
                                const EvalSetting& setting);

// Single label for a track scored per image: the identity of the largest
// per-image confidence anywhere in the track, ties to the smallest label.
IdentityLabel ImageModelTrackVote(std::span<const ScoreVector> per_image);

// Single structured-text object; absent optionals are written as null.
void WriteMetricsReport(std::ostream& out, const MetricsReport& report);

}  // namespace ccreid

#endif  // CCREID_EVALUATION_H_
