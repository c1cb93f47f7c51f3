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

#ifndef CCREID_ENRICHMENT_H_
#define CCREID_ENRICHMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccreid/embeddings.h"
#include "ccreid/face_observation.h"
#include "ccreid/gallery.h"
#include "ccreid/identity.h"
#include "ccreid/manifest.h"

namespace ccreid {

// Thresholds of the face module. Detection values apply to detector
// confidence; similarity values to cosine similarity against G_face.
struct EnrichmentThresholds {
  double det_enrich = 0.8;
  double det_inference = 0.7;
  double sim_min = 0.4;
  double rank_diff_min = 0.1;
  double unknown_sim_max = 0.3;
  bool open_set = false;

  // Throws ValidationError when a value is out of range or
  // unknown_sim_max > sim_min.
  void Validate() const;

  // Operating point tuned on a long-form theatre recording (open-set capable).
  static EnrichmentThresholds Street42();
  // Per-benchmark detection / similarity pairs. The remaining fields keep the
  // Street42 values, and inference detection equals the enrichment one.
  static EnrichmentThresholds Ccvid();
  static EnrichmentThresholds Ltcc();
  static EnrichmentThresholds Prcc();
  static EnrichmentThresholds Last();
  // Looks up a preset by case-insensitive name; throws ValidationError.
  static EnrichmentThresholds Preset(std::string_view name);
};

enum class DecisionOutcome { kLabeled, kUnknown, kSkipped };
enum class SkipReason { kNone, kNoFace, kLowDetection, kLowSimilarity, kAmbiguous };

std::string_view OutcomeName(DecisionOutcome o);
std::string_view SkipReasonName(SkipReason r);

struct EnrichmentDecision {
  std::string sample_id;
  DecisionOutcome outcome = DecisionOutcome::kSkipped;
  SkipReason reason = SkipReason::kNone;
  // Set iff outcome is kLabeled.
  std::optional<IdentityLabel> label;
  // Top identity similarity s1 and s1 - s2 (+inf with a single identity).
  // NaN when no face was scored.
  double best_sim = 0;
  double rank_gap = 0;
  double det_conf = 0;
};

// G_face: one entry per labeled crop whose main face is verified, has an
// embedding, and reaches det_enrich. Throws ValidationError when nothing
// qualifies.
Gallery BuildFaceGallery(std::span<const CropRecord> labeled,
                         const EmbeddingSet& face_embeddings,
                         const FaceObservationSet& face_obs,
                         const EnrichmentThresholds& thresholds);

// Labels one query face against G_face. Throws ValidationError when g_face is
// empty.
EnrichmentDecision DecideQueryLabel(std::span<const double> query_face,
                                    double det_conf, const Gallery& g_face,
                                    const EnrichmentThresholds& thresholds);

// The original labeled ReID gallery.
Gallery LabeledReidGallery(std::span<const CropRecord> labeled,
                           const EmbeddingSet& reid_embeddings);

// Indices into a pool of size n chosen for enrichment: the first
// floor(fraction * n) entries of a seeded permutation, returned ascending.
// For a fixed seed, a smaller fraction always selects a subset.
std::vector<std::size_t> SubsamplePool(std::size_t n, double fraction,
                                       std::uint64_t seed);

struct EnrichmentResult {
  Gallery face_gallery{Modality::kFace};
  Gallery enriched{Modality::kReid};
  // One decision per subsampled query crop, in pool order.
  std::vector<EnrichmentDecision> decisions;
};

// Builds G_face, labels the (subsampled) query crops by face, and assembles
// G_enriched from the labeled crops plus every query crop decided labeled or
// Unknown. Unknown crops enter G_enriched only, never G_face.
EnrichmentResult EnrichGallery(std::span<const CropRecord> labeled,
                               std::span<const CropRecord> queries,
                               const EmbeddingSet& reid_embeddings,
                               const EmbeddingSet& face_embeddings,
                               const FaceObservationSet& face_obs,
                               const EnrichmentThresholds& thresholds,
                               double enrichment_fraction, std::uint64_t seed);

// Line-delimited audit log: {sample_id, outcome, reason?, label?, best_sim,
// rank_gap, det_conf}. Non-finite numbers are written as null.
void WriteDecisions(std::ostream& out,
                    std::span<const EnrichmentDecision> decisions);
// Line-delimited {sample_id, label, provenance} listing of a gallery.
void WriteGallery(std::ostream& out, const Gallery& gallery);

}  // namespace ccreid

#endif  // CCREID_ENRICHMENT_H_
