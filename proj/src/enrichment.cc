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

#include "ccreid/enrichment.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "ccreid/error.h"
#include "ccreid/geometry.h"
#include "ccreid/scoring.h"
#include "text_util.h"

namespace ccreid {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

EnrichmentThresholds Benchmark(double det, double sim) {
  EnrichmentThresholds t = EnrichmentThresholds::Street42();
  t.det_enrich = det;
  t.det_inference = det;
  t.sim_min = sim;
  return t;
}

bool InRange(double v, double lo, double hi) { return v >= lo && v <= hi; }

}  // namespace

void EnrichmentThresholds::Validate() const {
  if (!InRange(det_enrich, 0, 1)) throw ValidationError("det_enrich outside [0, 1]");
  if (!InRange(det_inference, 0, 1)) {
    throw ValidationError("det_inference outside [0, 1]");
  }
  if (!InRange(sim_min, -1, 1)) throw ValidationError("sim_min outside [-1, 1]");
  if (!(rank_diff_min >= 0)) throw ValidationError("rank_diff_min must be >= 0");
  if (!InRange(unknown_sim_max, -1, 1)) {
    throw ValidationError("unknown_sim_max outside [-1, 1]");
  }
  if (unknown_sim_max > sim_min) {
    throw ValidationError("unknown_sim_max must not exceed sim_min");
  }
}

EnrichmentThresholds EnrichmentThresholds::Street42() {
  return EnrichmentThresholds{0.8, 0.7, 0.4, 0.1, 0.3, false};
}
EnrichmentThresholds EnrichmentThresholds::Ccvid() { return Benchmark(0.5, 0.75); }
EnrichmentThresholds EnrichmentThresholds::Ltcc() { return Benchmark(0.8, 0.5); }
EnrichmentThresholds EnrichmentThresholds::Prcc() { return Benchmark(0.7, 0.65); }
EnrichmentThresholds EnrichmentThresholds::Last() { return Benchmark(0.7, 0.45); }

EnrichmentThresholds EnrichmentThresholds::Preset(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "42street" || lower == "street42" || lower == "default") {
    return Street42();
  }
  if (lower == "ccvid") return Ccvid();
  if (lower == "ltcc") return Ltcc();
  if (lower == "prcc") return Prcc();
  if (lower == "last") return Last();
  throw ValidationError("unknown threshold preset '" + std::string(name) + "'");
}

std::string_view OutcomeName(DecisionOutcome o) {
  switch (o) {
    case DecisionOutcome::kLabeled:
      return "labeled";
    case DecisionOutcome::kUnknown:
      return "unknown";
    case DecisionOutcome::kSkipped:
      return "skipped";
  }
  return "";
}

std::string_view SkipReasonName(SkipReason r) {
  switch (r) {
    case SkipReason::kNone:
      return "none";
    case SkipReason::kNoFace:
      return "no_face";
    case SkipReason::kLowDetection:
      return "low_detection";
    case SkipReason::kLowSimilarity:
      return "low_similarity";
    case SkipReason::kAmbiguous:
      return "ambiguous";
  }
  return "";
}

Gallery BuildFaceGallery(std::span<const CropRecord> labeled,
                         const EmbeddingSet& face_embeddings,
                         const FaceObservationSet& face_obs,
                         const EnrichmentThresholds& thresholds) {
  Gallery g_face(Modality::kFace);
  for (const CropRecord& crop : labeled) {
    if (!crop.label) continue;
    if (crop.label->is_unknown()) {
      throw ValidationError("labeled crop '" + crop.im_name +
                            "' carries the Unknown label");
    }
    auto face = FindVerifiedFace(face_obs, face_embeddings, crop.im_name);
    if (!face || face->det_conf < thresholds.det_enrich) continue;
    g_face.Add(*crop.label, crop.im_name, face->embedding,
               Provenance::kOriginalLabeled);
  }
  if (g_face.empty()) {
    throw ValidationError(
        "face gallery is empty: no labeled crop has a verified face at the "
        "enrichment detection threshold");
  }
  return g_face;
}

EnrichmentDecision DecideQueryLabel(std::span<const double> query_face,
                                    double det_conf, const Gallery& g_face,
                                    const EnrichmentThresholds& thresholds) {
  if (g_face.empty()) throw ValidationError("decision against an empty face gallery");
  EnrichmentDecision d;
  d.det_conf = det_conf;

  const IdentityLabel* best_id = nullptr;
  double s1 = -std::numeric_limits<double>::infinity();
  double s2 = -std::numeric_limits<double>::infinity();
  for (const auto& [id, block] : g_face.entries()) {
    const double s = IdentityConfidence(query_face, g_face, id);
    if (best_id == nullptr || s > s1) {
      s2 = s1;
      s1 = s;
      best_id = &id;
    } else if (s > s2) {
      s2 = s;
    }
  }
  d.best_sim = s1;
  d.rank_gap = s1 - s2;  // +inf with a single identity

  if (det_conf < thresholds.det_enrich) {
    d.reason = SkipReason::kLowDetection;
  } else if (thresholds.open_set && s1 < thresholds.unknown_sim_max) {
    d.outcome = DecisionOutcome::kUnknown;
  } else if (s1 < thresholds.sim_min) {
    d.reason = SkipReason::kLowSimilarity;
  } else if (d.rank_gap < thresholds.rank_diff_min) {
    d.reason = SkipReason::kAmbiguous;
  } else {
    d.outcome = DecisionOutcome::kLabeled;
    d.label = *best_id;
  }
  return d;
}

Gallery LabeledReidGallery(std::span<const CropRecord> labeled,
                           const EmbeddingSet& reid_embeddings) {
  Gallery g(Modality::kReid);
  for (const CropRecord& crop : labeled) {
    if (!crop.label) continue;
    auto v = reid_embeddings.Find(crop.im_name);
    if (!v) {
      throw ValidationError("labeled crop '" + crop.im_name +
                            "' has no ReID embedding");
    }
    g.Add(*crop.label, crop.im_name, *v, Provenance::kOriginalLabeled);
  }
  return g;
}

std::vector<std::size_t> SubsamplePool(std::size_t n, double fraction,
                                       std::uint64_t seed) {
  if (!InRange(fraction, 0, 1)) {
    throw ValidationError("enrichment fraction outside [0, 1]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  // Slack absorbs products such as 0.29 * 100 = 28.999999999999996.
  const auto take = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(n) + 1e-9));
  order.resize(std::min(take, n));
  std::sort(order.begin(), order.end());
  return order;
}

EnrichmentResult EnrichGallery(std::span<const CropRecord> labeled,
                               std::span<const CropRecord> queries,
                               const EmbeddingSet& reid_embeddings,
                               const EmbeddingSet& face_embeddings,
                               const FaceObservationSet& face_obs,
                               const EnrichmentThresholds& thresholds,
                               double enrichment_fraction, std::uint64_t seed) {
  thresholds.Validate();
  if (labeled.empty()) throw ValidationError("enrichment needs labeled crops");
  EnrichmentResult result;
  result.enriched = LabeledReidGallery(labeled, reid_embeddings);
  result.face_gallery =
      BuildFaceGallery(labeled, face_embeddings, face_obs, thresholds);

  for (std::size_t i : SubsamplePool(queries.size(), enrichment_fraction, seed)) {
    const CropRecord& crop = queries[i];
    EnrichmentDecision d;
    auto face = FindVerifiedFace(face_obs, face_embeddings, crop.im_name);
    if (!face) {
      d.reason = SkipReason::kNoFace;
      d.best_sim = d.rank_gap = d.det_conf = kNaN;
    } else {
      d = DecideQueryLabel(face->embedding, face->det_conf, result.face_gallery,
                           thresholds);
    }
    d.sample_id = crop.im_name;
    if (d.outcome != DecisionOutcome::kSkipped) {
      auto reid = reid_embeddings.Find(crop.im_name);
      if (!reid) {
        throw ValidationError("query crop '" + crop.im_name +
                              "' has no ReID embedding");
      }
      const IdentityLabel label =
          d.outcome == DecisionOutcome::kLabeled ? *d.label : IdentityLabel::Unknown();
      result.enriched.Add(label, crop.im_name, *reid,
                          Provenance::kEnrichedFromQuery);
    }
    result.decisions.push_back(std::move(d));
  }
  return result;
}

void WriteDecisions(std::ostream& out,
                    std::span<const EnrichmentDecision> decisions) {
  for (const EnrichmentDecision& d : decisions) {
    internal::OrderedJson rec;
    rec["sample_id"] = d.sample_id;
    rec["outcome"] = OutcomeName(d.outcome);
    if (d.outcome == DecisionOutcome::kSkipped) rec["reason"] = SkipReasonName(d.reason);
    if (d.label) rec["label"] = d.label->str();
    rec["best_sim"] = internal::NumberOrNull(d.best_sim);
    rec["rank_gap"] = internal::NumberOrNull(d.rank_gap);
    rec["det_conf"] = internal::NumberOrNull(d.det_conf);
    out << rec.dump() << '\n';
  }
}

void WriteGallery(std::ostream& out, const Gallery& gallery) {
  for (const auto& [id, block] : gallery.entries()) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      internal::OrderedJson rec;
      rec["sample_id"] = block.sample_ids[i];
      rec["label"] = id.str();
      rec["provenance"] = ProvenanceName(block.provenance[i]);
      out << rec.dump() << '\n';
    }
  }
}

}  // namespace ccreid
