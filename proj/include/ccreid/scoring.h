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

#ifndef CCREID_SCORING_H_
#define CCREID_SCORING_H_

#include <cstddef>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "ccreid/embeddings.h"
#include "ccreid/face_observation.h"
#include "ccreid/gallery.h"
#include "ccreid/identity.h"
#include "ccreid/track.h"

namespace ccreid {

enum class ScoreSource { kReid, kFace, kFused };

std::string_view ScoreSourceName(ScoreSource s);

// Per-identity confidence. Identities missing from the map score 0.
struct ScoreVector {
  std::map<IdentityLabel, double> scores;
  ScoreSource source = ScoreSource::kReid;

  double at(const IdentityLabel& id) const {
    auto it = scores.find(id);
    return it == scores.end() ? 0.0 : it->second;
  }
};

struct Prediction {
  IdentityLabel label = IdentityLabel::Unknown();
  ScoreVector fused_scores;
  ScoreVector reid_scores;
  ScoreVector face_scores;
  // N: crops scored by ReID. M: crops that contributed a verified face.
  std::size_t n_images = 0;
  std::size_t n_faces = 0;
};

inline constexpr double kDefaultAlpha = 0.75;
inline constexpr double kDefaultInferenceDetection = 0.7;

struct ScoringOptions {
  double alpha = kDefaultAlpha;
  // Faces below this detector confidence do not contribute at inference.
  double det_inference = kDefaultInferenceDetection;
};

// Dot product of two unit vectors clamped to [-1, 1]. Throws ValidationError
// on a dimension mismatch.
double CosineSimilarity(std::span<const double> u, std::span<const double> v);

// Max similarity between `query` and the gallery vectors of `identity`; 0 when
// the identity has no gallery entries.
double IdentityConfidence(std::span<const double> query, const Gallery& gallery,
                          const IdentityLabel& identity);

// Mean over `images` of IdentityConfidence, for every gallery identity. The
// per-identity terms are summed in sorted order, so the result does not
// depend on image order. Throws ValidationError on an empty image list.
ScoreVector TrackScoreVector(std::span<const std::span<const double>> images,
                             const Gallery& gallery);

// alpha * v_reid + (1 - alpha) * v_face over the union of identities.
ScoreVector Fuse(const ScoreVector& v_reid, const ScoreVector& v_face,
                 double alpha);

// Highest-scoring identity; ties go to the lexicographically smallest label.
IdentityLabel PredictIdentity(const ScoreVector& v_pred);

// Scores one track: ReID over all crops against `g_enriched`, faces over the
// crops with a verified face at det_conf >= det_inference against `g_face`,
// then fuses. An empty `g_face` yields an all-zero face vector.
Prediction PredictTrack(const Track& track, const EmbeddingSet& reid_embeddings,
                        const EmbeddingSet& face_embeddings,
                        const FaceObservationSet& face_obs,
                        const Gallery& g_enriched, const Gallery& g_face,
                        const ScoringOptions& options);

}  // namespace ccreid

#endif  // CCREID_SCORING_H_
