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

#include "ccreid/scoring.h"

#include <algorithm>
#include <cmath>

#include "ccreid/error.h"
#include "ccreid/geometry.h"

namespace ccreid {
namespace {

double Dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double Clamp(double x) { return std::clamp(x, -1.0, 1.0); }

// Max similarity of `query` against every row of a packed block.
double BlockMax(std::span<const double> query, const Gallery::Block& block,
                std::size_t dim) {
  double best = -1.0;
  const double* rows = block.vectors.data();
  for (std::size_t r = 0; r < block.size(); ++r) {
    best = std::max(best, Clamp(Dot(query.data(), rows + r * dim, dim)));
  }
  return best;
}

}  // namespace

std::string_view ScoreSourceName(ScoreSource s) {
  switch (s) {
    case ScoreSource::kReid:
      return "reid";
    case ScoreSource::kFace:
      return "face";
    case ScoreSource::kFused:
      return "fused";
  }
  return "";
}

double CosineSimilarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ValidationError("cosine similarity of vectors with dims " +
                          std::to_string(u.size()) + " and " +
                          std::to_string(v.size()));
  }
  return Clamp(Dot(u.data(), v.data(), u.size()));
}

double IdentityConfidence(std::span<const double> query, const Gallery& gallery,
                          const IdentityLabel& identity) {
  const Gallery::Block* block = gallery.Find(identity);
  if (block == nullptr || block->size() == 0) return 0.0;
  if (query.size() != gallery.dim()) {
    throw ValidationError("query dim " + std::to_string(query.size()) +
                          " does not match gallery dim " +
                          std::to_string(gallery.dim()));
  }
  return BlockMax(query, *block, gallery.dim());
}

ScoreVector TrackScoreVector(std::span<const std::span<const double>> images,
                             const Gallery& gallery) {
  if (images.empty()) throw ValidationError("track score vector of no images");
  ScoreVector out;
  out.source = gallery.modality() == Modality::kReid ? ScoreSource::kReid
                                                     : ScoreSource::kFace;
  for (const auto& image : images) {
    if (!gallery.empty() && image.size() != gallery.dim()) {
      throw ValidationError("image dim " + std::to_string(image.size()) +
                            " does not match gallery dim " +
                            std::to_string(gallery.dim()));
    }
  }
  std::vector<double> terms(images.size());
  for (const auto& [id, block] : gallery.entries()) {
    for (std::size_t i = 0; i < images.size(); ++i) {
      terms[i] = BlockMax(images[i], block, gallery.dim());
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0;
    for (double t : terms) sum += t;
    out.scores[id] = sum / static_cast<double>(images.size());
  }
  return out;
}

ScoreVector Fuse(const ScoreVector& v_reid, const ScoreVector& v_face,
                 double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1]");
  }
  ScoreVector out;
  out.source = ScoreSource::kFused;
  for (const auto& [id, s] : v_reid.scores) out.scores[id] = 0.0;
  for (const auto& [id, s] : v_face.scores) out.scores[id] = 0.0;
  for (auto& [id, s] : out.scores) {
    s = alpha * v_reid.at(id) + (1.0 - alpha) * v_face.at(id);
  }
  return out;
}

IdentityLabel PredictIdentity(const ScoreVector& v_pred) {
  if (v_pred.scores.empty()) throw ValidationError("empty score vector");
  auto best = v_pred.scores.begin();
  for (auto it = std::next(best); it != v_pred.scores.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

Prediction PredictTrack(const Track& track, const EmbeddingSet& reid_embeddings,
                        const EmbeddingSet& face_embeddings,
                        const FaceObservationSet& face_obs,
                        const Gallery& g_enriched, const Gallery& g_face,
                        const ScoringOptions& options) {
  std::vector<std::span<const double>> reid_images;
  std::vector<std::span<const double>> face_images;
  reid_images.reserve(track.crops.size());
  for (const CropRecord& crop : track.crops) {
    auto reid = reid_embeddings.Find(crop.im_name);
    if (!reid) {
      throw ValidationError("crop '" + crop.im_name + "' has no ReID embedding");
    }
    reid_images.push_back(*reid);
    if (g_face.empty()) continue;
    auto face = FindVerifiedFace(face_obs, face_embeddings, crop.im_name);
    if (face && face->det_conf >= options.det_inference) {
      face_images.push_back(face->embedding);
    }
  }
  if (reid_images.empty()) {
    throw ValidationError("track (" + track.vid_name + ", " +
                          std::to_string(track.track_id) + ") has no crops");
  }

  Prediction p;
  p.n_images = reid_images.size();
  p.n_faces = face_images.size();
  p.reid_scores = TrackScoreVector(reid_images, g_enriched);
  if (face_images.empty()) {
    p.face_scores.source = ScoreSource::kFace;
    for (const auto& id : g_face.Identities()) p.face_scores.scores[id] = 0.0;
  } else {
    p.face_scores = TrackScoreVector(face_images, g_face);
  }
  p.fused_scores = Fuse(p.reid_scores, p.face_scores, options.alpha);
  p.label = PredictIdentity(p.fused_scores);
  return p;
}

}  // namespace ccreid
