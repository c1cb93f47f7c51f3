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

#ifndef CCREID_SYNTHETIC_H_
#define CCREID_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "ccreid/embeddings.h"
#include "ccreid/evaluation.h"
#include "ccreid/face_observation.h"
#include "ccreid/manifest.h"

namespace ccreid {

// Generator parameters for a labeled gallery plus query tracks with known
// ground truth.
//
// Identity i has a unit vector u_i; every clothing set has a unit vector c.
// A crop's ReID embedding is normalize((1 - w) u_i + w c + n) with
// w = reid_clothes_weight and n ~ N(0, reid_noise_sigma^2 / dim) per
// component. Its face, visible with probability face_visibility_rate, embeds
// as normalize(u_i + n_f) with n_f ~ N(0, face_noise_sigma^2 / dim). Clean
// faces draw det_conf from U[0.8, 1.0]; a noisy_face_rate share of visible
// faces instead draw det_conf from U[0.3, 0.7] and use noisy_face_sigma.
// Gallery crops wear clothing 0; query tracks cycle through clothing
// 1..n_clothes_per_identity-1 (clothing 0 when there is only one). Unknown
// identities appear only in query tracks.
struct SyntheticSpec {
  std::size_t n_identities = 10;
  std::size_t n_unknown_identities = 0;
  std::size_t n_clothes_per_identity = 2;
  std::size_t dim = 64;
  double face_noise_sigma = 0.3;
  double reid_noise_sigma = 0.1;
  double reid_clothes_weight = 0.5;
  double face_visibility_rate = 0.8;
  double noisy_face_rate = 0.0;
  double noisy_face_sigma = 1.5;
  // Share of visible faces that come with a second, non-matching face
  // listed first in the crop.
  double distractor_face_rate = 0.0;
  // Pairwise |cos| bound between identity vectors (rejection sampled).
  double max_identity_cosine = 0.2;
  std::size_t crops_per_track = 10;
  std::size_t tracks_per_identity = 2;
  std::size_t gallery_crops_per_identity = 10;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct SyntheticDataset {
  SyntheticSpec spec;
  CropManifest gallery;
  CropManifest query;
  EmbeddingSet reid{Modality::kReid};
  EmbeddingSet face{Modality::kFace};
  FaceObservationSet face_obs;
  std::map<std::string, ClothesRecord, std::less<>> clothes;
};

SyntheticDataset GenerateSynthetic(const SyntheticSpec& spec);

// Writes gallery.csv, query.csv, reid.jsonl, face.jsonl, faces.jsonl,
// clothes.jsonl and a config.json that points at them. Throws Error when the
// directory cannot be written.
void WriteSyntheticDataset(const SyntheticDataset& dataset,
                           const std::filesystem::path& out_dir);

}  // namespace ccreid

#endif  // CCREID_SYNTHETIC_H_
