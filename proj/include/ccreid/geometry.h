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

#ifndef CCREID_GEOMETRY_H_
#define CCREID_GEOMETRY_H_

#include <cstddef>
#include <optional>
#include <span>

#include "ccreid/face_observation.h"

namespace ccreid {

struct FaceMatchResult {
  bool matched = false;
  // Set iff matched.
  std::optional<std::size_t> chosen_face_index;
};

// True iff both eyes and the nose lie inside `box`, edges included.
bool FaceInsideCheck(const Box& box, const Point& left_eye,
                     const Point& right_eye, const Point& nose);

// Picks the detected face that belongs to the crop's main person: the face
// whose box contains the main person's eyes and nose. Among several such
// faces the highest det_conf wins, then the lowest index. Without keypoints
// nothing can be verified and the result is unmatched.
FaceMatchResult SelectMainFace(std::span<const FaceObservation> faces,
                               const std::optional<Keypoints>& keypoints);

// Convenience overload taking the keypoints carried by the observations.
FaceMatchResult SelectMainFace(std::span<const FaceObservation> faces);

// The main person's face in a crop together with its embedding.
struct VerifiedFace {
  std::size_t face_index = 0;
  double det_conf = 0;
  std::span<const double> embedding;
};

// Runs SelectMainFace over the crop's observations and looks up the chosen
// face's embedding. Empty when no face is verified or it has no embedding.
std::optional<VerifiedFace> FindVerifiedFace(const FaceObservationSet& observations,
                                             const EmbeddingSet& face_embeddings,
                                             std::string_view sample_id);

}  // namespace ccreid

#endif  // CCREID_GEOMETRY_H_
