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

#include "ccreid/geometry.h"

namespace ccreid {
namespace {

bool Contains(const Box& box, const Point& p) {
  return p.x >= box.x1 && p.x <= box.x2 && p.y >= box.y1 && p.y <= box.y2;
}

}  // namespace

bool FaceInsideCheck(const Box& box, const Point& left_eye,
                     const Point& right_eye, const Point& nose) {
  return Contains(box, left_eye) && Contains(box, right_eye) &&
         Contains(box, nose);
}

FaceMatchResult SelectMainFace(std::span<const FaceObservation> faces,
                               const std::optional<Keypoints>& keypoints) {
  FaceMatchResult result;
  if (!keypoints) return result;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (!FaceInsideCheck(faces[i].box, keypoints->left_eye,
                         keypoints->right_eye, keypoints->nose)) {
      continue;
    }
    if (!result.matched || faces[i].det_conf > faces[*result.chosen_face_index].det_conf) {
      result.matched = true;
      result.chosen_face_index = i;
    }
  }
  return result;
}

FaceMatchResult SelectMainFace(std::span<const FaceObservation> faces) {
  if (faces.empty()) return {};
  return SelectMainFace(faces, faces.front().keypoints());
}

std::optional<VerifiedFace> FindVerifiedFace(const FaceObservationSet& observations,
                                             const EmbeddingSet& face_embeddings,
                                             std::string_view sample_id) {
  auto faces = observations.ForSample(sample_id);
  FaceMatchResult match = SelectMainFace(faces);
  if (!match.matched) return std::nullopt;
  const FaceObservation& face = faces[*match.chosen_face_index];
  auto embedding = FindFaceEmbedding(face_embeddings, face, faces.size());
  if (!embedding) return std::nullopt;
  return VerifiedFace{*match.chosen_face_index, face.det_conf, *embedding};
}

}  // namespace ccreid
