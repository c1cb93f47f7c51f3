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

#ifndef CCREID_FACE_OBSERVATION_H_
#define CCREID_FACE_OBSERVATION_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccreid/embeddings.h"

namespace ccreid {

struct Point {
  double x = 0, y = 0;
  bool operator==(const Point&) const = default;
};

// Axis-aligned rectangle, top-left (x1, y1) to bottom-right (x2, y2).
struct Box {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  bool operator==(const Box&) const = default;
};

// Eyes and nose of the crop's main person, from the pose estimator.
struct Keypoints {
  Point left_eye, right_eye, nose;
};

// One detected face in a crop. Coordinates are crop-local pixels.
struct FaceObservation {
  std::string sample_id;
  Box box;
  double det_conf = 0;
  std::optional<Point> left_eye, right_eye, nose;
  // Position among the faces detected in the same crop, in file order.
  std::size_t face_index = 0;

  // Present only when all three keypoints are.
  std::optional<Keypoints> keypoints() const;
};

// Face observations grouped by crop. All faces of one crop must carry the same
// pose keypoints, since those describe the crop's main person.
class FaceObservationSet {
 public:
  void Add(FaceObservation obs);

  std::span<const FaceObservation> ForSample(std::string_view sample_id) const;
  std::size_t num_samples() const { return by_sample_.size(); }
  std::size_t num_faces() const { return num_faces_; }
  bool empty() const { return num_faces_ == 0; }
  const std::map<std::string, std::vector<FaceObservation>, std::less<>>&
  by_sample() const {
    return by_sample_;
  }

 private:
  std::map<std::string, std::vector<FaceObservation>, std::less<>> by_sample_;
  std::size_t num_faces_ = 0;
};

FaceObservationSet ParseFaceObservations(std::istream& in,
                                         const std::string& source);
FaceObservationSet LoadFaceObservations(const std::filesystem::path& path);
void WriteFaceObservations(std::ostream& out, const FaceObservationSet& set);

// Face embedding key for a face: "<im_name>#<face_index>". A crop with a single
// detected face may also be keyed by the bare "<im_name>".
std::string FaceEmbeddingKey(std::string_view sample_id, std::size_t face_index);
std::optional<std::span<const double>> FindFaceEmbedding(
    const EmbeddingSet& faces, const FaceObservation& obs,
    std::size_t faces_in_crop);

}  // namespace ccreid

#endif  // CCREID_FACE_OBSERVATION_H_
