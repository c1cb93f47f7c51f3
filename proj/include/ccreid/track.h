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

#ifndef CCREID_TRACK_H_
#define CCREID_TRACK_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccreid/identity.h"
#include "ccreid/manifest.h"

namespace ccreid {

// Valid crops of one tracked person, ascending by crop_id.
struct Track {
  std::string vid_name;
  std::int64_t track_id = 0;
  std::vector<CropRecord> crops;
  std::optional<IdentityLabel> ground_truth;
};

using TrackSet = std::vector<Track>;

// Groups valid crops by (vid_name, track_id). Tracks are ordered by vid_name
// then track_id. A track's ground truth is the common label of its labeled
// crops; disagreeing labels raise IntegrityError.
TrackSet BuildTracks(const CropManifest& manifest);

// Valid crops that carry a label, in manifest order.
std::vector<CropRecord> LabeledCrops(const CropManifest& manifest);
// All valid crops, in manifest order.
std::vector<CropRecord> ValidCrops(const CropManifest& manifest);

}  // namespace ccreid

#endif  // CCREID_TRACK_H_
