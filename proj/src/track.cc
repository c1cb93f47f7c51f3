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

#include "ccreid/track.h"

#include <algorithm>
#include <map>
#include <utility>

#include "ccreid/error.h"

namespace ccreid {

TrackSet BuildTracks(const CropManifest& manifest) {
  std::map<std::pair<std::string, std::int64_t>, Track> grouped;
  for (const CropRecord& crop : manifest.records()) {
    if (crop.invalid) continue;
    Track& t = grouped[{crop.vid_name, crop.track_id}];
    if (t.crops.empty()) {
      t.vid_name = crop.vid_name;
      t.track_id = crop.track_id;
    }
    if (crop.label) {
      if (t.ground_truth && *t.ground_truth != *crop.label) {
        throw IntegrityError("track (" + crop.vid_name + ", " +
                             std::to_string(crop.track_id) +
                             ") mixes labels '" + t.ground_truth->str() +
                             "' and '" + crop.label->str() + "'");
      }
      t.ground_truth = crop.label;
    }
    t.crops.push_back(crop);
  }

  TrackSet tracks;
  tracks.reserve(grouped.size());
  for (auto& [key, t] : grouped) {
    std::sort(t.crops.begin(), t.crops.end(),
              [](const CropRecord& a, const CropRecord& b) {
                return a.crop_id < b.crop_id;
              });
    tracks.push_back(std::move(t));
  }
  return tracks;
}

std::vector<CropRecord> LabeledCrops(const CropManifest& manifest) {
  std::vector<CropRecord> out;
  for (const CropRecord& c : manifest.records()) {
    if (!c.invalid && c.label) out.push_back(c);
  }
  return out;
}

std::vector<CropRecord> ValidCrops(const CropManifest& manifest) {
  std::vector<CropRecord> out;
  for (const CropRecord& c : manifest.records()) {
    if (!c.invalid) out.push_back(c);
  }
  return out;
}

}  // namespace ccreid
