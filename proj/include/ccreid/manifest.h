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

#ifndef CCREID_MANIFEST_H_
#define CCREID_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ccreid/identity.h"

namespace ccreid {

// One person crop with its spatial and temporal metadata.
struct CropRecord {
  std::optional<IdentityLabel> label;
  std::string im_name;
  std::int64_t frame_num = 0;
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  double conf = 0;
  std::string vid_name;
  std::int64_t track_id = 0;
  std::int64_t crop_id = 0;
  bool invalid = false;

  bool operator==(const CropRecord&) const = default;
};

// Column order of the manifest header row.
inline constexpr std::string_view kManifestHeader =
    "label,im_name,frame_num,x1,y1,x2,y2,conf,vid_name,track_id,crop_id,invalid";

// Validated collection of crop records, in file order.
class CropManifest {
 public:
  CropManifest() = default;
  // Validates invariants; throws ValidationError naming the offending record.
  explicit CropManifest(std::vector<CropRecord> records);

  const std::vector<CropRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const CropRecord* Find(std::string_view im_name) const;

 private:
  std::vector<CropRecord> records_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

// `source` is used only for diagnostics.
CropManifest ParseCropManifest(std::istream& in, const std::string& source);
CropManifest LoadCropManifest(const std::filesystem::path& path);

void WriteCropManifest(std::ostream& out, const CropManifest& manifest);

// Shortest decimal text that round-trips to the same double.
std::string FormatNumber(double value);

}  // namespace ccreid

#endif  // CCREID_MANIFEST_H_
