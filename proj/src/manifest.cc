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

#include "ccreid/manifest.h"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "ccreid/error.h"
#include "text_util.h"

namespace ccreid {
namespace {

using internal::Split;
using internal::StripCr;
using internal::ToDouble;
using internal::ToInt;

constexpr std::size_t kNumColumns = 12;

std::optional<std::string> CheckRecord(const CropRecord& r) {
  if (r.im_name.empty()) return "empty im_name";
  if (r.frame_num < 0) return "negative frame_num";
  for (double v : {r.x1, r.y1, r.x2, r.y2, r.conf}) {
    if (!std::isfinite(v)) return "non-finite number";
  }
  if (!(r.x1 < r.x2)) return "box requires x1 < x2";
  if (!(r.y1 < r.y2)) return "box requires y1 < y2";
  if (r.conf < 0 || r.conf > 1) return "conf outside [0, 1]";
  return std::nullopt;
}

std::string RowRef(const CropRecord& r) { return "crop '" + r.im_name + "'"; }

}  // namespace

CropManifest::CropManifest(std::vector<CropRecord> records)
    : records_(std::move(records)) {
  std::set<std::tuple<std::string, std::int64_t, std::int64_t>> keys;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const CropRecord& r = records_[i];
    if (auto err = CheckRecord(r)) {
      throw ValidationError(RowRef(r) + ": " + *err);
    }
    if (!by_name_.emplace(r.im_name, i).second) {
      throw ValidationError("duplicate im_name '" + r.im_name + "'");
    }
    if (!keys.emplace(r.vid_name, r.track_id, r.crop_id).second) {
      throw ValidationError(RowRef(r) + ": duplicate (vid_name, track_id, crop_id)");
    }
  }
}

const CropRecord* CropManifest::Find(std::string_view im_name) const {
  auto it = by_name_.find(std::string(im_name));
  return it == by_name_.end() ? nullptr : &records_[it->second];
}

CropManifest ParseCropManifest(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<CropRecord> records;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::map<std::tuple<std::string, std::int64_t, std::int64_t>, std::size_t> keys;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = StripCr(line);
    if (line_no == 1 && text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    if (!have_header) {
      if (text != kManifestHeader) {
        throw ParseError(source, line_no,
                         "expected header '" + std::string(kManifestHeader) + "'");
      }
      have_header = true;
      continue;
    }
    if (internal::IsBlank(text)) continue;

    auto fields = Split(text, ',');
    if (fields.size() != kNumColumns) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(kNumColumns) + " fields, got " +
                           std::to_string(fields.size()));
    }
    CropRecord r;
    auto number = [&](std::size_t col, const char* name) {
      auto v = ToDouble(fields[col]);
      if (!v) throw ParseError(source, line_no, std::string("bad number in ") + name);
      return *v;
    };
    auto integer = [&](std::size_t col, const char* name) {
      auto v = ToInt(fields[col]);
      if (!v) throw ParseError(source, line_no, std::string("bad integer in ") + name);
      return *v;
    };
    try {
      if (!fields[0].empty()) r.label = IdentityLabel::Parse(fields[0]);
    } catch (const ValidationError& e) {
      throw ParseError(source, line_no, e.what());
    }
    r.im_name = std::string(fields[1]);
    r.frame_num = integer(2, "frame_num");
    r.x1 = number(3, "x1");
    r.y1 = number(4, "y1");
    r.x2 = number(5, "x2");
    r.y2 = number(6, "y2");
    r.conf = number(7, "conf");
    r.vid_name = std::string(fields[8]);
    r.track_id = integer(9, "track_id");
    r.crop_id = integer(10, "crop_id");
    if (fields[11] == "true") {
      r.invalid = true;
    } else if (fields[11] == "false") {
      r.invalid = false;
    } else {
      throw ParseError(source, line_no, "invalid must be 'true' or 'false'");
    }

    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (auto err = CheckRecord(r)) throw ValidationError(where + *err);
    if (auto [it, fresh] = seen.emplace(r.im_name, line_no); !fresh) {
      throw ValidationError(where + "duplicate im_name '" + r.im_name +
                            "' (first seen at line " + std::to_string(it->second) +
                            ")");
    }
    if (auto [it, fresh] = keys.emplace(std::make_tuple(r.vid_name, r.track_id, r.crop_id),
                                        line_no);
        !fresh) {
      throw ValidationError(where + "duplicate (vid_name, track_id, crop_id) (first seen at line " +
                            std::to_string(it->second) + ")");
    }
    records.push_back(std::move(r));
  }
  if (!have_header) throw ParseError(source, 0, "missing header row");
  return CropManifest(std::move(records));
}

CropManifest LoadCropManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  return ParseCropManifest(in, path.string());
}

std::string FormatNumber(double value) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void WriteCropManifest(std::ostream& out, const CropManifest& manifest) {
  out << kManifestHeader << '\n';
  for (const CropRecord& r : manifest.records()) {
    out << (r.label ? r.label->str() : "") << ',' << r.im_name << ','
        << r.frame_num << ',' << FormatNumber(r.x1) << ',' << FormatNumber(r.y1)
        << ',' << FormatNumber(r.x2) << ',' << FormatNumber(r.y2) << ','
        << FormatNumber(r.conf) << ',' << r.vid_name << ',' << r.track_id << ','
        << r.crop_id << ',' << (r.invalid ? "true" : "false") << '\n';
  }
}

}  // namespace ccreid
