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

#include "ccreid/face_observation.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "ccreid/error.h"
#include "text_util.h"

namespace ccreid {
namespace {

using internal::Json;
using internal::OrderedJson;

std::optional<Point> ReadPoint(const Json& rec, const char* key) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return std::nullopt;
  auto xy = it->get<std::vector<double>>();
  if (xy.size() != 2) {
    throw ValidationError(std::string(key) + " must be [x, y] or null");
  }
  return Point{xy[0], xy[1]};
}

OrderedJson PointJson(const std::optional<Point>& p) {
  if (!p) return nullptr;
  return OrderedJson::array({p->x, p->y});
}

}  // namespace

std::optional<Keypoints> FaceObservation::keypoints() const {
  if (!left_eye || !right_eye || !nose) return std::nullopt;
  return Keypoints{*left_eye, *right_eye, *nose};
}

void FaceObservationSet::Add(FaceObservation obs) {
  const Box& b = obs.box;
  if (!(b.x1 < b.x2) || !(b.y1 < b.y2)) {
    throw ValidationError("face box of '" + obs.sample_id + "' is not well-ordered");
  }
  if (!(obs.det_conf >= 0 && obs.det_conf <= 1)) {
    throw ValidationError("det_conf of '" + obs.sample_id + "' outside [0, 1]");
  }
  auto& faces = by_sample_[obs.sample_id];
  if (!faces.empty()) {
    const FaceObservation& first = faces.front();
    if (first.left_eye != obs.left_eye || first.right_eye != obs.right_eye ||
        first.nose != obs.nose) {
      throw ValidationError("faces of '" + obs.sample_id +
                            "' disagree on the main person's keypoints");
    }
  }
  obs.face_index = faces.size();
  faces.push_back(std::move(obs));
  ++num_faces_;
}

std::span<const FaceObservation> FaceObservationSet::ForSample(
    std::string_view sample_id) const {
  auto it = by_sample_.find(sample_id);
  if (it == by_sample_.end()) return {};
  return it->second;
}

FaceObservationSet ParseFaceObservations(std::istream& in,
                                         const std::string& source) {
  FaceObservationSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsBlank(line)) continue;
    try {
      Json rec = Json::parse(line);
      FaceObservation obs;
      obs.sample_id = rec.at("sample_id").get<std::string>();
      auto box = rec.at("box").get<std::vector<double>>();
      if (box.size() != 4) throw ValidationError("box must have 4 numbers");
      obs.box = Box{box[0], box[1], box[2], box[3]};
      obs.det_conf = rec.at("det_conf").get<double>();
      obs.left_eye = ReadPoint(rec, "left_eye");
      obs.right_eye = ReadPoint(rec, "right_eye");
      obs.nose = ReadPoint(rec, "nose");
      set.Add(std::move(obs));
    } catch (const Json::exception& e) {
      throw ParseError(source, line_no, e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return set;
}

FaceObservationSet LoadFaceObservations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open face observations " + path.string());
  return ParseFaceObservations(in, path.string());
}

void WriteFaceObservations(std::ostream& out, const FaceObservationSet& set) {
  for (const auto& [id, faces] : set.by_sample()) {
    for (const FaceObservation& f : faces) {
      OrderedJson rec;
      rec["sample_id"] = f.sample_id;
      rec["box"] = {f.box.x1, f.box.y1, f.box.x2, f.box.y2};
      rec["det_conf"] = f.det_conf;
      rec["left_eye"] = PointJson(f.left_eye);
      rec["right_eye"] = PointJson(f.right_eye);
      rec["nose"] = PointJson(f.nose);
      out << rec.dump() << '\n';
    }
  }
}

std::string FaceEmbeddingKey(std::string_view sample_id, std::size_t face_index) {
  return std::string(sample_id) + "#" + std::to_string(face_index);
}

std::optional<std::span<const double>> FindFaceEmbedding(
    const EmbeddingSet& faces, const FaceObservation& obs,
    std::size_t faces_in_crop) {
  if (auto v = faces.Find(FaceEmbeddingKey(obs.sample_id, obs.face_index))) return v;
  if (faces_in_crop == 1) return faces.Find(obs.sample_id);
  return std::nullopt;
}

}  // namespace ccreid
