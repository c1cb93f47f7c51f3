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

#include "ccreid/embeddings.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "ccreid/error.h"
#include "text_util.h"

namespace ccreid {

std::string_view ModalityName(Modality m) {
  return m == Modality::kReid ? "reid" : "face";
}

Modality ParseModality(std::string_view text) {
  if (text == "reid") return Modality::kReid;
  if (text == "face") return Modality::kFace;
  throw ValidationError("unknown modality '" + std::string(text) + "'");
}

std::vector<double> Normalized(std::span<const double> v) {
  double sq = 0;
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError("non-finite vector component");
    sq += x * x;
  }
  const double norm = std::sqrt(sq);
  if (!(norm > 0) || !std::isfinite(norm)) {
    throw ValidationError("zero-norm vector");
  }
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

void EmbeddingSet::Add(std::string sample_id, std::span<const double> values) {
  if (values.empty()) throw ValidationError("empty vector for '" + sample_id + "'");
  if (dim_ == 0) {
    dim_ = values.size();
  } else if (values.size() != dim_) {
    throw ValidationError("dimension mismatch for '" + sample_id + "': " +
                          std::to_string(values.size()) + " vs " +
                          std::to_string(dim_));
  }
  std::vector<double> unit;
  try {
    unit = Normalized(values);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(e.what()) + " for '" + sample_id + "'");
  }
  if (!index_.emplace(sample_id, ids_.size()).second) {
    throw ValidationError("duplicate sample_id '" + sample_id + "'");
  }
  ids_.push_back(std::move(sample_id));
  data_.insert(data_.end(), unit.begin(), unit.end());
}

std::optional<std::span<const double>> EmbeddingSet::Find(
    std::string_view sample_id) const {
  auto it = index_.find(std::string(sample_id));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

EmbeddingSet ParseEmbeddings(std::istream& in, const std::string& source,
                             Modality expected_modality) {
  EmbeddingSet set(expected_modality);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsBlank(line)) continue;
    internal::Json rec;
    try {
      rec = internal::Json::parse(line);
    } catch (const internal::Json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
    try {
      const std::string id = rec.at("sample_id").get<std::string>();
      const Modality modality = ParseModality(rec.at("modality").get<std::string>());
      if (modality != expected_modality) {
        throw ValidationError("modality '" + std::string(ModalityName(modality)) +
                              "' where '" +
                              std::string(ModalityName(expected_modality)) +
                              "' expected");
      }
      const auto dim = rec.at("dim").get<std::int64_t>();
      const auto values = rec.at("vector").get<std::vector<double>>();
      if (dim <= 0 || static_cast<std::size_t>(dim) != values.size()) {
        throw ValidationError("dim " + std::to_string(dim) +
                              " does not match vector length " +
                              std::to_string(values.size()));
      }
      set.Add(id, values);
    } catch (const internal::Json::exception& e) {
      throw ParseError(source, line_no, e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return set;
}

EmbeddingSet LoadEmbeddings(const std::filesystem::path& path,
                            Modality expected_modality) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings " + path.string());
  return ParseEmbeddings(in, path.string(), expected_modality);
}

void WriteEmbeddings(std::ostream& out, const EmbeddingSet& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    internal::OrderedJson rec;
    rec["sample_id"] = set.id(i);
    rec["modality"] = ModalityName(set.modality());
    rec["dim"] = set.dim();
    auto row = set.row(i);
    rec["vector"] = std::vector<double>(row.begin(), row.end());
    out << rec.dump() << '\n';
  }
}

}  // namespace ccreid
