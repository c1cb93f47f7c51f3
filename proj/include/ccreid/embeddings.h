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

#ifndef CCREID_EMBEDDINGS_H_
#define CCREID_EMBEDDINGS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ccreid {

enum class Modality { kReid, kFace };

std::string_view ModalityName(Modality m);
Modality ParseModality(std::string_view text);

struct EmbeddingRecord {
  std::string sample_id;
  Modality modality = Modality::kReid;
  std::vector<double> vector;
};

// Unit-normalized embeddings of one modality, stored row-major in file order.
class EmbeddingSet {
 public:
  explicit EmbeddingSet(Modality modality) : modality_(modality) {}

  // Normalizes `values` to unit L2 norm. Throws ValidationError on a zero or
  // non-finite vector, a dimension mismatch or a duplicate sample id.
  void Add(std::string sample_id, std::span<const double> values);

  Modality modality() const { return modality_; }
  // 0 while the set is empty.
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  const std::string& id(std::size_t row) const { return ids_[row]; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::optional<std::span<const double>> Find(std::string_view sample_id) const;

 private:
  Modality modality_;
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

EmbeddingSet ParseEmbeddings(std::istream& in, const std::string& source,
                             Modality expected_modality);
EmbeddingSet LoadEmbeddings(const std::filesystem::path& path,
                            Modality expected_modality);

// Writes one line-delimited record per row.
void WriteEmbeddings(std::ostream& out, const EmbeddingSet& set);

// Returns `v` scaled to unit norm; throws ValidationError when ‖v‖ = 0.
std::vector<double> Normalized(std::span<const double> v);

}  // namespace ccreid

#endif  // CCREID_EMBEDDINGS_H_
