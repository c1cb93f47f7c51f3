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

#ifndef CCREID_CLUSTERING_H_
#define CCREID_CLUSTERING_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ccreid {

struct ClusterOptions {
  std::size_t k = 1;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100;
};

struct ClusterMember {
  std::size_t index = 0;
  double distance = 0;
};

struct ClusterReport {
  std::size_t dim = 0;
  std::vector<std::size_t> assignment;
  // k rows of dim values.
  std::vector<double> centroids;
  // Per cluster, members ascending by distance to the centroid.
  std::vector<std::vector<ClusterMember>> members;
  // Within-cluster sum of squares after the initial assignment and after every
  // Lloyd iteration.
  std::vector<double> sse_history;
  std::size_t iterations = 0;
  bool converged = false;

  double sse() const { return sse_history.empty() ? 0.0 : sse_history.back(); }
};

// Lloyd's k-means over `vectors` (row-major, `dim` columns). Seeding: the first
// center is a seeded uniform pick, each next center is the point farthest from
// its nearest chosen center. Stops when assignments stop changing or after
// max_iterations. Empty clusters keep their previous centroid. Throws
// ValidationError unless 0 < k <= number of vectors.
ClusterReport ClusterFaceFeatures(std::span<const double> vectors,
                                  std::size_t dim, const ClusterOptions& options);

// Line-delimited {cluster_id, sample_id, distance}, clusters in id order.
void WriteClusterReport(std::ostream& out, const ClusterReport& report,
                        const std::vector<std::string>& sample_ids);

}  // namespace ccreid

#endif  // CCREID_CLUSTERING_H_
