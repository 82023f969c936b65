// Copyright 2026 The PixelVeil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIXELVEIL_VECTOR_MECHANISM_HPP
#define PIXELVEIL_VECTOR_MECHANISM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pixelveil/random.hpp"

namespace pixelveil {

/// Valid range of one vector element.
struct ValueRange {
  double min = 0.0;
  double max = 1.0;

  double width() const { return max - min; }
  bool operator==(const ValueRange&) const = default;
};

/// Real vector paired with per-element valid ranges. Values outside their
/// range are clamped on construction.
struct BoundedVector {
  std::vector<double> values;
  std::vector<ValueRange> ranges;

  BoundedVector() = default;

  BoundedVector(std::vector<double> v, std::vector<ValueRange> r)
      : values(std::move(v)), ranges(std::move(r)) {
    if (values.empty() || values.size() != ranges.size())
      throw std::invalid_argument("vector and range lengths must match and be >= 1");
    for (const ValueRange& range : ranges)
      if (!std::isfinite(range.min) || !std::isfinite(range.max) || !(range.min < range.max))
        throw std::invalid_argument("element range must be finite with min < max");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i]))
        throw std::invalid_argument("vector values must be finite");
      values[i] = std::clamp(values[i], ranges[i].min, ranges[i].max);
    }
  }

  std::size_t size() const { return values.size(); }
};

/// Normalized element distance |x - x'| / (max - min), in [0, 1].
inline double element_distance(double x, double x_prime, const ValueRange& range) {
  if (!(range.min < range.max)) throw std::invalid_argument("degenerate element range");
  return std::abs(x - x_prime) / range.width();
}

/// Mean of the normalized element distances, in [0, 1]. Both vectors must
/// share the same element ranges.
inline double vector_distance(const BoundedVector& a, const BoundedVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector lengths differ");
  if (a.ranges != b.ranges) throw std::invalid_argument("vector element ranges differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += element_distance(a.values[i], b.values[i], a.ranges[i]);
  return sum / static_cast<double>(a.size());
}

/// Per-element Laplace scale n * (max - min) / epsilon of the vector
/// mechanism.
inline double vector_laplace_scale(const BoundedVector& x, std::size_t i, double epsilon) {
  return static_cast<double>(x.size()) * x.ranges[i].width() / epsilon;
}

/// Adds independent Laplace noise with per-element scale
/// n * (max - min) / epsilon, then snaps every element back into its
/// range. Clamping happens strictly after the noise draw; it is
/// post-processing and cannot weaken the guarantee.
inline BoundedVector laplace_vector_obfuscate(const BoundedVector& x, double epsilon,
                                              std::uint64_t seed) {
  if (!std::isfinite(epsilon) || !(epsilon > 0.0))
    throw std::invalid_argument("epsilon must be finite and > 0");
  std::vector<double> noisy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::mt19937_64 rng = make_stream(seed, StreamKind::kVectorElement, i);
    noisy[i] = x.values[i] + sample_laplace(rng, vector_laplace_scale(x, i, epsilon));
  }
  return BoundedVector(std::move(noisy), x.ranges);  // constructor clamps
}

/// Log density of the pre-clamp mechanism output at point r given input x.
/// Exposed so that guarantee checks can evaluate the analytic density
/// ratio between two candidate inputs at any output point.
inline double vector_log_density(const BoundedVector& x, std::span<const double> r,
                                 double epsilon) {
  if (!std::isfinite(epsilon) || !(epsilon > 0.0))
    throw std::invalid_argument("epsilon must be finite and > 0");
  if (r.size() != x.size()) throw std::invalid_argument("output point length differs from input");
  double log_density = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double scale = vector_laplace_scale(x, i, epsilon);
    log_density += -std::log(2.0 * scale) - std::abs(r[i] - x.values[i]) / scale;
  }
  return log_density;
}

/// Partition of a vector set into clusters of at least k members.
struct ClusterAssignment {
  int k = 0;
  std::vector<std::vector<int>> clusters;           // vector indices per cluster
  std::vector<std::vector<double>> centroids;       // element-wise means per cluster

  int cluster_of(int index) const {
    for (std::size_t ci = 0; ci < clusters.size(); ++ci)
      for (int member : clusters[ci])
        if (member == index) return static_cast<int>(ci);
    throw std::invalid_argument("index not present in assignment");
  }
};

/// Greedy k-same clustering: repeatedly anchor on the lowest unassigned
/// index, gather its k-1 nearest unassigned neighbours (ties to the lower
/// index), and fold any final sub-k leftover into the last cluster.
inline ClusterAssignment ksame_cluster(const std::vector<BoundedVector>& vectors, int k) {
  if (k < 1) throw std::invalid_argument("cluster size k must be >= 1");
  if (vectors.size() < static_cast<std::size_t>(k))
    throw std::invalid_argument("need at least k vectors to cluster");
  for (const BoundedVector& v : vectors)
    if (v.ranges != vectors.front().ranges)
      throw std::invalid_argument("all vectors must share the same element ranges");

  const int m = static_cast<int>(vectors.size());
  std::vector<int> unassigned(m);
  std::iota(unassigned.begin(), unassigned.end(), 0);

  ClusterAssignment assignment;
  assignment.k = k;
  while (!unassigned.empty()) {
    const int anchor = unassigned.front();
    unassigned.erase(unassigned.begin());
    std::vector<std::pair<double, int>> by_distance;
    by_distance.reserve(unassigned.size());
    for (int idx : unassigned)
      by_distance.emplace_back(vector_distance(vectors[anchor], vectors[idx]), idx);
    std::sort(by_distance.begin(), by_distance.end());  // distance, then lower index

    std::vector<int> cluster{anchor};
    for (int i = 0; i < k - 1; ++i) cluster.push_back(by_distance[i].second);
    std::vector<int> rest;
    for (std::size_t i = k - 1; i < by_distance.size(); ++i) rest.push_back(by_distance[i].second);
    std::sort(rest.begin(), rest.end());
    if (rest.size() < static_cast<std::size_t>(k)) {
      cluster.insert(cluster.end(), rest.begin(), rest.end());
      rest.clear();
    }
    std::sort(cluster.begin(), cluster.end());
    assignment.clusters.push_back(std::move(cluster));
    unassigned = std::move(rest);
  }

  const std::size_t n = vectors.front().size();
  for (const std::vector<int>& cluster : assignment.clusters) {
    std::vector<double> centroid(n, 0.0);
    for (int member : cluster)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += vectors[member].values[i];
    for (double& v : centroid) v /= static_cast<double>(cluster.size());
    assignment.centroids.push_back(std::move(centroid));
  }
  return assignment;
}

/// Replaces every vector by its cluster centroid.
inline std::vector<BoundedVector> ksame_obfuscate(const std::vector<BoundedVector>& vectors,
                                                  int k) {
  const ClusterAssignment assignment = ksame_cluster(vectors, k);
  std::vector<BoundedVector> out(vectors.size());
  for (std::size_t ci = 0; ci < assignment.clusters.size(); ++ci)
    for (int member : assignment.clusters[ci])
      out[member] = BoundedVector(assignment.centroids[ci], vectors[member].ranges);
  return out;
}

/// Result of intersecting one identity's candidate sets across two
/// independent k-same releases.
struct IntersectionReport {
  std::vector<std::int64_t> sizes;  // one entry per shared identity, input order
  std::int64_t min = 0;
  double mean = 0.0;
  std::int64_t violations = 0;  // identities whose intersection fell below k
};

/// For each shared identity, the size of the intersection of its cluster
/// member sets across two assignments. Identities label the vectors of
/// each gallery positionally.
inline IntersectionReport intersection_attack(const ClusterAssignment& a,
                                              const std::vector<std::string>& ids_a,
                                              const ClusterAssignment& b,
                                              const std::vector<std::string>& ids_b,
                                              const std::vector<std::string>& shared_ids) {
  if (a.k != b.k) throw std::invalid_argument("assignments use different k");
  const auto index_of = [](const std::vector<std::string>& ids) {
    std::unordered_map<std::string, int> lookup;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (!lookup.emplace(ids[i], static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate identity in gallery: " + ids[i]);
    return lookup;
  };
  const std::unordered_map<std::string, int> lookup_a = index_of(ids_a);
  const std::unordered_map<std::string, int> lookup_b = index_of(ids_b);

  const auto member_ids = [](const ClusterAssignment& assignment,
                             const std::vector<std::string>& ids, int index) {
    std::set<std::string> members;
    for (int member : assignment.clusters[assignment.cluster_of(index)])
      members.insert(ids[member]);
    return members;
  };

  IntersectionReport report;
  double sum = 0.0;
  for (const std::string& id : shared_ids) {
    const auto ia = lookup_a.find(id);
    const auto ib = lookup_b.find(id);
    if (ia == lookup_a.end() || ib == lookup_b.end())
      throw std::invalid_argument("identity missing from an assignment: " + id);
    const std::set<std::string> members_a = member_ids(a, ids_a, ia->second);
    const std::set<std::string> members_b = member_ids(b, ids_b, ib->second);
    std::vector<std::string> common;
    std::set_intersection(members_a.begin(), members_a.end(), members_b.begin(), members_b.end(),
                          std::back_inserter(common));
    const auto size = static_cast<std::int64_t>(common.size());
    report.sizes.push_back(size);
    sum += static_cast<double>(size);
    if (size < a.k) ++report.violations;
  }
  if (report.sizes.empty()) throw std::invalid_argument("no shared identities given");
  report.min = *std::min_element(report.sizes.begin(), report.sizes.end());
  report.mean = sum / static_cast<double>(report.sizes.size());
  return report;
}

}  // namespace pixelveil

#endif  // PIXELVEIL_VECTOR_MECHANISM_HPP
