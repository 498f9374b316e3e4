#include "matraj/assign.hpp"

#include <algorithm>
#include <numeric>

namespace matraj {

DistanceMatrix distance_matrix(const Scenario& s) {
  DistanceMatrix dm;
  dm.m_count = s.m_count;
  dm.d.resize(static_cast<size_t>(s.m_count) * s.m_count);
  for (int m = 0; m < s.m_count; ++m)
    for (int j = 0; j < s.m_count; ++j)
      dm.at(m, j) = distance(s.initial[m], s.dest[j]);
  return dm;
}

namespace {

// Kuhn's augmenting-path matching on the thresholded graph.
// match_of_dest[j] = antenna matched to destination j, or -1.
bool try_augment(const DistanceMatrix& d, double threshold, int m,
                 std::vector<char>& visited, std::vector<int>& match_of_dest) {
  for (int j = 0; j < d.m_count; ++j) {
    if (visited[j] || d.at(m, j) > threshold) continue;
    visited[j] = 1;
    if (match_of_dest[j] < 0 ||
        try_augment(d, threshold, match_of_dest[j], visited, match_of_dest)) {
      match_of_dest[j] = m;
      return true;
    }
  }
  return false;
}

// Perfect matching under the threshold, or empty if none exists.
std::vector<int> threshold_matching(const DistanceMatrix& d, double threshold) {
  std::vector<int> match_of_dest(d.m_count, -1);
  for (int m = 0; m < d.m_count; ++m) {
    std::vector<char> visited(d.m_count, 0);
    if (!try_augment(d, threshold, m, visited, match_of_dest)) return {};
  }
  std::vector<int> dest_of(d.m_count, -1);
  for (int j = 0; j < d.m_count; ++j) dest_of[match_of_dest[j]] = j;
  return dest_of;
}

}  // namespace

bool matching_exists(const DistanceMatrix& d, double threshold) {
  return !threshold_matching(d, threshold).empty();
}

Assignment assignment_from_permutation(const DistanceMatrix& d, std::vector<int> dest_of) {
  double bottleneck = 0.0;
  for (int m = 0; m < d.m_count; ++m) bottleneck = std::max(bottleneck, d.at(m, dest_of[m]));
  return {std::move(dest_of), bottleneck};
}

Assignment bottleneck_assignment(const DistanceMatrix& d) {
  std::vector<double> candidates = d.d;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Smallest candidate threshold admitting a perfect matching. Monotone in
  // the threshold, so plain binary search over the sorted values.
  size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (matching_exists(d, candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return assignment_from_permutation(d, threshold_matching(d, candidates[lo]));
}

Assignment brute_force_assignment(const DistanceMatrix& d) {
  if (d.m_count > 9) throw std::invalid_argument("instance too large for oracle");
  std::vector<int> perm(d.m_count);
  std::iota(perm.begin(), perm.end(), 0);
  Assignment best;
  bool first = true;
  do {
    double worst = 0.0;
    for (int m = 0; m < d.m_count; ++m) worst = std::max(worst, d.at(m, perm[m]));
    if (first || worst < best.bottleneck) {
      best = {perm, worst};
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace matraj
