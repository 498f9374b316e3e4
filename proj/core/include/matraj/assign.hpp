#pragma once

#include <vector>

#include "matraj/core.hpp"

namespace matraj {

/// All initial-to-destination distances, d[m*M + j] = |initial[m] - dest[j]|.
struct DistanceMatrix {
  int m_count = 0;
  std::vector<double> d;  // row-major M x M

  double at(int m, int j) const { return d[static_cast<size_t>(m) * m_count + j]; }
  double& at(int m, int j) { return d[static_cast<size_t>(m) * m_count + j]; }
};

/// A one-to-one pairing of antennas with destinations and its largest
/// paired distance.
struct Assignment {
  std::vector<int> dest_of;  // dest_of[m] = destination index for antenna m
  double bottleneck = 0.0;   // max_m d[m][dest_of[m]] (lambda)
};

DistanceMatrix distance_matrix(const Scenario& s);

/// True iff the bipartite graph with edges {(m,j) : d[m][j] <= threshold}
/// admits a perfect matching (augmenting-path search).
bool matching_exists(const DistanceMatrix& d, double threshold);

/// Exact min-max assignment: the permutation minimizing the largest paired
/// distance. Binary-searches the sorted distance values for the smallest
/// threshold admitting a perfect matching.
Assignment bottleneck_assignment(const DistanceMatrix& d);

/// Exhaustive oracle over all M! permutations; ties broken by
/// lexicographically smallest dest_of. Throws std::invalid_argument above
/// M = 9.
Assignment brute_force_assignment(const DistanceMatrix& d);

/// Wraps an explicit permutation with its own max paired distance.
Assignment assignment_from_permutation(const DistanceMatrix& d, std::vector<int> dest_of);

}  // namespace matraj
