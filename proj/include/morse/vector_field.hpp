#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "morse/gf2_matrix.hpp"
#include "morse/verification.hpp"

namespace morse {

/// One vector (row, col) of a discrete vector field on a matrix, with lambda
/// the length of the longest relation path starting at `row`.
struct VectorPair {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t lambda = 0;
  friend bool operator==(const VectorPair&, const VectorPair&) = default;
};

/// Discrete vector field on a GF(2) matrix together with its precedence
/// relation on row indices: r -> r' whenever (r, c) is a vector, r' != r and
/// M[r'][c] = 1. The field is admissible iff the relation is acyclic.
struct DiscreteVectorField {
  std::vector<VectorPair> pairs;
  /// Out-neighbours of each row of the matrix, ascending; one entry per matrix row.
  std::vector<std::vector<std::size_t>> relation;

  std::size_t size() const noexcept { return pairs.size(); }
  std::size_t edge_count() const noexcept;
  friend bool operator==(const DiscreteVectorField&, const DiscreteVectorField&) = default;
};

/// Greedy construction of an admissible field. Rows are visited once in
/// increasing order; each row takes the first unused column holding a 1 whose
/// induced relations keep the relation acyclic. Lambda values are filled in.
DiscreteVectorField rs_algorithm(const Gf2Matrix& m);

/// Re-derives every field invariant from scratch: indices in range, entries
/// equal to 1, distinct sources and targets, the exact relation edge set,
/// acyclicity (topological-sort witness) and lambda as longest path length.
VerificationReport check_admissible(const Gf2Matrix& m, const DiscreteVectorField& vf);

/// Orders pairs by decreasing lambda, ties by ascending row.
DiscreteVectorField sort_by_lambda(DiscreteVectorField vf);

/// Text dump: one "r c lambda" line per pair in field order, then one
/// "r -> r'" line per relation edge (sources in field order, targets ascending).
void write_vector_field(std::ostream& out, const DiscreteVectorField& vf);

}  // namespace morse
