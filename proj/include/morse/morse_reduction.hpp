#pragma once

#include <cstddef>

#include "morse/chain_complex.hpp"
#include "morse/gf2_matrix.hpp"
#include "morse/vector_field.hpp"

namespace morse {

/// Truncated complex with rows and columns of D1 reordered by a sorted vector
/// field: pair i sits at row i and column i, unpaired cells follow in their
/// original order. D2's rows follow D1's columns. In block form
///
///   D1 = [[pivot, top_right], [bottom_left, bottom_right]],  D2 = [d2_top ; d2_bottom]
///
/// with pivot of size nv x nv.
struct ReorderedComplex {
  TruncatedComplex complex;
  std::size_t nv = 0;
  Permutation row_perm;  // 0-cells: original index -> new position
  Permutation col_perm;  // 1-cells: original index -> new position
  Gf2Matrix pivot;
  Gf2Matrix top_right;
  Gf2Matrix bottom_left;
  Gf2Matrix bottom_right;
  Gf2Matrix d2_top;
  Gf2Matrix d2_bottom;

  /// Undo both permutations.
  TruncatedComplex restore() const;
};

/// Reorders `t` by `vf` (built on t.d1 and sorted by lambda).
/// Throws PreconditionViolation if a pair is out of range or sits on a zero
/// entry, TriangularityViolation if the pivot block is not unit lower
/// triangular.
ReorderedComplex reorder(const TruncatedComplex& t, const DiscreteVectorField& vf);

struct HexagonalResult {
  TruncatedComplex reduced;
  ReductionTriple reduction;  // reordered complex -> reduced complex
};

/// Reduction onto the critical cells of the vector field:
///
///   D1' = R + S L^-1 T,   D2' = d2_bottom
///   f0 = [S L^-1 | I]   g0 = [0 ; I]      h0 = [[L^-1, 0], [0, 0]]
///   f1 = [0 | I]        g1 = [L^-1 T ; I] h1 = 0
///   f2 = g2 = I
///
/// where L, T, S, R are the blocks of the reordered D1. D1 D2 = 0 forces
/// d2_top = L^-1 T d2_bottom, which is why D2' needs no correction term.
HexagonalResult hexagonal_reduce(const ReorderedComplex& rc);

/// Conjugates a reduction of the reordered complex by the reordering, giving
/// a reduction of the complex before reordering.
ReductionTriple reduction_on_original(const ReorderedComplex& rc, const ReductionTriple& r);

}  // namespace morse
