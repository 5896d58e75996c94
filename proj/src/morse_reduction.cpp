#include "morse/morse_reduction.hpp"

#include <string>

#include "morse/errors.hpp"

namespace morse {

namespace {

// Paired indices first in field order, then the rest in original order.
Permutation pairing_permutation(std::size_t n, const std::vector<std::size_t>& paired) {
  std::vector<std::size_t> image(n, n);
  std::size_t next = 0;
  for (std::size_t i : paired) image[i] = next++;
  for (std::size_t i = 0; i < n; ++i)
    if (image[i] == n) image[i] = next++;
  return Permutation(std::move(image));
}

}  // namespace

TruncatedComplex ReorderedComplex::restore() const {
  const Permutation rinv = row_perm.inverse();
  const Permutation cinv = col_perm.inverse();
  return {permute(complex.d1, rinv, cinv),
          permute_rows(complex.d2, cinv)};
}

ReorderedComplex reorder(const TruncatedComplex& t, const DiscreteVectorField& vf) {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (const VectorPair& p : vf.pairs) {
    if (p.row >= t.c0() || p.col >= t.c1() || !t.d1.get(p.row, p.col)) {
      throw PreconditionViolation("reorder: vector (" + std::to_string(p.row) + ", " +
                                  std::to_string(p.col) + ") is not a nonzero entry of D1");
    }
    rows.push_back(p.row);
    cols.push_back(p.col);
  }

  ReorderedComplex rc;
  rc.nv = vf.size();
  rc.row_perm = pairing_permutation(t.c0(), rows);
  rc.col_perm = pairing_permutation(t.c1(), cols);
  rc.complex = {permute(t.d1, rc.row_perm, rc.col_perm), permute_rows(t.d2, rc.col_perm)};

  Blocks4 b = split4(rc.complex.d1, rc.nv, rc.nv);
  rc.pivot = std::move(b.top_left);
  rc.top_right = std::move(b.top_right);
  rc.bottom_left = std::move(b.bottom_left);
  rc.bottom_right = std::move(b.bottom_right);
  rc.d2_top = rc.complex.d2.block(0, 0, rc.nv, t.c2());
  rc.d2_bottom = rc.complex.d2.block(rc.nv, 0, t.c1() - rc.nv, t.c2());

  // A 1 at pivot[i][j], j != i, is a relation row_j -> row_i, so lambda
  // sorting puts j before i; anything else is a vector field bug.
  if (!is_lower_unitriangular(rc.pivot)) {
    throw TriangularityViolation("reorder: paired block is not unit lower triangular");
  }
  return rc;
}

HexagonalResult hexagonal_reduce(const ReorderedComplex& rc) {
  const std::size_t nv = rc.nv;
  const std::size_t c0 = rc.complex.c0();
  const std::size_t c1 = rc.complex.c1();
  const std::size_t c2 = rc.complex.c2();
  const std::size_t k0 = c0 - nv;  // critical 0-cells
  const std::size_t k1 = c1 - nv;  // critical 1-cells

  const Gf2Matrix pivot_inv = inv_unit_lower_triangular(rc.pivot);
  const Gf2Matrix s_linv = mul(rc.bottom_left, pivot_inv);
  const Gf2Matrix linv_t = mul(pivot_inv, rc.top_right);

  TruncatedComplex reduced{rc.bottom_right + mul(s_linv, rc.top_right), rc.d2_bottom};

  Gf2Matrix f0 = hconcat(s_linv, Gf2Matrix::identity(k0));
  Gf2Matrix g0 = vconcat(Gf2Matrix(nv, k0), Gf2Matrix::identity(k0));
  Gf2Matrix f1 = hconcat(Gf2Matrix(k1, nv), Gf2Matrix::identity(k1));
  Gf2Matrix g1 = vconcat(linv_t, Gf2Matrix::identity(k1));
  Gf2Matrix h0(c1, c0);
  h0.set_block(0, 0, pivot_inv);

  FGChainComplex big = from_truncated(rc.complex);
  FGChainComplex small = from_truncated(reduced);  // re-checks D1' D2' = 0
  ReductionTriple triple(std::move(big), std::move(small),
                         {std::move(f0), std::move(f1), Gf2Matrix::identity(c2)},
                         {std::move(g0), std::move(g1), Gf2Matrix::identity(c2)},
                         {std::move(h0), Gf2Matrix(c2, c1), Gf2Matrix(0, c2)});
  return {std::move(reduced), std::move(triple)};
}

ReductionTriple reduction_on_original(const ReorderedComplex& rc, const ReductionTriple& r) {
  // With P e_i = e_{p(i)}, the reordered complex is P0 D1 P1^T, so the
  // original-basis maps are f P, P^T g and P^T h P.
  const Permutation p0inv = rc.row_perm.inverse();
  const Permutation p1inv = rc.col_perm.inverse();

  std::vector<Gf2Matrix> f{permute_cols(r.f(0), p0inv), permute_cols(r.f(1), p1inv), r.f(2)};
  std::vector<Gf2Matrix> g{permute_rows(r.g(0), p0inv), permute_rows(r.g(1), p1inv), r.g(2)};
  std::vector<Gf2Matrix> h{permute(r.h(0), p1inv, p0inv), permute_cols(r.h(1), p1inv), r.h(2)};
  return ReductionTriple(from_truncated(rc.restore()), r.small(), std::move(f), std::move(g),
                         std::move(h));
}

}  // namespace morse
