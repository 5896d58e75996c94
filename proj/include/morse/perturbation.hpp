#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "morse/chain_complex.hpp"
#include "morse/gf2_matrix.hpp"
#include "morse/morse_reduction.hpp"

namespace morse {

/// A change δ of the differential of `base` such that d + δ is again a
/// differential.
class Perturbation {
 public:
  /// `delta[i]` is δ(lo + 1 + i) and has the shape of d(lo + 1 + i).
  /// Throws DimensionMismatch on bad shapes, BoundaryViolation if
  /// (d + δ)(k) (d + δ)(k + 1) != 0 for some k.
  Perturbation(FGChainComplex base, std::vector<Gf2Matrix> delta);
  /// δ = 0.
  static Perturbation zero(const FGChainComplex& base);

  const FGChainComplex& base() const noexcept { return base_; }
  /// δ(k), a zero matrix of the right shape outside (lo, hi].
  Gf2Matrix delta(int k) const;
  /// The complex with differential d + δ.
  const FGChainComplex& perturbed() const noexcept { return perturbed_; }

 private:
  FGChainComplex base_;
  std::vector<Gf2Matrix> delta_;
  FGChainComplex perturbed_;
};

/// Sizes of the A, B and C' summands of one degree.
struct BlockSizes {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t c = 0;

  std::size_t total() const noexcept { return a + b + c; }
  /// Offset and size of summand i (0 = A, 1 = B, 2 = C').
  std::size_t offset(int i) const noexcept;
  std::size_t size(int i) const noexcept;
  friend bool operator==(const BlockSizes&, const BlockSizes&) = default;
};

/// Splitting C_k = A_k (+) B_k (+) C'_k adapted to a reduction, where
/// A = ker f ∩ ker h, B = ker f ∩ ker d and C' = im g. Per degree k in
/// [lo, hi] (index k - lo):
///   phi[k]     columns [A-basis | B-basis | g(k)], invertible;
///   d21[k]     the B_{k-1} x A_k block of phi^-1 d(k) phi;
///   h12[k]     the A_k x B_{k-1} block of phi^-1 h(k-1) phi, inverse of d21[k].
/// Both d21[lo] and h12[lo] are 0 x 0.
struct Decomposition {
  int lo = 0;
  std::vector<BlockSizes> sizes;
  std::vector<Gf2Matrix> phi;
  std::vector<Gf2Matrix> phi_inv;
  std::vector<Gf2Matrix> d21;
  std::vector<Gf2Matrix> h12;

  const BlockSizes& at(int k) const { return sizes[static_cast<std::size_t>(k - lo)]; }
};

/// Builds the splitting and asserts that in the new basis d has only the
/// B_{k-1} x A_k block and the small differential on C', h has only the
/// A_{k+1} x B_k block, f = [0 0 I], and the A/B blocks of d and h are mutually
/// inverse. Throws DecompositionFailure otherwise.
Decomposition decompose(const ReductionTriple& r);

/// A complex with each degree split as A (+) B (+) C' (in that order).
struct SplitComplex {
  FGChainComplex complex;
  std::vector<BlockSizes> sizes;  // k in [lo, hi]
};

/// Generalised Hexagonal Lemma. With P(k) the inverse of the B_{k-1} x A_k
/// block d21(k), the reduction onto the C' summands is
///
///   d'(k) = d33 + d31 P(k) d23
///   f(k)  = [0 | d31(k+1) P(k+1) | I]
///   g(k)  = [P(k) d23(k) ; 0 ; I]
///   h(k)  = P(k+1) in the A_{k+1} x B_k block, zero elsewhere
///
/// `pivot_inverses[i]` is P(lo + 1 + i). Throws NotInvertible unless each P is
/// a two-sided inverse, PreconditionViolation if A_lo or B_hi is nonzero.
ReductionTriple hexagonal_general(const SplitComplex& c,
                                  const std::vector<Gf2Matrix>& pivot_inverses);

/// Basic Perturbation Lemma: a reduction of (C, d + δ) built by decomposing
/// r, inverting the perturbed pivot (I + δ21 h12) d21 with the series
/// bounded by m, and applying hexagonal_general. Throws PreconditionViolation
/// if p is not a perturbation of r.big(), NotNilpotent if some
/// (δ(k) h(k-1))^m != 0, DecompositionFailure from decompose.
ReductionTriple bpl(const ReductionTriple& r, const Perturbation& p, std::size_t m);

/// Smallest m with (δ(k) h(k-1))^m = 0 for every k, or std::nullopt if some
/// product is not nilpotent.
std::optional<std::size_t> nilpotency_bound(const Perturbation& p, const ReductionTriple& r);

/// The image setting rewritten as a perturbation problem. The base complex
/// has dims (c0, c1, c2), d1 = hat_d1 (I_nv in the top-left corner, zero
/// elsewhere) and d2 = 0; `initial` reduces it onto the critical cells with
/// zero differential; δ1 = D1 + hat_d1 and δ2 = D2 recover the reordered
/// complex.
struct ImagePerturbation {
  ReductionTriple initial;
  Perturbation perturbation;
};

ImagePerturbation image_perturbation(const ReorderedComplex& rc);

/// bpl applied to image_perturbation with bound nv + 1. The small complex is
/// bit-identical to hexagonal_reduce(rc).reduced.
ReductionTriple vf_reduction_via_bpl(const ReorderedComplex& rc);

}  // namespace morse
