#pragma once

#include <cstddef>
#include <vector>

#include "morse/gf2_matrix.hpp"
#include "morse/verification.hpp"

namespace morse {

/// Finitely generated chain complex over GF(2) on the degree window [lo, hi].
///
/// d(k) maps degree k to degree k-1 and has shape dim(k-1) x dim(k). Modules
/// outside the window are zero, and so is every differential outside (lo, hi].
/// The boundary condition d(k) d(k+1) = 0 is checked on construction.
class FGChainComplex {
 public:
  /// The zero complex concentrated in degree 0.
  FGChainComplex();
  /// `dims[i]` is the rank of degree lo + i; `differentials[i]` is d(lo + 1 + i).
  /// Throws DimensionMismatch on bad shapes, BoundaryViolation if some d(k) d(k+1) != 0.
  FGChainComplex(int lo, std::vector<std::size_t> dims, std::vector<Gf2Matrix> differentials);
  /// All differentials zero.
  static FGChainComplex zero(int lo, std::vector<std::size_t> dims);

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return lo_ + static_cast<int>(dims_.size()) - 1; }
  std::size_t dim(int k) const noexcept;
  const Gf2Matrix& d(int k) const noexcept;
  /// d(lo + 1), ..., d(hi)
  std::vector<Gf2Matrix> differentials() const;

  friend bool operator==(const FGChainComplex&, const FGChainComplex&) = default;

 private:
  int lo_ = 0;
  std::vector<std::size_t> dims_;
  // d(k) for k in [lo, hi + 1]; the two ends have a zero-sized side.
  std::vector<Gf2Matrix> d_;
};

/// A complex recorded by its two boundary matrices: D1 (c0 x c1) sends 1-cells
/// to 0-cells and D2 (c1 x c2) sends 2-cells to 1-cells.
struct TruncatedComplex {
  Gf2Matrix d1;
  Gf2Matrix d2;

  std::size_t c0() const noexcept { return d1.rows(); }
  std::size_t c1() const noexcept { return d1.cols(); }
  std::size_t c2() const noexcept { return d2.cols(); }
  /// Shapes agree and D1 D2 = 0.
  bool valid() const;

  friend bool operator==(const TruncatedComplex&, const TruncatedComplex&) = default;
};

/// Betti numbers indexed by degree; zero outside the stored window.
struct BettiVector {
  int lo = 0;
  std::vector<std::size_t> values;

  std::size_t operator[](int k) const noexcept;
  friend bool operator==(const BettiVector&, const BettiVector&) = default;
};

/// Reduction (f, g, h) from `big` onto `small` over a shared degree window.
///
/// f(k): big_k -> small_k, g(k): small_k -> big_k, h(k): big_k -> big_{k+1}.
/// Shapes are validated on construction; the algebraic identities are not
/// (see verify_reduction).
class ReductionTriple {
 public:
  /// Identity reduction of the zero complex.
  ReductionTriple();
  /// f[i], g[i], h[i] are the maps at degree lo + i. Throws DimensionMismatch.
  ReductionTriple(FGChainComplex big, FGChainComplex small, std::vector<Gf2Matrix> f,
                  std::vector<Gf2Matrix> g, std::vector<Gf2Matrix> h);
  /// f = g = I, h = 0.
  static ReductionTriple identity(const FGChainComplex& c);

  const FGChainComplex& big() const noexcept { return big_; }
  const FGChainComplex& small() const noexcept { return small_; }
  int lo() const noexcept { return big_.lo(); }
  int hi() const noexcept { return big_.hi(); }

  const Gf2Matrix& f(int k) const noexcept;
  const Gf2Matrix& g(int k) const noexcept;
  const Gf2Matrix& h(int k) const noexcept;

  /// Replace a single map (shape must match). Mostly useful for mutation tests.
  void set_f(int k, Gf2Matrix m);
  void set_g(int k, Gf2Matrix m);
  void set_h(int k, Gf2Matrix m);

  friend bool operator==(const ReductionTriple&, const ReductionTriple&) = default;

 private:
  FGChainComplex big_;
  FGChainComplex small_;
  std::vector<Gf2Matrix> f_;  // k in [lo, hi]
  std::vector<Gf2Matrix> g_;  // k in [lo, hi]
  std::vector<Gf2Matrix> h_;  // k in [lo - 1, hi]
};

/// Window [0, 2], dims (c0, c1, c2), d(1) = D1, d(2) = D2.
/// Throws BoundaryViolation if D1 D2 != 0, DimensionMismatch on bad shapes.
FGChainComplex from_truncated(const TruncatedComplex& t);
/// Inverse of from_truncated; requires the window [0, 2].
TruncatedComplex to_truncated(const FGChainComplex& c);

/// betti(k) = dim(k) - rank d(k) - rank d(k+1).
BettiVector betti(const FGChainComplex& c);

/// Checks, per degree, the five reduction identities
///   f g = I,  g f + d h + h d = I,  f h = 0,  h g = 0,  h h = 0
/// and that f and g commute with the differentials. Exact GF(2) equalities.
VerificationReport verify_reduction(const ReductionTriple& r);

}  // namespace morse
