#include "morse/perturbation.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "morse/errors.hpp"

namespace morse {

namespace {

// Summand i of the row splitting crossed with summand j of the column splitting.
Gf2Matrix blk(const Gf2Matrix& m, const BlockSizes& rs, int i, const BlockSizes& cs, int j) {
  return m.block(rs.offset(i), cs.offset(j), rs.size(i), cs.size(j));
}

void put(Gf2Matrix& m, const BlockSizes& rs, int i, const BlockSizes& cs, int j,
         const Gf2Matrix& src) {
  m.set_block(rs.offset(i), cs.offset(j), src);
}

void clear(Gf2Matrix& m, const BlockSizes& rs, int i, const BlockSizes& cs, int j) {
  put(m, rs, i, cs, j, Gf2Matrix(rs.size(i), cs.size(j)));
}

BlockSizes sizes_at(const std::vector<BlockSizes>& sizes, int lo, int k) {
  if (k < lo || k >= lo + static_cast<int>(sizes.size())) return {};
  return sizes[static_cast<std::size_t>(k - lo)];
}

std::string at_degree(const char* what, int k) {
  return std::string(what) + " at degree " + std::to_string(k);
}

}  // namespace

Perturbation::Perturbation(FGChainComplex base, std::vector<Gf2Matrix> delta)
    : base_(std::move(base)), delta_(std::move(delta)) {
  const std::size_t n = static_cast<std::size_t>(base_.hi() - base_.lo());
  if (delta_.size() != n) {
    throw DimensionMismatch("Perturbation: expected " + std::to_string(n) + " maps, got " +
                            std::to_string(delta_.size()));
  }
  std::vector<Gf2Matrix> sum;
  std::vector<std::size_t> dims;
  for (int k = base_.lo(); k <= base_.hi(); ++k) dims.push_back(base_.dim(k));
  for (std::size_t i = 0; i < n; ++i) {
    const Gf2Matrix& d = base_.d(base_.lo() + 1 + static_cast<int>(i));
    if (delta_[i].rows() != d.rows() || delta_[i].cols() != d.cols()) {
      throw DimensionMismatch("Perturbation: delta(" +
                              std::to_string(base_.lo() + 1 + static_cast<int>(i)) +
                              ") does not have the shape of d");
    }
    sum.push_back(d + delta_[i]);
  }
  // The constructor checks (d + δ)^2 = 0.
  perturbed_ = FGChainComplex(base_.lo(), std::move(dims), std::move(sum));
}

Perturbation Perturbation::zero(const FGChainComplex& base) {
  std::vector<Gf2Matrix> delta;
  for (int k = base.lo() + 1; k <= base.hi(); ++k) {
    delta.emplace_back(base.d(k).rows(), base.d(k).cols());
  }
  return Perturbation(base, std::move(delta));
}

Gf2Matrix Perturbation::delta(int k) const {
  if (k <= base_.lo() || k > base_.hi()) return {base_.d(k).rows(), base_.d(k).cols()};
  return delta_[static_cast<std::size_t>(k - base_.lo() - 1)];
}

std::size_t BlockSizes::offset(int i) const noexcept {
  switch (i) {
    case 0: return 0;
    case 1: return a;
    default: return a + b;
  }
}

std::size_t BlockSizes::size(int i) const noexcept {
  switch (i) {
    case 0: return a;
    case 1: return b;
    default: return c;
  }
}

Decomposition decompose(const ReductionTriple& r) {
  const FGChainComplex& big = r.big();
  const FGChainComplex& small = r.small();
  Decomposition out;
  out.lo = r.lo();

  for (int k = r.lo(); k <= r.hi(); ++k) {
    const Gf2Matrix a = right_kernel_basis(vconcat(r.f(k), r.h(k)));
    const Gf2Matrix b = right_kernel_basis(vconcat(r.f(k), big.d(k)));
    const BlockSizes s{a.cols(), b.cols(), r.g(k).cols()};
    if (s.total() != big.dim(k)) {
      throw DecompositionFailure(at_degree("summand sizes do not add up", k));
    }
    Gf2Matrix phi = hconcat(hconcat(a, b), r.g(k));
    std::optional<Gf2Matrix> inv = inverse(phi);
    if (!inv) throw DecompositionFailure(at_degree("basis change is singular", k));
    out.sizes.push_back(s);
    out.phi.push_back(std::move(phi));
    out.phi_inv.push_back(std::move(*inv));
  }

  auto idx = [&](int k) { return static_cast<std::size_t>(k - r.lo()); };
  for (int k = r.lo(); k <= r.hi(); ++k) {
    const BlockSizes& s = out.sizes[idx(k)];

    Gf2Matrix expected_f(s.c, s.total());
    put(expected_f, {0, 0, s.c}, 2, s, 2, Gf2Matrix::identity(s.c));
    if (mul(r.f(k), out.phi[idx(k)]) != expected_f) {
      throw DecompositionFailure(at_degree("f is not [0 0 I] in the new basis", k));
    }

    if (k < r.hi()) {
      const BlockSizes& up = out.sizes[idx(k + 1)];
      Gf2Matrix h = mul(mul(out.phi_inv[idx(k + 1)], r.h(k)), out.phi[idx(k)]);
      clear(h, up, 0, s, 1);
      if (!h.is_zero()) {
        throw DecompositionFailure(at_degree("h has a nonzero block outside A x B", k));
      }
    }

    if (k == r.lo()) {
      if (s.a != 0) throw DecompositionFailure(at_degree("A is nonzero", k));
      out.d21.emplace_back(0, 0);
      out.h12.emplace_back(0, 0);
      continue;
    }
    const BlockSizes& down = out.sizes[idx(k - 1)];
    Gf2Matrix d = mul(mul(out.phi_inv[idx(k - 1)], big.d(k)), out.phi[idx(k)]);
    Gf2Matrix d21 = blk(d, down, 1, s, 0);
    if (blk(d, down, 2, s, 2) != small.d(k)) {
      throw DecompositionFailure(at_degree("C' block of d differs from the small differential", k));
    }
    clear(d, down, 1, s, 0);
    clear(d, down, 2, s, 2);
    if (!d.is_zero()) {
      throw DecompositionFailure(at_degree("d has a nonzero block outside the pattern", k));
    }
    Gf2Matrix h = mul(mul(out.phi_inv[idx(k)], r.h(k - 1)), out.phi[idx(k - 1)]);
    Gf2Matrix h12 = blk(h, s, 0, down, 1);
    if (!mul(h12, d21).is_identity() || !mul(d21, h12).is_identity()) {
      throw DecompositionFailure(at_degree("A x B blocks of d and h are not inverse", k));
    }
    out.d21.push_back(std::move(d21));
    out.h12.push_back(std::move(h12));
  }
  if (out.sizes.back().b != 0) {
    throw DecompositionFailure(at_degree("B is nonzero", r.hi()));
  }
  return out;
}

ReductionTriple hexagonal_general(const SplitComplex& c,
                                  const std::vector<Gf2Matrix>& pivot_inverses) {
  const FGChainComplex& big = c.complex;
  const int lo = big.lo();
  const int hi = big.hi();
  if (c.sizes.size() != static_cast<std::size_t>(hi - lo + 1)) {
    throw DimensionMismatch("hexagonal_general: one block split per degree expected");
  }
  if (pivot_inverses.size() != static_cast<std::size_t>(hi - lo)) {
    throw DimensionMismatch("hexagonal_general: one pivot inverse per differential expected");
  }
  for (int k = lo; k <= hi; ++k) {
    if (sizes_at(c.sizes, lo, k).total() != big.dim(k)) {
      throw DimensionMismatch(at_degree("hexagonal_general: split does not match dim", k));
    }
  }
  if (c.sizes.front().a != 0 || c.sizes.back().b != 0) {
    throw PreconditionViolation("hexagonal_general: A at the bottom and B at the top must be 0");
  }

  auto sz = [&](int k) { return sizes_at(c.sizes, lo, k); };
  auto pinv = [&](int k) -> const Gf2Matrix& {
    return pivot_inverses[static_cast<std::size_t>(k - lo - 1)];
  };

  for (int k = lo + 1; k <= hi; ++k) {
    const Gf2Matrix d21 = blk(big.d(k), sz(k - 1), 1, sz(k), 0);
    const Gf2Matrix& p = pinv(k);
    if (p.rows() != d21.cols() || p.cols() != d21.rows()) {
      throw DimensionMismatch(at_degree("hexagonal_general: pivot inverse has wrong shape", k));
    }
    if (!mul(p, d21).is_identity() || !mul(d21, p).is_identity()) {
      throw NotInvertible(at_degree("hexagonal_general: pivot inverse check failed", k));
    }
  }

  std::vector<std::size_t> small_dims;
  std::vector<Gf2Matrix> small_d;
  std::vector<Gf2Matrix> f;
  std::vector<Gf2Matrix> g;
  std::vector<Gf2Matrix> h;
  for (int k = lo; k <= hi; ++k) {
    const BlockSizes s = sz(k);
    small_dims.push_back(s.c);

    Gf2Matrix fk(s.c, s.total());
    fk.set_block(0, s.offset(2), Gf2Matrix::identity(s.c));
    Gf2Matrix gk(s.total(), s.c);
    gk.set_block(s.offset(2), 0, Gf2Matrix::identity(s.c));
    Gf2Matrix hk(big.dim(k + 1), s.total());

    if (k > lo) {
      const BlockSizes down = sz(k - 1);
      const Gf2Matrix& d = big.d(k);
      const Gf2Matrix p_d23 = mul(pinv(k), blk(d, down, 1, s, 2));
      small_d.push_back(blk(d, down, 2, s, 2) + mul(blk(d, down, 2, s, 0), p_d23));
      gk.set_block(0, 0, p_d23);
    }
    if (k < hi) {
      const BlockSizes up = sz(k + 1);
      const Gf2Matrix d31 = blk(big.d(k + 1), s, 2, up, 0);
      fk.set_block(0, s.offset(1), mul(d31, pinv(k + 1)));
      put(hk, up, 0, s, 1, pinv(k + 1));
    }
    f.push_back(std::move(fk));
    g.push_back(std::move(gk));
    h.push_back(std::move(hk));
  }
  FGChainComplex small(lo, std::move(small_dims), std::move(small_d));
  return ReductionTriple(big, std::move(small), std::move(f), std::move(g), std::move(h));
}

ReductionTriple bpl(const ReductionTriple& r, const Perturbation& p, std::size_t m) {
  if (!(p.base() == r.big())) {
    throw PreconditionViolation("bpl: perturbation is not defined on the reduction's big complex");
  }
  const int lo = r.lo();
  const int hi = r.hi();
  for (int k = lo + 1; k <= hi; ++k) {
    if (!pow(mul(p.delta(k), r.h(k - 1)), m).is_zero()) {
      throw NotNilpotent(at_degree("bpl: (delta h)^m != 0", k));
    }
  }

  const Decomposition dec = decompose(r);
  const FGChainComplex& target = p.perturbed();
  auto idx = [&](int k) { return static_cast<std::size_t>(k - lo); };

  std::vector<std::size_t> dims;
  for (int k = lo; k <= hi; ++k) dims.push_back(target.dim(k));
  std::vector<Gf2Matrix> moved;
  std::vector<Gf2Matrix> pivots;
  for (int k = lo + 1; k <= hi; ++k) {
    Gf2Matrix d = mul(mul(dec.phi_inv[idx(k - 1)], target.d(k)), dec.phi[idx(k)]);
    // (d + δ)21 = (I + δ21 h12) d21, inverted through the series on δ21 h12.
    const Gf2Matrix delta21 = blk(d, dec.at(k - 1), 1, dec.at(k), 0) + dec.d21[idx(k)];
    const Gf2Matrix y = mul(delta21, dec.h12[idx(k)]);
    pivots.push_back(mul(dec.h12[idx(k)], nilpotent_series_inverse(y, m)));
    moved.push_back(std::move(d));
  }
  SplitComplex split{FGChainComplex(lo, std::move(dims), std::move(moved)), dec.sizes};
  const ReductionTriple hex = hexagonal_general(split, pivots);

  std::vector<Gf2Matrix> f;
  std::vector<Gf2Matrix> g;
  std::vector<Gf2Matrix> h;
  for (int k = lo; k <= hi; ++k) {
    f.push_back(mul(hex.f(k), dec.phi_inv[idx(k)]));
    g.push_back(mul(dec.phi[idx(k)], hex.g(k)));
    if (k < hi) {
      h.push_back(mul(mul(dec.phi[idx(k + 1)], hex.h(k)), dec.phi_inv[idx(k)]));
    } else {
      h.emplace_back(0, target.dim(k));
    }
  }
  return ReductionTriple(target, hex.small(), std::move(f), std::move(g), std::move(h));
}

std::optional<std::size_t> nilpotency_bound(const Perturbation& p, const ReductionTriple& r) {
  std::size_t bound = 1;
  for (int k = r.lo() + 1; k <= r.hi(); ++k) {
    const std::optional<std::size_t> index = nilpotency_index(mul(p.delta(k), r.h(k - 1)));
    if (!index) return std::nullopt;
    bound = std::max(bound, *index);
  }
  return bound;
}

ImagePerturbation image_perturbation(const ReorderedComplex& rc) {
  const std::size_t nv = rc.nv;
  const std::size_t c0 = rc.complex.c0();
  const std::size_t c1 = rc.complex.c1();
  const std::size_t c2 = rc.complex.c2();

  Gf2Matrix hat_d1(c0, c1);
  hat_d1.set_block(0, 0, Gf2Matrix::identity(nv));
  FGChainComplex base(0, {c0, c1, c2}, {hat_d1, Gf2Matrix(c1, c2)});
  FGChainComplex critical = FGChainComplex::zero(0, {c0 - nv, c1 - nv, c2});

  Gf2Matrix f0 = hconcat(Gf2Matrix(c0 - nv, nv), Gf2Matrix::identity(c0 - nv));
  Gf2Matrix f1 = hconcat(Gf2Matrix(c1 - nv, nv), Gf2Matrix::identity(c1 - nv));
  Gf2Matrix g0 = f0.transpose();
  Gf2Matrix g1 = f1.transpose();
  ReductionTriple initial(base, std::move(critical),
                          {std::move(f0), std::move(f1), Gf2Matrix::identity(c2)},
                          {std::move(g0), std::move(g1), Gf2Matrix::identity(c2)},
                          {hat_d1.transpose(), Gf2Matrix(c2, c1), Gf2Matrix(0, c2)});
  Perturbation delta(std::move(base), {rc.complex.d1 + hat_d1, rc.complex.d2});
  return {std::move(initial), std::move(delta)};
}

ReductionTriple vf_reduction_via_bpl(const ReorderedComplex& rc) {
  const ImagePerturbation ip = image_perturbation(rc);
  return bpl(ip.initial, ip.perturbation, rc.nv + 1);
}

}  // namespace morse
