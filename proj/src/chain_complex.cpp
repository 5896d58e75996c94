#include "morse/chain_complex.hpp"

#include <string>

#include "morse/errors.hpp"

namespace morse {

namespace {

const Gf2Matrix& empty_matrix() {
  static const Gf2Matrix kEmpty;
  return kEmpty;
}

std::string shape(const Gf2Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_shape(const Gf2Matrix& m, std::size_t rows, std::size_t cols, const char* what,
                   int k) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionMismatch(std::string(what) + "(" + std::to_string(k) + ") has shape " +
                            shape(m) + ", expected " + std::to_string(rows) + "x" +
                            std::to_string(cols));
  }
}

}  // namespace

FGChainComplex::FGChainComplex() : FGChainComplex(0, {0}, {}) {}

FGChainComplex::FGChainComplex(int lo, std::vector<std::size_t> dims,
                               std::vector<Gf2Matrix> differentials)
    : lo_(lo), dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionMismatch("FGChainComplex: empty degree window");
  if (differentials.size() + 1 != dims_.size()) {
    throw DimensionMismatch("FGChainComplex: expected " + std::to_string(dims_.size() - 1) +
                            " differentials, got " + std::to_string(differentials.size()));
  }
  d_.reserve(dims_.size() + 1);
  d_.emplace_back(0, dims_.front());
  for (std::size_t i = 0; i < differentials.size(); ++i) {
    const int k = lo_ + static_cast<int>(i) + 1;
    require_shape(differentials[i], dim(k - 1), dim(k), "d", k);
    d_.push_back(std::move(differentials[i]));
  }
  d_.emplace_back(dims_.back(), 0);
  for (int k = lo_ + 1; k < hi(); ++k) {
    if (!mul(d(k), d(k + 1)).is_zero()) {
      throw BoundaryViolation("d(" + std::to_string(k) + ") d(" + std::to_string(k + 1) +
                              ") != 0");
    }
  }
}

FGChainComplex FGChainComplex::zero(int lo, std::vector<std::size_t> dims) {
  std::vector<Gf2Matrix> diffs;
  for (std::size_t i = 1; i < dims.size(); ++i) diffs.emplace_back(dims[i - 1], dims[i]);
  return FGChainComplex(lo, std::move(dims), std::move(diffs));
}

std::size_t FGChainComplex::dim(int k) const noexcept {
  if (k < lo_ || k > hi()) return 0;
  return dims_[static_cast<std::size_t>(k - lo_)];
}

const Gf2Matrix& FGChainComplex::d(int k) const noexcept {
  if (k < lo_ || k > hi() + 1) return empty_matrix();
  return d_[static_cast<std::size_t>(k - lo_)];
}

std::vector<Gf2Matrix> FGChainComplex::differentials() const {
  return {d_.begin() + 1, d_.end() - 1};
}

bool TruncatedComplex::valid() const {
  return d1.cols() == d2.rows() && mul(d1, d2).is_zero();
}

std::size_t BettiVector::operator[](int k) const noexcept {
  if (k < lo || k >= lo + static_cast<int>(values.size())) return 0;
  return values[static_cast<std::size_t>(k - lo)];
}

ReductionTriple::ReductionTriple()
    : ReductionTriple(FGChainComplex(), FGChainComplex(), {Gf2Matrix()}, {Gf2Matrix()},
                      {Gf2Matrix()}) {}

ReductionTriple::ReductionTriple(FGChainComplex big, FGChainComplex small,
                                 std::vector<Gf2Matrix> f, std::vector<Gf2Matrix> g,
                                 std::vector<Gf2Matrix> h)
    : big_(std::move(big)), small_(std::move(small)), f_(std::move(f)), g_(std::move(g)) {
  if (big_.lo() != small_.lo() || big_.hi() != small_.hi()) {
    throw DimensionMismatch("ReductionTriple: big and small complexes use different windows");
  }
  const std::size_t n = static_cast<std::size_t>(hi() - lo() + 1);
  if (f_.size() != n || g_.size() != n || h.size() != n) {
    throw DimensionMismatch("ReductionTriple: expected " + std::to_string(n) +
                            " maps per family");
  }
  h_.reserve(n + 1);
  h_.emplace_back(big_.dim(lo()), 0);
  for (auto& m : h) h_.push_back(std::move(m));
  for (int k = lo(); k <= hi(); ++k) {
    require_shape(this->f(k), small_.dim(k), big_.dim(k), "f", k);
    require_shape(this->g(k), big_.dim(k), small_.dim(k), "g", k);
    require_shape(this->h(k), big_.dim(k + 1), big_.dim(k), "h", k);
  }
}

ReductionTriple ReductionTriple::identity(const FGChainComplex& c) {
  std::vector<Gf2Matrix> f;
  std::vector<Gf2Matrix> g;
  std::vector<Gf2Matrix> h;
  for (int k = c.lo(); k <= c.hi(); ++k) {
    f.push_back(Gf2Matrix::identity(c.dim(k)));
    g.push_back(Gf2Matrix::identity(c.dim(k)));
    h.emplace_back(c.dim(k + 1), c.dim(k));
  }
  return ReductionTriple(c, c, std::move(f), std::move(g), std::move(h));
}

const Gf2Matrix& ReductionTriple::f(int k) const noexcept {
  if (k < lo() || k > hi()) return empty_matrix();
  return f_[static_cast<std::size_t>(k - lo())];
}

const Gf2Matrix& ReductionTriple::g(int k) const noexcept {
  if (k < lo() || k > hi()) return empty_matrix();
  return g_[static_cast<std::size_t>(k - lo())];
}

const Gf2Matrix& ReductionTriple::h(int k) const noexcept {
  if (k < lo() - 1 || k > hi()) return empty_matrix();
  return h_[static_cast<std::size_t>(k - lo() + 1)];
}

void ReductionTriple::set_f(int k, Gf2Matrix m) {
  if (k < lo() || k > hi()) throw DimensionMismatch("set_f: degree outside window");
  require_shape(m, small_.dim(k), big_.dim(k), "f", k);
  f_[static_cast<std::size_t>(k - lo())] = std::move(m);
}

void ReductionTriple::set_g(int k, Gf2Matrix m) {
  if (k < lo() || k > hi()) throw DimensionMismatch("set_g: degree outside window");
  require_shape(m, big_.dim(k), small_.dim(k), "g", k);
  g_[static_cast<std::size_t>(k - lo())] = std::move(m);
}

void ReductionTriple::set_h(int k, Gf2Matrix m) {
  if (k < lo() || k > hi()) throw DimensionMismatch("set_h: degree outside window");
  require_shape(m, big_.dim(k + 1), big_.dim(k), "h", k);
  h_[static_cast<std::size_t>(k - lo() + 1)] = std::move(m);
}

FGChainComplex from_truncated(const TruncatedComplex& t) {
  if (t.d1.cols() != t.d2.rows()) {
    throw DimensionMismatch("truncated complex: D1 is " + shape(t.d1) + " but D2 is " +
                            shape(t.d2));
  }
  return FGChainComplex(0, {t.c0(), t.c1(), t.c2()}, {t.d1, t.d2});
}

TruncatedComplex to_truncated(const FGChainComplex& c) {
  if (c.lo() != 0 || c.hi() != 2) {
    throw DimensionMismatch("to_truncated: complex window must be [0, 2]");
  }
  return {c.d(1), c.d(2)};
}

BettiVector betti(const FGChainComplex& c) {
  BettiVector out{c.lo(), {}};
  std::vector<std::size_t> ranks;  // rank d(k) for k in [lo, hi + 1]
  for (int k = c.lo(); k <= c.hi() + 1; ++k) ranks.push_back(rank(c.d(k)));
  for (int k = c.lo(); k <= c.hi(); ++k) {
    const std::size_t i = static_cast<std::size_t>(k - c.lo());
    out.values.push_back(c.dim(k) - ranks[i] - ranks[i + 1]);
  }
  return out;
}

VerificationReport verify_reduction(const ReductionTriple& r) {
  VerificationReport report;
  const FGChainComplex& big = r.big();
  const FGChainComplex& small = r.small();
  for (int k = r.lo(); k <= r.hi(); ++k) {
    report.add("f_g_identity", mul(r.f(k), r.g(k)).is_identity(), k);

    Gf2Matrix homotopy = mul(r.g(k), r.f(k));
    homotopy += mul(big.d(k + 1), r.h(k));
    homotopy += mul(r.h(k - 1), big.d(k));
    report.add("homotopy_identity", homotopy.is_identity(), k);

    report.add("f_h_zero", mul(r.f(k + 1), r.h(k)).is_zero(), k);
    report.add("h_g_zero", mul(r.h(k), r.g(k)).is_zero(), k);
    report.add("h_h_zero", mul(r.h(k + 1), r.h(k)).is_zero(), k);
  }
  for (int k = r.lo() + 1; k <= r.hi(); ++k) {
    report.add("f_chain_map", mul(r.f(k - 1), big.d(k)) == mul(small.d(k), r.f(k)), k);
    report.add("g_chain_map", mul(big.d(k), r.g(k)) == mul(r.g(k - 1), small.d(k)), k);
  }
  return report;
}

}  // namespace morse
