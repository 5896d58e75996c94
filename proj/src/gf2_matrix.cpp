#include "morse/gf2_matrix.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "morse/errors.hpp"

namespace morse {

namespace {

using word_type = Gf2Matrix::word_type;
constexpr std::size_t kWordBits = Gf2Matrix::word_bits;

std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

word_type low_mask(std::size_t n) {
  return n >= kWordBits ? ~word_type{0} : ((word_type{1} << n) - 1);
}

std::string shape(const Gf2Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const Gf2Matrix& m, const char* op) {
  if (!m.is_square()) {
    throw DimensionMismatch(std::string(op) + ": expected a square matrix, got " + shape(m));
  }
}

inline void xor_into(word_type* dst, const word_type* src, std::size_t n) {
  for (std::size_t w = 0; w < n; ++w) dst[w] ^= src[w];
}

// Reads n bits starting at bit `offset` of `src` into `dst` (aligned at bit 0).
void extract_bits(std::span<const word_type> src, std::size_t offset, std::size_t n,
                  word_type* dst) {
  const std::size_t out_words = words_for(n);
  for (std::size_t w = 0; w < out_words; ++w) {
    const std::size_t pos = offset + w * kWordBits;
    const std::size_t idx = pos / kWordBits;
    const std::size_t sh = pos % kWordBits;
    word_type val = src[idx] >> sh;
    if (sh != 0 && idx + 1 < src.size()) val |= src[idx + 1] << (kWordBits - sh);
    const std::size_t remaining = n - w * kWordBits;
    dst[w] = val & low_mask(remaining);
  }
}

// ORs the first n bits of `src` into `dst` starting at bit `offset`.
void or_bits(std::span<word_type> dst, std::size_t offset, const word_type* src, std::size_t n) {
  const std::size_t in_words = words_for(n);
  for (std::size_t w = 0; w < in_words; ++w) {
    const word_type val = src[w] & low_mask(n - w * kWordBits);
    if (val == 0) continue;
    const std::size_t pos = offset + w * kWordBits;
    const std::size_t idx = pos / kWordBits;
    const std::size_t sh = pos % kWordBits;
    dst[idx] |= val << sh;
    if (sh != 0 && idx + 1 < dst.size()) dst[idx + 1] |= val >> (kWordBits - sh);
  }
}

void clear_bits(std::span<word_type> dst, std::size_t offset, std::size_t n) {
  std::size_t pos = offset;
  const std::size_t end = offset + n;
  while (pos < end) {
    const std::size_t idx = pos / kWordBits;
    const std::size_t sh = pos % kWordBits;
    const std::size_t take = std::min(kWordBits - sh, end - pos);
    dst[idx] &= ~(low_mask(take) << sh);
    pos += take;
  }
}

// Row-major elimination state shared by rank, kernel, and inverse routines.
// Pivots are chosen as the first row (at or below the current one) holding a
// 1 in the current column, columns visited left to right.
struct Echelon {
  Gf2Matrix reduced;
  std::vector<std::size_t> pivot_cols;
};

Echelon eliminate(Gf2Matrix m, bool full) {
  Echelon out;
  const std::size_t rows = m.rows();
  const std::size_t stride = m.stride();
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < rows; ++c) {
    const std::size_t w = c / kWordBits;
    const word_type bit = word_type{1} << (c % kWordBits);
    std::size_t p = r;
    while (p < rows && (m.row(p)[w] & bit) == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      auto rp = m.row(p);
      auto rr = m.row(r);
      std::swap_ranges(rp.begin(), rp.end(), rr.begin());
    }
    const word_type* pivot = m.row(r).data();
    for (std::size_t i = full ? 0 : r + 1; i < rows; ++i) {
      if (i == r) continue;
      word_type* target = m.row(i).data();
      if (target[w] & bit) xor_into(target + w, pivot + w, stride - w);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

// Product routines. The sparse route XORs one row of b per set bit of a; the
// table route (method of four Russians, 8-bit chunks) wins once a is dense.
Gf2Matrix mul_sparse(const Gf2Matrix& a, const Gf2Matrix& b) {
  Gf2Matrix out(a.rows(), b.cols());
  const std::size_t stride = b.stride();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    word_type* dst = out.row(i).data();
    const auto arow = a.row(i);
    for (std::size_t w = 0; w < arow.size(); ++w) {
      word_type bits = arow[w];
      while (bits != 0) {
        const std::size_t k = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        xor_into(dst, b.row(k).data(), stride);
      }
    }
  }
  return out;
}

Gf2Matrix mul_table(const Gf2Matrix& a, const Gf2Matrix& b) {
  constexpr std::size_t kChunk = 8;
  Gf2Matrix out(a.rows(), b.cols());
  const std::size_t stride = b.stride();
  std::vector<word_type> table((std::size_t{1} << kChunk) * stride);
  for (std::size_t k0 = 0; k0 < a.cols(); k0 += kChunk) {
    const std::size_t width = std::min(kChunk, a.cols() - k0);
    const std::size_t entries = std::size_t{1} << width;
    // Gray-code free build: table[s] = table[s without lowest bit] ^ row.
    std::fill_n(table.begin(), stride, 0);
    for (std::size_t s = 1; s < entries; ++s) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(s));
      const word_type* prev = table.data() + (s & (s - 1)) * stride;
      const word_type* brow = b.row(k0 + low).data();
      word_type* dst = table.data() + s * stride;
      for (std::size_t w = 0; w < stride; ++w) dst[w] = prev[w] ^ brow[w];
    }
    const std::size_t w = k0 / kWordBits;
    const std::size_t sh = k0 % kWordBits;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const std::size_t idx = (a.row(i)[w] >> sh) & (entries - 1);
      if (idx != 0) xor_into(out.row(i).data(), table.data() + idx * stride, stride);
    }
  }
  return out;
}

}  // namespace

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * words_for(cols), 0) {}

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
  Gf2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

Gf2Matrix Gf2Matrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  const std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  Gf2Matrix m(rows.size(), cols);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != cols) throw DimensionMismatch("from_rows: ragged rows");
    std::size_t j = 0;
    for (int v : r) m.set(i, j++, v != 0);
    ++i;
  }
  return m;
}

Gf2Matrix Gf2Matrix::random(std::size_t rows, std::size_t cols, Rng& rng, double density) {
  Gf2Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (unit_uniform(rng) < density) m.set(i, j, true);
  return m;
}

bool Gf2Matrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](word_type w) { return w == 0; });
}

bool Gf2Matrix::is_identity() const noexcept {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto r = row(i);
    for (std::size_t w = 0; w < stride_; ++w) {
      const word_type expected = (w == i / word_bits) ? word_type{1} << (i % word_bits) : 0;
      if (r[w] != expected) return false;
    }
  }
  return true;
}

std::size_t Gf2Matrix::popcount() const noexcept {
  std::size_t n = 0;
  for (word_type w : data_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

Gf2Matrix Gf2Matrix::transpose() const {
  Gf2Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto r = row(i);
    for (std::size_t w = 0; w < stride_; ++w) {
      word_type bits = r[w];
      while (bits != 0) {
        const std::size_t j = w * word_bits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        t.set(j, i, true);
      }
    }
  }
  return t;
}

Gf2Matrix Gf2Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw DimensionMismatch("block: region exceeds " + shape(*this));
  }
  Gf2Matrix out(nr, nc);
  if (nc == 0) return out;
  for (std::size_t i = 0; i < nr; ++i) extract_bits(row(r0 + i), c0, nc, out.row(i).data());
  return out;
}

void Gf2Matrix::set_block(std::size_t r0, std::size_t c0, const Gf2Matrix& src) {
  if (r0 + src.rows() > rows_ || c0 + src.cols() > cols_) {
    throw DimensionMismatch("set_block: region exceeds " + shape(*this));
  }
  if (src.cols() == 0) return;
  for (std::size_t i = 0; i < src.rows(); ++i) {
    auto dst = row(r0 + i);
    clear_bits(dst, c0, src.cols());
    or_bits(dst, c0, src.row(i).data(), src.cols());
  }
}

Gf2Matrix& Gf2Matrix::operator+=(const Gf2Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw DimensionMismatch("add: " + shape(*this) + " vs " + shape(other));
  }
  xor_into(data_.data(), other.data_.data(), data_.size());
  return *this;
}

Gf2Matrix operator*(const Gf2Matrix& a, const Gf2Matrix& b) { return mul(a, b); }

Gf2Matrix mul(const Gf2Matrix& a, const Gf2Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("mul: " + shape(a) + " * " + shape(b));
  }
  if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0) return Gf2Matrix(a.rows(), b.cols());
  const std::size_t sparse_cost = a.popcount();
  const std::size_t chunks = (a.cols() + 7) / 8;
  const std::size_t table_cost = chunks * (256 + a.rows());
  return sparse_cost <= table_cost ? mul_sparse(a, b) : mul_table(a, b);
}

std::size_t rank(const Gf2Matrix& m) { return eliminate(m, false).pivot_cols.size(); }

std::optional<Gf2Matrix> inverse(const Gf2Matrix& m) {
  require_square(m, "inverse");
  const std::size_t n = m.rows();
  Gf2Matrix work = m;
  Gf2Matrix inv = Gf2Matrix::identity(n);
  const std::size_t stride = work.stride();
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t w = c / kWordBits;
    const word_type bit = word_type{1} << (c % kWordBits);
    std::size_t p = c;
    while (p < n && (work.row(p)[w] & bit) == 0) ++p;
    if (p == n) return std::nullopt;
    if (p != c) {
      auto a = work.row(p);
      std::swap_ranges(a.begin(), a.end(), work.row(c).begin());
      auto b = inv.row(p);
      std::swap_ranges(b.begin(), b.end(), inv.row(c).begin());
    }
    const word_type* pw = work.row(c).data();
    const word_type* pi = inv.row(c).data();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      word_type* tw = work.row(i).data();
      if (tw[w] & bit) {
        xor_into(tw + w, pw + w, stride - w);
        xor_into(inv.row(i).data(), pi, stride);
      }
    }
  }
  return inv;
}

Gf2Matrix inv_unit_lower_triangular(const Gf2Matrix& l) {
  if (!is_lower_unitriangular(l)) {
    throw PreconditionViolation("inv_unit_lower_triangular: input is not unit lower triangular");
  }
  const std::size_t n = l.rows();
  Gf2Matrix out(n, n);
  const std::size_t stride = out.stride();
  for (std::size_t i = 0; i < n; ++i) {
    word_type* dst = out.row(i).data();
    const auto lrow = l.row(i);
    for (std::size_t w = 0; w <= i / kWordBits; ++w) {
      word_type bits = lrow[w];
      if (w == i / kWordBits) bits &= low_mask(i % kWordBits);
      while (bits != 0) {
        const std::size_t j = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        xor_into(dst, out.row(j).data(), stride);
      }
    }
    out.flip(i, i);
  }
  return out;
}

Gf2Matrix right_kernel_basis(const Gf2Matrix& m) {
  const Echelon e = eliminate(m, true);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  // Built transposed (one basis vector per row), then flipped into columns.
  Gf2Matrix basis_rows(free_cols.size(), n);
  for (std::size_t t = 0; t < free_cols.size(); ++t) {
    const std::size_t f = free_cols[t];
    basis_rows.set(t, f, true);
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) {
      if (e.reduced.get(r, f)) basis_rows.set(t, e.pivot_cols[r], true);
    }
  }
  return basis_rows.transpose();
}

Gf2Matrix pow(const Gf2Matrix& m, std::size_t k) {
  require_square(m, "pow");
  Gf2Matrix result = Gf2Matrix::identity(m.rows());
  Gf2Matrix base = m;
  while (k > 0) {
    if (k & 1U) result = mul(result, base);
    k >>= 1U;
    if (k > 0) {
      // A zero power stays zero and some remaining bit of k will multiply it in.
      if (base.is_zero()) return Gf2Matrix(m.rows(), m.cols());
      base = mul(base, base);
    }
  }
  return result;
}

Gf2Matrix nilpotent_series_inverse(const Gf2Matrix& n, std::size_t bound) {
  require_square(n, "nilpotent_series_inverse");
  if (!pow(n, bound).is_zero()) {
    throw NotNilpotent("nilpotent_series_inverse: n^" + std::to_string(bound) + " != 0");
  }
  const std::size_t size = n.rows();
  // Since n^i = 0 for i >= bound, the truncated sum equals
  //   sum_{i < 2^t} n^i = prod_{j < t} (I + n^(2^j))   with 2^t >= bound.
  Gf2Matrix sum = bound == 0 ? Gf2Matrix(size, size) : Gf2Matrix::identity(size);
  Gf2Matrix power = n;
  for (std::size_t reach = 1; reach < bound; reach *= 2) {
    sum = mul(sum, Gf2Matrix::identity(size) + power);
    power = mul(power, power);
  }
  const Gf2Matrix one_plus_n = Gf2Matrix::identity(size) + n;
  if (!mul(one_plus_n, sum).is_identity() || !mul(sum, one_plus_n).is_identity()) {
    throw NotNilpotent("nilpotent_series_inverse: truncated series does not invert I + n");
  }
  return sum;
}

std::optional<std::size_t> nilpotency_index(const Gf2Matrix& m) {
  require_square(m, "nilpotency_index");
  if (m.is_zero()) return 1;
  // squares[j] = m^(2^j); stop at the first zero power. A nilpotent n x n
  // matrix has index <= n, so reaching 2^j >= n without a zero means "not".
  std::vector<Gf2Matrix> squares{m};
  while (!squares.back().is_zero()) {
    if ((std::size_t{1} << (squares.size() - 1)) >= m.rows()) return std::nullopt;
    squares.push_back(mul(squares.back(), squares.back()));
  }
  // Largest e with m^e != 0, built from the highest power down.
  Gf2Matrix acc = Gf2Matrix::identity(m.rows());
  std::size_t exponent = 0;
  for (std::size_t j = squares.size() - 1; j-- > 0;) {
    Gf2Matrix candidate = mul(acc, squares[j]);
    if (!candidate.is_zero()) {
      acc = std::move(candidate);
      exponent += std::size_t{1} << j;
    }
  }
  return exponent + 1;
}

Gf2Matrix permute_rows(const Gf2Matrix& m, const Permutation& rp) {
  if (rp.size() != m.rows()) {
    throw DimensionMismatch("permute_rows: permutation of size " + std::to_string(rp.size()) +
                            " for " + shape(m));
  }
  Gf2Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto src = m.row(i);
    std::copy(src.begin(), src.end(), out.row(rp(i)).begin());
  }
  return out;
}

Gf2Matrix permute_cols(const Gf2Matrix& m, const Permutation& cp) {
  if (cp.size() != m.cols()) {
    throw DimensionMismatch("permute_cols: permutation of size " + std::to_string(cp.size()) +
                            " for " + shape(m));
  }
  Gf2Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto src = m.row(i);
    for (std::size_t w = 0; w < src.size(); ++w) {
      word_type bits = src[w];
      while (bits != 0) {
        const std::size_t j = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        out.set(i, cp(j), true);
      }
    }
  }
  return out;
}

Gf2Matrix permute(const Gf2Matrix& m, const Permutation& rp, const Permutation& cp) {
  if (rp.size() != m.rows() || cp.size() != m.cols()) {
    throw DimensionMismatch("permute: permutation sizes do not match " + shape(m));
  }
  return permute_cols(permute_rows(m, rp), cp);
}

Blocks4 split4(const Gf2Matrix& m, std::size_t i, std::size_t j) {
  if (i > m.rows() || j > m.cols()) {
    throw DimensionMismatch("split4: split point (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") outside " + shape(m));
  }
  const std::size_t r = m.rows() - i;
  const std::size_t c = m.cols() - j;
  return {m.block(0, 0, i, j), m.block(0, j, i, c), m.block(i, 0, r, j), m.block(i, j, r, c)};
}

Gf2Matrix hconcat(const Gf2Matrix& a, const Gf2Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hconcat: " + shape(a) + " | " + shape(b));
  Gf2Matrix out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

Gf2Matrix vconcat(const Gf2Matrix& a, const Gf2Matrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("vconcat: " + shape(a) + " ; " + shape(b));
  Gf2Matrix out(a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

Gf2Matrix join4(const Blocks4& b) {
  return vconcat(hconcat(b.top_left, b.top_right), hconcat(b.bottom_left, b.bottom_right));
}

bool is_lower_unitriangular(const Gf2Matrix& m) {
  require_square(m, "is_lower_unitriangular");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    const std::size_t w = i / kWordBits;
    const std::size_t b = i % kWordBits;
    if (((r[w] >> b) & 1U) == 0) return false;
    if ((r[w] >> b) >> 1U) return false;
    for (std::size_t v = w + 1; v < r.size(); ++v)
      if (r[v] != 0) return false;
  }
  return true;
}

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t v : image_) {
    if (v >= image_.size() || seen[v]) {
      throw PreconditionViolation("Permutation: image is not a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> image(n);
  for (std::size_t i = 0; i < n; ++i) image[i] = i;
  return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  Permutation p;
  p.image_ = std::move(inv);
  return p;
}

Gf2Matrix Permutation::matrix() const {
  Gf2Matrix m(size(), size());
  for (std::size_t i = 0; i < size(); ++i) m.set(image_[i], i, true);
  return m;
}

Gf2Matrix read_matrix(std::istream& in) {
  long long rows = -1;
  long long cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    throw ParseError("matrix: expected '<rows> <cols>' header");
  }
  constexpr long long kMaxEntries = 1LL << 34;
  if (rows > 0 && cols > kMaxEntries / rows) throw ParseError("matrix: dimensions too large");
  Gf2Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  std::string token;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!(in >> token)) {
        throw ParseError("matrix: truncated data at entry (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
      }
      if (token == "1") {
        m.set(i, j, true);
      } else if (token != "0") {
        throw ParseError("matrix: invalid token '" + token + "'");
      }
    }
  }
  if (in >> token) throw ParseError("matrix: trailing data '" + token + "'");
  return m;
}

Gf2Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Gf2Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  if (m.cols() == 0) return;
  std::string line;
  line.reserve(2 * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j != 0) line.push_back(' ');
      line.push_back(m.get(i, j) ? '1' : '0');
    }
    line.push_back('\n');
    out << line;
  }
}

}  // namespace morse
