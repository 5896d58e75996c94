#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morse/random.hpp"

namespace morse {

/// Dense matrix over GF(2).
///
/// Entries are stored row-major, one bit per entry, each row padded to a whole
/// number of 64-bit words. Padding bits are always zero, so two matrices of the
/// same shape compare equal iff their storage does. Zero-sized shapes are valid
/// values (a 0 x n or n x 0 matrix has no entries but still composes).
class Gf2Matrix {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols);

  static Gf2Matrix identity(std::size_t n);
  static Gf2Matrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  /// Literal construction for small fixed matrices, e.g. {{1,0},{1,1}}.
  /// All rows must have the same length; any nonzero value is a 1.
  static Gf2Matrix from_rows(std::initializer_list<std::initializer_list<int>> rows);
  /// Each entry independently 1 with the given probability.
  static Gf2Matrix random(std::size_t rows, std::size_t cols, Rng& rng, double density = 0.5);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t stride() const noexcept { return stride_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  bool get(std::size_t i, std::size_t j) const noexcept {
    return (data_[i * stride_ + j / word_bits] >> (j % word_bits)) & 1U;
  }
  void set(std::size_t i, std::size_t j, bool value) noexcept {
    word_type& w = data_[i * stride_ + j / word_bits];
    const word_type bit = word_type{1} << (j % word_bits);
    w = value ? (w | bit) : (w & ~bit);
  }
  void flip(std::size_t i, std::size_t j) noexcept {
    data_[i * stride_ + j / word_bits] ^= word_type{1} << (j % word_bits);
  }

  std::span<const word_type> row(std::size_t i) const noexcept {
    return {data_.data() + i * stride_, stride_};
  }
  std::span<word_type> row(std::size_t i) noexcept { return {data_.data() + i * stride_, stride_}; }

  bool is_zero() const noexcept;
  bool is_identity() const noexcept;
  std::size_t popcount() const noexcept;

  Gf2Matrix transpose() const;
  /// Copy of the nr x nc block whose top-left entry is (r0, c0).
  Gf2Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  /// Overwrite the block at (r0, c0) with `src`.
  void set_block(std::size_t r0, std::size_t c0, const Gf2Matrix& src);

  Gf2Matrix& operator+=(const Gf2Matrix& other);
  friend Gf2Matrix operator+(Gf2Matrix a, const Gf2Matrix& b) { return a += b; }
  friend Gf2Matrix operator*(const Gf2Matrix& a, const Gf2Matrix& b);
  friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<word_type> data_;
};

/// Bijection on [0, size). Applied to a matrix index i it gives the new
/// position of that row or column.
class Permutation {
 public:
  Permutation() = default;
  /// Throws PreconditionViolation unless `image` is a bijection on [0, image.size()).
  explicit Permutation(std::vector<std::size_t> image);
  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator()(std::size_t i) const noexcept { return image_[i]; }
  const std::vector<std::size_t>& image() const noexcept { return image_; }
  Permutation inverse() const;
  /// Square permutation matrix P with P * e_i = e_{p(i)}.
  Gf2Matrix matrix() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

struct Blocks4 {
  Gf2Matrix top_left;
  Gf2Matrix top_right;
  Gf2Matrix bottom_left;
  Gf2Matrix bottom_right;
};

/// Matrix product over GF(2). Throws DimensionMismatch if a.cols != b.rows.
Gf2Matrix mul(const Gf2Matrix& a, const Gf2Matrix& b);

std::size_t rank(const Gf2Matrix& m);

/// Gauss-Jordan inverse; std::nullopt when the matrix is singular.
/// Throws DimensionMismatch for non-square input.
std::optional<Gf2Matrix> inverse(const Gf2Matrix& m);

/// Inverse of a unit lower triangular matrix by forward substitution.
/// Throws PreconditionViolation if `l` is not unit lower triangular.
Gf2Matrix inv_unit_lower_triangular(const Gf2Matrix& l);

/// Columns form a basis of {v : m v = 0}; shape m.cols x (m.cols - rank(m)).
/// One basis vector per free column of the reduced echelon form, in
/// increasing free-column order.
Gf2Matrix right_kernel_basis(const Gf2Matrix& m);

/// m^k with m^0 = I. Throws DimensionMismatch for non-square input.
Gf2Matrix pow(const Gf2Matrix& m, std::size_t k);

/// Sum of n^i for 0 <= i < bound, which inverts I + n when n^bound = 0.
/// Throws NotNilpotent if n^bound != 0. Both one-sided inverse identities are
/// checked before returning.
Gf2Matrix nilpotent_series_inverse(const Gf2Matrix& n, std::size_t bound);

/// Smallest m >= 1 with m-th power zero, or std::nullopt if the matrix is not
/// nilpotent. Uses repeated squaring followed by a binary descent.
std::optional<std::size_t> nilpotency_index(const Gf2Matrix& m);

/// result[rp(i)][cp(j)] = m[i][j]. Throws DimensionMismatch on size mismatch.
Gf2Matrix permute(const Gf2Matrix& m, const Permutation& rp, const Permutation& cp);
Gf2Matrix permute_rows(const Gf2Matrix& m, const Permutation& rp);
Gf2Matrix permute_cols(const Gf2Matrix& m, const Permutation& cp);

/// [[A, B], [C, D]] with A of shape i x j. Throws DimensionMismatch if the
/// split point lies outside the matrix.
Blocks4 split4(const Gf2Matrix& m, std::size_t i, std::size_t j);
Gf2Matrix join4(const Blocks4& blocks);
/// [a | b]
Gf2Matrix hconcat(const Gf2Matrix& a, const Gf2Matrix& b);
/// [a ; b]
Gf2Matrix vconcat(const Gf2Matrix& a, const Gf2Matrix& b);

/// Throws DimensionMismatch for non-square input.
bool is_lower_unitriangular(const Gf2Matrix& m);

/// Dense text format: "<rows> <cols>" then one line of space separated 0/1
/// tokens per row. Throws ParseError on malformed input.
Gf2Matrix read_matrix(std::istream& in);
Gf2Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Gf2Matrix& m);

}  // namespace morse
