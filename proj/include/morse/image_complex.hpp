#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "morse/chain_complex.hpp"

namespace morse {

/// Monochrome raster; a set pixel is black (foreground).
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(std::size_t width, std::size_t height);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  bool get(std::size_t r, std::size_t c) const { return pixels_[r * width_ + c]; }
  void set(std::size_t r, std::size_t c, bool black) { pixels_[r * width_ + c] = black; }
  std::size_t black_count() const noexcept;

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<bool> pixels_;
};

inline constexpr int kDefaultThreshold = 128;

/// Netpbm bitmap, plain (P1) or raw (P4). 1 = black = foreground.
BinaryImage parse_pbm(std::span<const std::uint8_t> bytes);
/// Netpbm graymap, plain (P2) or raw (P5). Samples are rescaled to 0..255
/// when maxval != 255; a pixel is foreground iff its sample < threshold.
BinaryImage parse_pgm(std::span<const std::uint8_t> bytes, int threshold = kDefaultThreshold);
/// Dispatches on the magic number (P1, P2, P4, P5).
BinaryImage parse_netpbm(std::span<const std::uint8_t> bytes, int threshold = kDefaultThreshold);
BinaryImage read_image_file(const std::string& path, int threshold = kDefaultThreshold);
/// Plain PBM (P1), rows wrapped at 70 characters.
void write_pbm(std::ostream& out, const BinaryImage& img);

/// Seeded synthetic image. Pixels are drawn in row-major order; pixel is black
/// iff unit_uniform(rng) < density with rng = std::mt19937_64(seed) (see
/// random.hpp for the exact mapping from engine output to [0, 1)).
BinaryImage generate_image(std::size_t width, std::size_t height, double density,
                           std::uint64_t seed);

struct LatticePoint {
  std::size_t r = 0;
  std::size_t c = 0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

enum class EdgeOrientation : std::uint8_t { horizontal, vertical };

struct CubicalEdge {
  std::size_t v0 = 0;  // smaller lattice endpoint
  std::size_t v1 = 0;
  EdgeOrientation orientation = EdgeOrientation::horizontal;
};

struct CubicalSquare {
  LatticePoint pixel;  // top-left corner
  std::array<std::size_t, 4> edges{};  // top, left, right, bottom
};

/// Closed cubical complex spanned by the black pixels of an image.
///
/// Pixel (r, c) is the unit square with corners (r, c) .. (r + 1, c + 1).
/// Vertices are ordered lexicographically, edges by (smaller endpoint,
/// horizontal before vertical), squares by pixel.
class CubicalComplex {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  CubicalComplex() = default;
  explicit CubicalComplex(const BinaryImage& img);

  const std::vector<LatticePoint>& vertices() const noexcept { return vertices_; }
  const std::vector<CubicalEdge>& edges() const noexcept { return edges_; }
  const std::vector<CubicalSquare>& squares() const noexcept { return squares_; }

  /// Position of a cell, or npos if it is not in the complex.
  std::size_t vertex_index(std::size_t r, std::size_t c) const noexcept;
  std::size_t edge_index(std::size_t r, std::size_t c, EdgeOrientation o) const noexcept;
  std::size_t square_index(std::size_t r, std::size_t c) const noexcept;

 private:
  std::size_t width_ = 0;   // pixel columns
  std::size_t height_ = 0;  // pixel rows
  std::vector<LatticePoint> vertices_;
  std::vector<CubicalEdge> edges_;
  std::vector<CubicalSquare> squares_;
  // Dense lookup grids over the lattice, npos where absent.
  std::vector<std::size_t> vertex_at_;   // (height + 1) x (width + 1)
  std::vector<std::size_t> hedge_at_;    // (height + 1) x width
  std::vector<std::size_t> vedge_at_;    // height x (width + 1)
  std::vector<std::size_t> square_at_;   // height x width
};

CubicalComplex build_cubical(const BinaryImage& img);

/// D1[v][e] = 1 iff v is an endpoint of e; D2[e][s] = 1 iff e is a side of s.
/// Throws BoundaryViolation if D1 D2 != 0 (a construction bug).
TruncatedComplex boundary_matrices(const CubicalComplex& k);

/// Number of 8-connected foreground components (union-find). Diagonal
/// neighbours share a corner vertex in the cubical complex, so this equals
/// betti_0 of the complex.
std::size_t count_components(const BinaryImage& img);

}  // namespace morse
