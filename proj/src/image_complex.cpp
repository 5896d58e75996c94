#include "morse/image_complex.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <numeric>
#include <ostream>

#include "morse/errors.hpp"
#include "morse/random.hpp"

namespace morse {

namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 30;

// Cursor over a Netpbm byte stream. Header tokens may be separated by any
// whitespace and interleaved with '#' comments that run to end of line.
class NetpbmReader {
 public:
  explicit NetpbmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  static bool is_space(std::uint8_t ch) {
    return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\v' || ch == '\f' || ch == '\r';
  }

  std::string magic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') throw ParseError("netpbm: bad magic number");
    pos_ = 2;
    return {static_cast<char>(bytes_[0]), static_cast<char>(bytes_[1])};
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t header_number(const char* what) {
    skip_space_and_comments();
    return decimal(what);
  }

  /// Raster samples of plain formats. Comments are skipped here too, as
  /// libnetpbm does.
  std::size_t raster_number(const char* what) {
    skip_space_and_comments();
    return decimal(what);
  }

  /// Next non-whitespace byte of a plain bitmap raster.
  std::uint8_t raster_bit() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw ParseError("netpbm: truncated raster");
    const std::uint8_t ch = bytes_[pos_++];
    if (ch != '0' && ch != '1') throw ParseError("netpbm: invalid bitmap character");
    return static_cast<std::uint8_t>(ch - '0');
  }

  /// The single whitespace byte that ends a raw-format header.
  void raster_separator() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw ParseError("netpbm: missing whitespace before raster");
    }
    ++pos_;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw ParseError("netpbm: truncated raster");
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::size_t decimal(const char* what) {
    if (pos_ >= bytes_.size() || bytes_[pos_] < '0' || bytes_[pos_] > '9') {
      throw ParseError(std::string("netpbm: expected ") + what);
    }
    std::size_t value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > kMaxPixels) throw ParseError(std::string("netpbm: ") + what + " too large");
      ++pos_;
    }
    return value;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void check_dimensions(std::size_t width, std::size_t height) {
  if (height != 0 && width > kMaxPixels / height) {
    throw ParseError("netpbm: image dimensions overflow");
  }
}

BinaryImage parse_bitmap(NetpbmReader& in, bool raw) {
  const std::size_t width = in.header_number("width");
  const std::size_t height = in.header_number("height");
  check_dimensions(width, height);
  BinaryImage img(width, height);
  if (raw) {
    in.raster_separator();
    const std::size_t row_bytes = (width + 7) / 8;
    for (std::size_t r = 0; r < height; ++r) {
      const auto row = in.take(row_bytes);
      for (std::size_t c = 0; c < width; ++c) img.set(r, c, (row[c / 8] >> (7 - c % 8)) & 1U);
    }
  } else {
    for (std::size_t r = 0; r < height; ++r)
      for (std::size_t c = 0; c < width; ++c) img.set(r, c, in.raster_bit() != 0);
  }
  return img;
}

BinaryImage parse_graymap(NetpbmReader& in, bool raw, int threshold) {
  if (threshold < 0 || threshold > 256) throw PreconditionViolation("threshold out of range");
  const std::size_t width = in.header_number("width");
  const std::size_t height = in.header_number("height");
  const std::size_t maxval = in.header_number("maxval");
  if (maxval == 0 || maxval > 65535) throw ParseError("netpbm: maxval out of range");
  check_dimensions(width, height);
  const auto scaled = [maxval](std::size_t v) {
    return maxval == 255 ? v : (v * 255 + maxval / 2) / maxval;
  };
  BinaryImage img(width, height);
  if (raw) in.raster_separator();
  const std::size_t sample_bytes = maxval < 256 ? 1 : 2;
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      std::size_t v = 0;
      if (raw) {
        const auto s = in.take(sample_bytes);
        v = sample_bytes == 1 ? s[0] : (std::size_t{s[0]} << 8U) | s[1];
      } else {
        v = in.raster_number("sample");
      }
      if (v > maxval) throw ParseError("netpbm: sample exceeds maxval");
      img.set(r, c, static_cast<int>(scaled(v)) < threshold);
    }
  }
  return img;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

BinaryImage::BinaryImage(std::size_t width, std::size_t height)
    : width_(width), height_(height), pixels_(width * height, false) {}

std::size_t BinaryImage::black_count() const noexcept {
  return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), true));
}

BinaryImage parse_pbm(std::span<const std::uint8_t> bytes) {
  NetpbmReader in(bytes);
  const std::string magic = in.magic();
  if (magic == "P1") return parse_bitmap(in, false);
  if (magic == "P4") return parse_bitmap(in, true);
  throw ParseError("netpbm: expected P1 or P4, got " + magic);
}

BinaryImage parse_pgm(std::span<const std::uint8_t> bytes, int threshold) {
  NetpbmReader in(bytes);
  const std::string magic = in.magic();
  if (magic == "P2") return parse_graymap(in, false, threshold);
  if (magic == "P5") return parse_graymap(in, true, threshold);
  throw ParseError("netpbm: expected P2 or P5, got " + magic);
}

BinaryImage parse_netpbm(std::span<const std::uint8_t> bytes, int threshold) {
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '1' || bytes[1] == '4') return parse_pbm(bytes);
    if (bytes[1] == '2' || bytes[1] == '5') return parse_pgm(bytes, threshold);
  }
  throw ParseError("netpbm: unsupported magic number");
}

BinaryImage read_image_file(const std::string& path, int threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open image file '" + path + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return parse_netpbm(bytes, threshold);
}

void write_pbm(std::ostream& out, const BinaryImage& img) {
  out << "P1\n" << img.width() << ' ' << img.height() << '\n';
  for (std::size_t r = 0; r < img.height(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < img.width(); ++c) {
      line.push_back(img.get(r, c) ? '1' : '0');
      if (line.size() == 70) {
        out << line << '\n';
        line.clear();
      }
    }
    if (!line.empty() || img.width() == 0) out << line << '\n';
  }
}

BinaryImage generate_image(std::size_t width, std::size_t height, double density,
                           std::uint64_t seed) {
  Rng rng(seed);
  BinaryImage img(width, height);
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c) img.set(r, c, unit_uniform(rng) < density);
  return img;
}

CubicalComplex::CubicalComplex(const BinaryImage& img)
    : width_(img.width()),
      height_(img.height()),
      vertex_at_((img.height() + 1) * (img.width() + 1), npos),
      hedge_at_((img.height() + 1) * img.width(), npos),
      vedge_at_(img.height() * (img.width() + 1), npos),
      square_at_(img.height() * img.width(), npos) {
  const std::size_t w = width_;
  const std::size_t h = height_;
  const auto black = [&](std::size_t r, std::size_t c) {
    // r, c may be one past either end (wrapped to max via unsigned arithmetic).
    return r < h && c < w && img.get(r, c);
  };
  const auto vertex_present = [&](std::size_t r, std::size_t c) {
    return black(r, c) || black(r - 1, c) || black(r, c - 1) || black(r - 1, c - 1);
  };
  const auto hedge_present = [&](std::size_t r, std::size_t c) {
    return c < w && (black(r, c) || black(r - 1, c));
  };
  const auto vedge_present = [&](std::size_t r, std::size_t c) {
    return r < h && (black(r, c) || black(r, c - 1));
  };

  for (std::size_t r = 0; r <= h; ++r) {
    for (std::size_t c = 0; c <= w; ++c) {
      if (!vertex_present(r, c)) continue;
      vertex_at_[r * (w + 1) + c] = vertices_.size();
      vertices_.push_back({r, c});
    }
  }
  // Every edge is emitted from its smaller endpoint; scanning the lattice in
  // order and emitting horizontal before vertical gives the edge ordering.
  for (std::size_t r = 0; r <= h; ++r) {
    for (std::size_t c = 0; c <= w; ++c) {
      if (hedge_present(r, c)) {
        hedge_at_[r * w + c] = edges_.size();
        edges_.push_back(
            {vertex_index(r, c), vertex_index(r, c + 1), EdgeOrientation::horizontal});
      }
      if (vedge_present(r, c)) {
        vedge_at_[r * (w + 1) + c] = edges_.size();
        edges_.push_back({vertex_index(r, c), vertex_index(r + 1, c), EdgeOrientation::vertical});
      }
    }
  }
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!img.get(r, c)) continue;
      square_at_[r * w + c] = squares_.size();
      squares_.push_back({{r, c},
                          {edge_index(r, c, EdgeOrientation::horizontal),
                           edge_index(r, c, EdgeOrientation::vertical),
                           edge_index(r, c + 1, EdgeOrientation::vertical),
                           edge_index(r + 1, c, EdgeOrientation::horizontal)}});
    }
  }
}

std::size_t CubicalComplex::vertex_index(std::size_t r, std::size_t c) const noexcept {
  if (r > height_ || c > width_) return npos;
  return vertex_at_[r * (width_ + 1) + c];
}

std::size_t CubicalComplex::edge_index(std::size_t r, std::size_t c,
                                       EdgeOrientation o) const noexcept {
  if (o == EdgeOrientation::horizontal) {
    if (r > height_ || c >= width_) return npos;
    return hedge_at_[r * width_ + c];
  }
  if (r >= height_ || c > width_) return npos;
  return vedge_at_[r * (width_ + 1) + c];
}

std::size_t CubicalComplex::square_index(std::size_t r, std::size_t c) const noexcept {
  if (r >= height_ || c >= width_) return npos;
  return square_at_[r * width_ + c];
}

CubicalComplex build_cubical(const BinaryImage& img) { return CubicalComplex(img); }

TruncatedComplex boundary_matrices(const CubicalComplex& k) {
  TruncatedComplex t{Gf2Matrix(k.vertices().size(), k.edges().size()),
                     Gf2Matrix(k.edges().size(), k.squares().size())};
  for (std::size_t e = 0; e < k.edges().size(); ++e) {
    t.d1.set(k.edges()[e].v0, e, true);
    t.d1.set(k.edges()[e].v1, e, true);
  }
  for (std::size_t s = 0; s < k.squares().size(); ++s)
    for (std::size_t e : k.squares()[s].edges) t.d2.set(e, s, true);
  if (!mul(t.d1, t.d2).is_zero()) {
    throw BoundaryViolation("cubical complex: D1 D2 != 0");
  }
  return t;
}

std::size_t count_components(const BinaryImage& img) {
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  DisjointSets sets(w * h);
  std::size_t components = 0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!img.get(r, c)) continue;
      ++components;
      const std::size_t id = r * w + c;
      // Already visited neighbours: W, NW, N, NE.
      const auto join = [&](std::size_t rr, std::size_t cc) {
        if (img.get(rr, cc) && sets.unite(id, rr * w + cc)) --components;
      };
      if (c > 0) join(r, c - 1);
      if (r > 0) {
        if (c > 0) join(r - 1, c - 1);
        join(r - 1, c);
        if (c + 1 < w) join(r - 1, c + 1);
      }
    }
  }
  return components;
}

}  // namespace morse
