#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "morse/errors.hpp"
#include "morse/image_complex.hpp"
#include "oracle.hpp"

using morse::BinaryImage;
using morse::Gf2Matrix;

namespace {

std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

BinaryImage from_strings(const std::vector<std::string>& rows) {
  BinaryImage img(rows.empty() ? 0 : rows[0].size(), rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) img.set(r, c, rows[r][c] == '#');
  return img;
}

}  // namespace

TEST_CASE("plain and raw bitmaps") {
  const BinaryImage plain =
      morse::parse_pbm(bytes("P1\n# a comment\n3 2 # trailing comment\n1 0 1\n010\n"));
  CHECK(plain.width() == 3);
  CHECK(plain.height() == 2);
  CHECK(plain == from_strings({"#.#", ".#."}));
  CHECK(plain.black_count() == 3);

  // 10 pixels per row: two bytes, MSB first, padding bits ignored.
  std::string raw = "P4\n10 2\n";
  raw += static_cast<char>(0b10000001);
  raw += static_cast<char>(0b01111111);
  raw += static_cast<char>(0b00000000);
  raw += static_cast<char>(0b11000000);
  const BinaryImage r = morse::parse_pbm(bytes(raw));
  CHECK(r == from_strings({"#......#.#", "........##"}));
  CHECK(morse::parse_netpbm(bytes(raw)) == r);
}

TEST_CASE("graymaps are thresholded after rescaling") {
  const BinaryImage g = morse::parse_pgm(bytes("P2\n4 1\n255\n0 127 128 255\n"));
  CHECK(g == from_strings({"##.."}));
  CHECK(morse::parse_pgm(bytes("P2\n4 1\n255\n0 127 128 255\n"), 200) == from_strings({"###."}));
  CHECK(morse::parse_pgm(bytes("P2\n4 1\n255\n0 127 128 255\n"), 0) == from_strings({"...."}));
  CHECK(morse::parse_pgm(bytes("P2\n4 1\n255\n0 127 128 255\n"), 256) == from_strings({"####"}));

  // maxval 15: 7 -> 119 (dark), 8 -> 136 (light).
  CHECK(morse::parse_pgm(bytes("P2 2 1 15 7 8")) == from_strings({"#."}));

  std::string raw = "P5\n2 1\n255\n";
  raw += static_cast<char>(10);
  raw += static_cast<char>(200);
  CHECK(morse::parse_netpbm(bytes(raw)) == from_strings({"#."}));

  std::string wide = "P5 2 1 65535\n";
  for (int v : {0x00, 0x10, 0xff, 0x00}) wide += static_cast<char>(v);
  CHECK(morse::parse_pgm(bytes(wide)) == from_strings({"#."}));
}

TEST_CASE("malformed images are rejected") {
  CHECK_THROWS_AS(morse::parse_netpbm(bytes("P3\n1 1\n1\n0 0 0\n")), morse::ParseError);
  CHECK_THROWS_AS(morse::parse_netpbm(bytes("")), morse::ParseError);
  CHECK_THROWS_AS(morse::parse_pbm(bytes("P1\n2 2\n1 0 1\n")), morse::ParseError);
  CHECK_THROWS_AS(morse::parse_pbm(bytes("P1\n1 1\n2\n")), morse::ParseError);
  CHECK_THROWS_AS(morse::parse_pbm(bytes("P1\nx 1\n1\n")), morse::ParseError);
  CHECK_THROWS_AS(morse::parse_pbm(bytes("P4\n8 2\n\x01")), morse::ParseError);
  CHECK_THROWS_AS(morse::parse_pgm(bytes("P2\n1 1\n0\n0\n")), morse::ParseError);
  CHECK_THROWS_AS(morse::parse_pgm(bytes("P2\n1 1\n15\n16\n")), morse::ParseError);
  CHECK_THROWS_AS(morse::parse_pgm(bytes("P2\n1 1\n255\n1\n"), 300), morse::PreconditionViolation);
  CHECK_THROWS_AS(morse::parse_pbm(bytes("P1\n99999999999 99999999999\n")), morse::ParseError);
  CHECK_THROWS_AS(morse::read_image_file("/nonexistent/image.pbm"), morse::ParseError);
}

TEST_CASE("written bitmaps parse back") {
  const BinaryImage img = morse::generate_image(75, 4, 0.5, 9);
  std::ostringstream out;
  morse::write_pbm(out, img);
  const std::string text = out.str();
  CHECK(text.rfind("P1\n75 4\n", 0) == 0);
  CHECK(morse::parse_pbm(bytes(text)) == img);
}

TEST_CASE("generated images are deterministic") {
  CHECK(morse::generate_image(20, 10, 0.3, 1) == morse::generate_image(20, 10, 0.3, 1));
  CHECK_FALSE(morse::generate_image(20, 10, 0.3, 1) == morse::generate_image(20, 10, 0.3, 2));
  CHECK(morse::generate_image(8, 8, 0.0, 5).black_count() == 0);
  CHECK(morse::generate_image(8, 8, 1.0, 5).black_count() == 64);

  // Pixel k is black iff the k-th 53-bit draw is below the density.
  morse::Rng rng(77);
  const BinaryImage img = morse::generate_image(5, 3, 0.4, 77);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 5; ++c)
      CHECK(img.get(r, c) == (static_cast<double>(rng() >> 11) / 9007199254740992.0 < 0.4));
}

TEST_CASE("single pixel complex") {
  const morse::CubicalComplex k = morse::build_cubical(from_strings({"#"}));
  REQUIRE(k.vertices().size() == 4);
  REQUIRE(k.edges().size() == 4);
  REQUIRE(k.squares().size() == 1);
  CHECK(k.vertices()[1] == morse::LatticePoint{0, 1});
  CHECK(k.vertices()[2] == morse::LatticePoint{1, 0});
  CHECK(k.edges()[0].orientation == morse::EdgeOrientation::horizontal);
  CHECK(k.edges()[1].orientation == morse::EdgeOrientation::vertical);
  CHECK(k.squares()[0].edges == std::array<std::size_t, 4>{0, 1, 2, 3});
  CHECK(k.edge_index(1, 0, morse::EdgeOrientation::horizontal) == 3);
  CHECK(k.edge_index(1, 1, morse::EdgeOrientation::horizontal) == morse::CubicalComplex::npos);
  CHECK(k.square_index(0, 0) == 0);
  CHECK(k.vertex_index(2, 2) == morse::CubicalComplex::npos);

  const morse::TruncatedComplex t = morse::boundary_matrices(k);
  CHECK(t.d1 == Gf2Matrix::from_rows({{1, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}}));
  CHECK(t.d2 == Gf2Matrix::from_rows({{1}, {1}, {1}, {1}}));
}

TEST_CASE("cell counts of small images") {
  const BinaryImage ring = from_strings({"###", "#.#", "###"});
  const morse::CubicalComplex k = morse::build_cubical(ring);
  CHECK(k.vertices().size() == 16);
  CHECK(k.edges().size() == 24);
  CHECK(k.squares().size() == 8);
  const morse::TruncatedComplex t = morse::boundary_matrices(k);
  CHECK(oracle::betti(t.d1, t.d2) == std::array<std::size_t, 3>{1, 1, 0});

  const morse::CubicalComplex two = morse::build_cubical(from_strings({"##"}));
  CHECK(two.vertices().size() == 6);
  CHECK(two.edges().size() == 7);
  CHECK(two.squares().size() == 2);

  const morse::CubicalComplex empty = morse::build_cubical(BinaryImage(4, 4));
  CHECK(empty.vertices().empty());
  const morse::TruncatedComplex te = morse::boundary_matrices(empty);
  CHECK(te.c0() == 0);
  CHECK(te.c1() == 0);
  CHECK(te.c2() == 0);
}

TEST_CASE("cubical complexes of random images match the oracles") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const BinaryImage img = morse::generate_image(1 + seed % 13, 1 + seed % 7, 0.1 + 0.02 * seed,
                                                  seed);
    const morse::CubicalComplex k = morse::build_cubical(img);
    const auto counts = oracle::cell_counts(img);
    CHECK(k.vertices().size() == counts[0]);
    CHECK(k.edges().size() == counts[1]);
    CHECK(k.squares().size() == counts[2]);
    const morse::TruncatedComplex t = morse::boundary_matrices(k);
    CHECK(t.valid());
    // Every edge has two endpoints and every square four sides.
    for (std::size_t j = 0; j < t.c1(); ++j) {
      std::size_t ones = 0;
      for (std::size_t i = 0; i < t.c0(); ++i) ones += t.d1.get(i, j);
      CHECK(ones == 2);
    }
    const auto b = oracle::betti(t.d1, t.d2);
    CHECK(b[0] == oracle::components(img));
    CHECK(b[2] == 0);
    CHECK(morse::count_components(img) == oracle::components(img));
  }
}

TEST_CASE("components use 8-connectivity") {
  CHECK(morse::count_components(from_strings({"#.", ".#"})) == 1);
  CHECK(morse::count_components(from_strings({"#..#", "....", "#..#"})) == 4);
  CHECK(morse::count_components(from_strings({"##...", "##...", "....#"})) == 2);
  CHECK(morse::count_components(BinaryImage(0, 0)) == 0);
}
