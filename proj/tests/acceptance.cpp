// Acceptance battery. Prints one PASS/FAIL line per criterion together with
// the measured time and its budget; exits nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "morse/chain_complex.hpp"
#include "morse/errors.hpp"
#include "morse/gf2_matrix.hpp"
#include "morse/image_complex.hpp"
#include "morse/morse_reduction.hpp"
#include "morse/perturbation.hpp"
#include "morse/pipeline.hpp"
#include "morse/random.hpp"
#include "morse/vector_field.hpp"
#include "oracle.hpp"

namespace {

constexpr double kHomologyBudgetS = 120.0;
constexpr double kDvfBudgetS = 60.0;
constexpr double kBplBudgetS = 120.0;
constexpr double kScaleBudgetMs = 5000.0;
constexpr double kScaleBettiBudgetMs = 500.0;

constexpr std::size_t kRandomImages = 500;
constexpr std::size_t kRandomMatrices = 500;
constexpr std::size_t kBplImages = 200;
constexpr std::size_t kKernelChecks = 1000;
constexpr std::size_t kScaleImages = 5;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  std::string detail;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
};

bool report(const Criterion& c) {
  const bool ok = c.failures == 0 && c.cases > 0;
  std::printf("%s  %-26s %zu cases, %zu failed; %s\n", ok ? "PASS" : "FAIL", c.name.c_str(),
              c.cases, c.failures, c.detail.c_str());
  if (!ok && !c.first_failure.empty()) std::printf("      first failure: %s\n", c.first_failure.c_str());
  std::fflush(stdout);
  return ok;
}

std::string budget_text(double used, double budget, const char* unit) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.2f %s (budget %.0f %s)", used, unit, budget, unit);
  return buf;
}

// Euler characteristic and component count determine the homology of a
// planar cubical complex: β0 = components, β2 = 0, β1 = β0 - χ.
std::array<std::size_t, 3> planar_betti(const morse::BinaryImage& img) {
  const auto cells = oracle::cell_counts(img);
  const std::size_t b0 = oracle::components(img);
  const std::size_t b1 = b0 + cells[1] - cells[0] - cells[2];
  return {b0, b1, 0};
}

struct ImageCase {
  std::string label;
  morse::BinaryImage img;
};

std::vector<ImageCase> homology_corpus() {
  std::vector<ImageCase> out;
  morse::Rng rng(20240611);
  for (std::size_t i = 0; i < kRandomImages; ++i) {
    const std::size_t w = morse::uniform_between(rng, 8, 64);
    const std::size_t h = morse::uniform_between(rng, 8, 64);
    const double density = 0.1 + 0.8 * morse::unit_uniform(rng);
    const std::uint64_t seed = rng();
    out.push_back({"random " + std::to_string(i) + " (" + std::to_string(w) + "x" +
                       std::to_string(h) + ")",
                   morse::generate_image(w, h, density, seed)});
  }
  for (unsigned bits = 0; bits < (1U << 16); ++bits) {
    morse::BinaryImage img(4, 4);
    for (unsigned k = 0; k < 16; ++k) img.set(k / 4, k % 4, (bits >> k) & 1U);
    out.push_back({"4x4 #" + std::to_string(bits), std::move(img)});
  }
  return out;
}

void homology_and_axioms(Criterion& homology, Criterion& axioms) {
  const std::vector<ImageCase> corpus = homology_corpus();
  double homology_s = 0;
  double axioms_s = 0;
  for (const ImageCase& c : corpus) {
    try {
      Clock::time_point start = Clock::now();
      const morse::TruncatedComplex t = morse::boundary_matrices(morse::build_cubical(c.img));
      const morse::PipelineResult r = morse::compute_reduction(t);
      const auto expected = planar_betti(c.img);
      bool ok = r.betti_original.values ==
                    std::vector<std::size_t>(expected.begin(), expected.end()) &&
                r.betti_reduced == r.betti_original &&
                r.betti_reduced[0] == morse::count_components(c.img) && r.betti_reduced[2] == 0;
      // Small complexes also get a direct rank computation of both sides.
      if (ok && t.c1() <= 64) {
        ok = oracle::betti(t.d1, t.d2) == expected &&
             oracle::betti(r.reduced.d1, r.reduced.d2) == expected;
      }
      homology_s += seconds_since(start);
      homology.check(ok, c.label);

      start = Clock::now();
      const morse::VerificationReport v = morse::verify_reduction(r.reduction);
      const bool chain = morse::verify_reduction(morse::reduction_on_original(r.reordered, r.reduction))
                             .passed();
      axioms_s += seconds_since(start);
      axioms.check(v.passed() && chain, c.label + ": " + v.summary());
    } catch (const std::exception& e) {
      homology.check(false, c.label + ": " + e.what());
      axioms.check(false, c.label + ": " + e.what());
    }
  }
  homology.check(homology_s < kHomologyBudgetS, "time budget exceeded");
  homology.detail = budget_text(homology_s, kHomologyBudgetS, "s");
  axioms.detail = "exact GF(2) identities, " + budget_text(axioms_s, kHomologyBudgetS, "s");
}

void dvf_correctness(Criterion& c) {
  std::vector<std::pair<std::string, morse::Gf2Matrix>> corpus;
  morse::Rng rng(77001);
  for (std::size_t i = 0; i < kRandomMatrices; ++i) {
    const std::size_t rows = morse::uniform_between(rng, 1, 100);
    const std::size_t cols = morse::uniform_between(rng, 1, 100);
    const double density = morse::unit_uniform(rng);
    corpus.emplace_back("random " + std::to_string(i),
                        morse::Gf2Matrix::random(rows, cols, rng, density));
  }
  for (unsigned bits = 0; bits < 512; ++bits) {
    morse::Gf2Matrix m(3, 3);
    for (unsigned k = 0; k < 9; ++k) m.set(k / 3, k % 3, (bits >> k) & 1U);
    corpus.emplace_back("3x3 #" + std::to_string(bits), std::move(m));
  }

  const Clock::time_point start = Clock::now();
  for (const auto& [label, m] : corpus) {
    try {
      const morse::DiscreteVectorField vf = morse::rs_algorithm(m);
      const morse::VerificationReport admissible = morse::check_admissible(m, vf);
      const morse::ReorderedComplex rc =
          morse::reorder({m, morse::Gf2Matrix(m.cols(), 0)}, morse::sort_by_lambda(vf));
      const bool ok = admissible.passed() && rc.nv == vf.size() &&
                      morse::is_lower_unitriangular(rc.pivot) &&
                      morse::pow(rc.pivot + morse::Gf2Matrix::identity(rc.nv), rc.nv).is_zero();
      c.check(ok, label + ": " + admissible.summary());
    } catch (const std::exception& e) {
      c.check(false, label + ": " + e.what());
    }
  }
  const double used = seconds_since(start);
  c.check(used < kDvfBudgetS, "time budget exceeded");
  c.detail = budget_text(used, kDvfBudgetS, "s");
}

void bpl_machinery(Criterion& c) {
  morse::Rng rng(31337);
  const Clock::time_point start = Clock::now();
  for (std::size_t i = 0; i < kBplImages; ++i) {
    const std::size_t w = morse::uniform_between(rng, 1, 32);
    const std::size_t h = morse::uniform_between(rng, 1, 32);
    const double density = 0.1 + 0.8 * morse::unit_uniform(rng);
    const morse::BinaryImage img = morse::generate_image(w, h, density, rng());
    const std::string label = "image " + std::to_string(i);
    try {
      const morse::TruncatedComplex t = morse::boundary_matrices(morse::build_cubical(img));
      const morse::PipelineResult r = morse::compute_reduction(t);

      // decompose throws unless every mandated block vanishes.
      const morse::Decomposition dec = morse::decompose(r.reduction);
      c.check(dec.at(1).a == r.reordered.nv, label + ": A_1 differs from nv");

      const morse::ReductionTriple same =
          morse::bpl(r.reduction, morse::Perturbation::zero(r.reduction.big()), 1);
      c.check(same == r.reduction, label + ": bpl with zero perturbation changed the input");

      const morse::ReductionTriple via = morse::vf_reduction_via_bpl(r.reordered);
      c.check(morse::to_truncated(via.small()) == r.reduced,
              label + ": small differentials differ from hexagonal_reduce");
    } catch (const std::exception& e) {
      c.check(false, label + ": " + e.what());
    }
  }
  const double used = seconds_since(start);
  c.check(used < kBplBudgetS, "time budget exceeded");
  c.detail = budget_text(used, kBplBudgetS, "s");
}

void scale(Criterion& c) {
  double worst_total = 0;
  double worst_betti = 0;
  std::string shape;
  for (std::size_t i = 0; i < kScaleImages; ++i) {
    const std::string label = "scale image " + std::to_string(i);
    try {
      const morse::BinaryImage img = morse::generate_image(26, 26, 0.9, 1000 + i);
      const morse::PipelineResult r = morse::reduce_pipeline(img);
      c.check(r.checks.passed(), label + ": " + r.report.summary());
      c.check(r.timings.total < kScaleBudgetMs, label + ": pipeline over budget");
      c.check(r.timings.betti < kScaleBettiBudgetMs, label + ": betti over budget");
      worst_total = std::max(worst_total, r.timings.total);
      worst_betti = std::max(worst_betti, r.timings.betti);
      if (i == 0) {
        shape = std::to_string(r.original.c0()) + "x" + std::to_string(r.original.c1()) + " -> " +
                std::to_string(r.reduced.c0()) + "x" + std::to_string(r.reduced.c1());
      }
    } catch (const std::exception& e) {
      c.check(false, label + ": " + e.what());
    }
  }
  c.detail = "D1 " + shape + ", worst pipeline " +
             budget_text(worst_total, kScaleBudgetMs, "ms") + ", worst betti " +
             budget_text(worst_betti, kScaleBettiBudgetMs, "ms");
}

morse::Gf2Matrix random_unit_lower(std::size_t n, morse::Rng& rng) {
  morse::Gf2Matrix l = morse::Gf2Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) l.set(i, j, morse::unit_uniform(rng) < 0.5);
  return l;
}

void gf2_kernel(Criterion& c) {
  morse::Rng rng(4242);
  const Clock::time_point start = Clock::now();
  for (std::size_t i = 0; i < kKernelChecks; ++i) {
    const std::string label = "check " + std::to_string(i);
    try {
      switch (i % 4) {
        case 0: {
          const std::size_t rows = morse::uniform_between(rng, 1, 40);
          const std::size_t cols = morse::uniform_between(rng, 1, 40);
          const morse::Gf2Matrix m =
              morse::Gf2Matrix::random(rows, cols, rng, morse::unit_uniform(rng));
          const morse::Gf2Matrix k = morse::right_kernel_basis(m);
          const std::size_t nullity = cols - oracle::rank(m);
          c.check(k.rows() == cols && k.cols() == nullity && oracle::rank(k) == nullity &&
                      oracle::rank(oracle::multiply(oracle::to_dense(m), oracle::to_dense(k), cols,
                                                    nullity)) == 0,
                  label + ": kernel basis");
          break;
        }
        case 1: {
          const std::size_t n = morse::uniform_between(rng, 1, 30);
          const morse::Gf2Matrix m = morse::Gf2Matrix::random(n, n, rng, 0.5);
          const std::optional<morse::Gf2Matrix> inv = morse::inverse(m);
          const bool invertible = oracle::rank(m) == n;
          bool ok = inv.has_value() == invertible;
          if (ok && inv) {
            const morse::Gf2Matrix id = morse::Gf2Matrix::identity(n);
            ok = morse::mul(m, *inv) == id && morse::mul(*inv, m) == id;
          }
          c.check(ok, label + ": inverse");
          break;
        }
        case 2: {
          const std::size_t n = morse::uniform_between(rng, 1, 30);
          const morse::Gf2Matrix id = morse::Gf2Matrix::identity(n);
          const morse::Gf2Matrix nil = random_unit_lower(n, rng) + id;
          const morse::Gf2Matrix s = morse::nilpotent_series_inverse(nil, n);
          c.check(morse::mul(s, id + nil) == id && morse::mul(id + nil, s) == id &&
                      morse::nilpotency_index(nil).value_or(n + 1) <= n,
                  label + ": series inverse");
          break;
        }
        default: {
          const std::size_t n = morse::uniform_between(rng, 1, 30);
          const morse::Gf2Matrix l = random_unit_lower(n, rng);
          const std::optional<morse::Gf2Matrix> inv = morse::inverse(l);
          c.check(inv.has_value() && morse::inv_unit_lower_triangular(l) == *inv,
                  label + ": triangular inverse");
          break;
        }
      }
    } catch (const std::exception& e) {
      c.check(false, label + ": " + e.what());
    }
  }
  c.detail = "exact, " + budget_text(seconds_since(start), 60, "s");
}

}  // namespace

int main() {
  Criterion homology{"oracle homology"};
  Criterion axioms{"reduction axioms"};
  Criterion dvf{"dvf correctness"};
  Criterion bpl{"bpl machinery"};
  Criterion perf{"scale and performance"};
  Criterion kernel{"gf2 kernel"};

  homology_and_axioms(homology, axioms);
  bool ok = report(homology);
  ok = report(axioms) && ok;
  dvf_correctness(dvf);
  ok = report(dvf) && ok;
  bpl_machinery(bpl);
  ok = report(bpl) && ok;
  scale(perf);
  ok = report(perf) && ok;
  gf2_kernel(kernel);
  ok = report(kernel) && ok;

  std::printf("%s\n", ok ? "ALL PASS" : "SOME CRITERIA FAILED");
  return ok ? 0 : 1;
}
