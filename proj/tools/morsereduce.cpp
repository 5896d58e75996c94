// morsereduce: homology of binary images through discrete Morse reduction.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "morse/chain_complex.hpp"
#include "morse/errors.hpp"
#include "morse/gf2_matrix.hpp"
#include "morse/image_complex.hpp"
#include "morse/pipeline.hpp"
#include "morse/report.hpp"
#include "morse/vector_field.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

void write_matrix_to(const std::string& path, const morse::Gf2Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  morse::write_matrix(out, m);
}

int cmd_homology(const std::string& path, int threshold, bool no_reduce, bool fast) {
  const morse::BinaryImage img = morse::read_image_file(path, threshold);
  const morse::PipelineReport report = morse::homology_report(img, {!no_reduce, fast});
  std::cout << morse::to_json(report) << '\n';
  return report.passed() ? kOk : kVerifyFailed;
}

int cmd_reduce(const std::string& d1_path, const std::string& d2_path, const std::string& out_d1,
               const std::string& out_d2) {
  const morse::TruncatedComplex t{morse::read_matrix_file(d1_path),
                                  morse::read_matrix_file(d2_path)};
  const morse::PipelineResult r = morse::reduce_complex(t);
  if (out_d1.empty()) {
    morse::write_matrix(std::cout, r.reduced.d1);
  } else {
    write_matrix_to(out_d1, r.reduced.d1);
  }
  if (out_d2.empty()) {
    morse::write_matrix(std::cout, r.reduced.d2);
  } else {
    write_matrix_to(out_d2, r.reduced.d2);
  }
  if (!r.checks.passed()) {
    std::cerr << r.report.summary();
    return kVerifyFailed;
  }
  return kOk;
}

int cmd_dvf(const std::string& path) {
  const morse::Gf2Matrix m = morse::read_matrix_file(path);
  morse::write_vector_field(std::cout, morse::sort_by_lambda(morse::rs_algorithm(m)));
  return kOk;
}

struct BatchArgs {
  std::vector<std::size_t> size;
  double density = 0.5;
  std::uint64_t seed = 0;
};

int cmd_verify(const std::string& path, int threshold, std::size_t random, const BatchArgs& b) {
  morse::VerifyTally tally;
  if (!path.empty()) {
    const morse::BinaryImage img = morse::read_image_file(path, threshold);
    tally = morse::verify_batch(1, [&](std::size_t) { return img; }, 1);
  } else {
    tally = morse::verify_batch(
        random,
        [&](std::size_t i) {
          return morse::generate_image(b.size[0], b.size[1], b.density,
                                       morse::instance_seed(b.seed, i));
        },
        morse::batch_threads());
  }
  morse::print_tally(std::cout, tally);
  return tally.ok() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homology of binary images via discrete Morse reduction over GF(2)"};
  app.require_subcommand(1);

  int threshold = morse::kDefaultThreshold;
  std::string image_path;

  auto* homology = app.add_subcommand("homology", "Betti numbers of a PBM/PGM image as JSON");
  bool no_reduce = false;
  bool fast = false;
  homology->add_option("image", image_path, "Netpbm image (P1, P2, P4, P5)")->required();
  homology->add_option("--threshold", threshold, "PGM foreground threshold (0-256)")
      ->check(CLI::Range(0, 256));
  homology->add_flag("--no-reduce", no_reduce, "Compute betti numbers on the original matrices");
  homology->add_flag("--fast", fast, "Skip reduction axioms and the perturbation cross-check");

  auto* reduce = app.add_subcommand("reduce", "Reduce a pair of boundary matrices D1, D2");
  std::string d1_path;
  std::string d2_path;
  std::string out_d1;
  std::string out_d2;
  reduce->add_option("d1", d1_path, "D1 in the dense matrix format")->required();
  reduce->add_option("d2", d2_path, "D2 in the dense matrix format")->required();
  reduce->add_option("--out-d1", out_d1, "Write the reduced D1 here instead of stdout");
  reduce->add_option("--out-d2", out_d2, "Write the reduced D2 here instead of stdout");

  auto* dvf = app.add_subcommand("dvf", "Sorted admissible vector field of a matrix");
  std::string matrix_path;
  dvf->add_option("matrix", matrix_path, "Matrix in the dense matrix format")->required();

  BatchArgs batch;
  auto* verify = app.add_subcommand("verify", "Run every invariant check on one or more images");
  std::size_t random = 0;
  auto* verify_image = verify->add_option("image", image_path, "Netpbm image");
  auto* verify_random = verify->add_option("--random", random, "Number of random images");
  verify->add_option("--threshold", threshold, "PGM foreground threshold")
      ->check(CLI::Range(0, 256));
  verify->add_option("--size", batch.size, "Width and height")->expected(2);
  verify->add_option("--density", batch.density, "Foreground density")->check(CLI::Range(0.0, 1.0));
  verify->add_option("--seed", batch.seed, "Base seed");
  verify_image->excludes(verify_random);

  auto* bench = app.add_subcommand("bench", "Time the pipeline on random images (CSV)");
  std::size_t trials = 1;
  bool bench_fast = false;
  bench->add_option("--size", batch.size, "Width and height")->expected(2)->required();
  bench->add_option("--density", batch.density, "Foreground density")->check(CLI::Range(0.0, 1.0));
  bench->add_option("--trials", trials, "Number of trials");
  bench->add_option("--seed", batch.seed, "Base seed");
  bench->add_flag("--fast", bench_fast, "Skip the verification battery");

  auto* generate = app.add_subcommand("generate", "Write a random image as plain PBM");
  std::string out_path;
  generate->add_option("--size", batch.size, "Width and height")->expected(2)->required();
  generate->add_option("--density", batch.density, "Foreground density")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", batch.seed, "Seed");
  generate->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*homology) return cmd_homology(image_path, threshold, no_reduce, fast);
    if (*reduce) return cmd_reduce(d1_path, d2_path, out_d1, out_d2);
    if (*dvf) return cmd_dvf(matrix_path);
    if (*verify) {
      if (image_path.empty() && (random == 0 && !*verify_random)) {
        std::cerr << "verify: give an image or --random N\n";
        return kUsage;
      }
      if (image_path.empty() && batch.size.size() != 2) {
        std::cerr << "verify: --random needs --size W H\n";
        return kUsage;
      }
      return cmd_verify(image_path, threshold, random, batch);
    }
    if (*bench) {
      morse::BenchOptions o{batch.size[0], batch.size[1], batch.density, trials, batch.seed,
                            bench_fast};
      return morse::run_bench(std::cout, o, morse::batch_threads()) ? kOk : kVerifyFailed;
    }
    if (*generate) {
      const morse::BinaryImage img =
          morse::generate_image(batch.size[0], batch.size[1], batch.density, batch.seed);
      if (out_path.empty()) {
        morse::write_pbm(std::cout, img);
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        morse::write_pbm(out, img);
      }
      return kOk;
    }
  } catch (const morse::ParseError& e) {
    std::cerr << "morsereduce: " << e.what() << '\n';
    return kUsage;
  } catch (const morse::DimensionMismatch& e) {
    std::cerr << "morsereduce: " << e.what() << '\n';
    return kUsage;
  } catch (const morse::BoundaryViolation& e) {
    std::cerr << "morsereduce: input is not a chain complex: " << e.what() << '\n';
    return kUsage;
  } catch (const morse::Error& e) {
    // Anything else from the library is a failed internal assertion.
    std::cerr << "morsereduce: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "morsereduce: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
