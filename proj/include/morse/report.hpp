#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morse/image_complex.hpp"
#include "morse/pipeline.hpp"

namespace morse {

struct Dims {
  std::size_t c0 = 0;
  std::size_t c1 = 0;
  std::size_t c2 = 0;
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Everything the `homology` command reports. Optional fields are absent when
/// the corresponding stage was skipped and serialize as null.
struct PipelineReport {
  Dims original;
  std::optional<std::size_t> nv;
  std::optional<Dims> reduced;
  std::vector<std::size_t> betti_original;
  std::optional<std::vector<std::size_t>> betti_reduced;
  std::optional<std::size_t> components;
  PipelineChecks checks;
  PipelineTimings timings;

  bool passed() const noexcept { return checks.passed(); }
};

struct HomologyOptions {
  bool reduce = true;  // false: betti straight from the original matrices
  bool fast = false;   // skip the reduction axioms and the perturbation cross-check
};

PipelineReport make_report(const PipelineResult& result);
PipelineReport homology_report(const BinaryImage& img, const HomologyOptions& options = {});

/// Single-line JSON with a fixed key order. Timings are omitted when
/// `with_timings` is false, which makes reports of identical inputs identical.
std::string to_json(const PipelineReport& report, bool with_timings = true);

/// Worker count for batch commands: MORSEREDUCE_THREADS when set to a positive
/// integer, otherwise the hardware concurrency (at least 1).
std::size_t batch_threads();

/// Calls task(i) for every i in [0, n) on up to `threads` workers. Tasks must
/// be independent; the first exception thrown is rethrown after all workers
/// stop.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& task);

/// Seed of batch instance i: the base seed plus i, so `generate --seed S+i`
/// reproduces instance i of a batch seeded with S.
inline std::uint64_t instance_seed(std::uint64_t seed, std::size_t i) { return seed + i; }

/// Counts of passing and failing individual checks over a batch of instances.
struct VerifyTally {
  std::size_t instances = 0;
  std::size_t failed_instances = 0;
  std::map<std::string, std::size_t> passed;
  std::map<std::string, std::size_t> failed;
  /// Instance index -> first failure line, in index order.
  std::vector<std::string> failures;

  bool ok() const noexcept { return failed_instances == 0; }
};

/// Test hook applied to each computed result before verification.
using ResultHook = std::function<void(PipelineResult&)>;

/// Full battery (all checks, perturbation cross-check included) over the
/// images produced by `make_image(i)` for i in [0, n). Output is ordered by
/// instance regardless of scheduling. An exception in an instance counts as
/// a failure of that instance.
VerifyTally verify_batch(std::size_t n, const std::function<BinaryImage(std::size_t)>& make_image,
                         std::size_t threads, const ResultHook& hook = {});

void print_tally(std::ostream& out, const VerifyTally& tally);

struct BenchOptions {
  std::size_t width = 0;
  std::size_t height = 0;
  double density = 0.5;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool fast = false;
};

/// One CSV row per trial after the header; trials run in parallel and are
/// printed in trial order. Returns false if some trial failed verification.
bool run_bench(std::ostream& out, const BenchOptions& options, std::size_t threads);

inline constexpr const char* kBenchHeader =
    "trial,c0,c1,c2,nv,r0,r1,r2,ms_complex,ms_dvf,ms_reorder,ms_reduce,ms_betti,ms_verify,"
    "ms_bpl,ms_total";

}  // namespace morse
