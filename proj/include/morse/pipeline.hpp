#pragma once

#include <cstddef>
#include <optional>

#include "morse/chain_complex.hpp"
#include "morse/image_complex.hpp"
#include "morse/morse_reduction.hpp"
#include "morse/vector_field.hpp"
#include "morse/verification.hpp"

namespace morse {

struct PipelineOptions {
  /// Check the reduction axioms, the nilpotency property and betti equality.
  bool verify = true;
  /// Rebuild the reduction through the perturbation lemma and compare. Only
  /// consulted when `verify` is set.
  bool bpl_cross_check = true;
};

/// Summary verdicts. std::nullopt means the check was not run.
struct PipelineChecks {
  std::optional<bool> dvf;
  std::optional<bool> triangular;
  std::optional<bool> boundary;
  std::optional<bool> reduction_axioms;
  std::optional<bool> bpl_match;
  std::optional<bool> nilpotency;

  /// No check that ran has failed.
  bool passed() const noexcept;
};

/// Wall-clock milliseconds per stage.
struct PipelineTimings {
  double complex = 0;
  double dvf = 0;
  double reorder = 0;
  double reduce = 0;
  double betti = 0;
  double verify = 0;
  double bpl = 0;
  double total = 0;
};

struct PipelineResult {
  TruncatedComplex original;
  DiscreteVectorField vf;  // sorted by lambda
  ReorderedComplex reordered;
  TruncatedComplex reduced;
  ReductionTriple reduction;  // reordered complex -> reduced complex
  BettiVector betti_original;
  BettiVector betti_reduced;
  std::optional<std::size_t> components;  // set for image input
  PipelineChecks checks;
  VerificationReport report;  // every individual check behind `checks`
  PipelineTimings timings;
};

/// Vector field, reordering, hexagonal reduction and both betti vectors. The
/// triangularity of the pivot block is asserted by reorder.
PipelineResult compute_reduction(const TruncatedComplex& t);

/// Runs the invariant battery on a computed result and fills `checks` and
/// `report`. Results can be altered between compute and verify, which is how
/// the failure paths are exercised.
void verify_result(PipelineResult& result, const PipelineOptions& options = {});

/// compute_reduction followed by verify_result.
PipelineResult reduce_complex(const TruncatedComplex& t, const PipelineOptions& options = {});

/// Image -> cubical complex -> reduction -> homology, with component count.
/// For images the battery also requires betti_0 = components and betti_2 = 0.
PipelineResult reduce_pipeline(const BinaryImage& img, const PipelineOptions& options = {});

}  // namespace morse
