#include "morse/pipeline.hpp"

#include <chrono>
#include <exception>
#include <string>

#include "morse/perturbation.hpp"

namespace morse {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool same_betti(const BettiVector& a, const BettiVector& b) {
  for (int k = 0; k <= 2; ++k)
    if (a[k] != b[k]) return false;
  return true;
}

// Runs a check that may throw; an exception counts as a failure.
template <typename F>
bool guarded(VerificationReport& report, const char* name, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    report.add(name, false, std::nullopt, e.what());
    return false;
  }
}

}  // namespace

bool PipelineChecks::passed() const noexcept {
  for (const auto& c : {dvf, triangular, boundary, reduction_axioms, bpl_match, nilpotency})
    if (c && !*c) return false;
  return true;
}

PipelineResult compute_reduction(const TruncatedComplex& t) {
  PipelineResult r;
  r.original = t;

  auto start = Clock::now();
  r.vf = sort_by_lambda(rs_algorithm(t.d1));
  r.timings.dvf = ms_since(start);

  start = Clock::now();
  r.reordered = reorder(t, r.vf);
  r.timings.reorder = ms_since(start);

  start = Clock::now();
  HexagonalResult hex = hexagonal_reduce(r.reordered);
  r.reduced = std::move(hex.reduced);
  r.reduction = std::move(hex.reduction);
  r.timings.reduce = ms_since(start);

  start = Clock::now();
  r.betti_original = betti(from_truncated(r.original));
  r.betti_reduced = betti(from_truncated(r.reduced));
  r.timings.betti = ms_since(start);
  return r;
}

void verify_result(PipelineResult& r, const PipelineOptions& options) {
  VerificationReport& rep = r.report;
  rep = VerificationReport{};
  r.checks = PipelineChecks{};
  auto start = Clock::now();

  {
    VerificationReport dvf = check_admissible(r.original.d1, r.vf);
    rep.merge(dvf);
    r.checks.dvf = dvf.passed();
  }

  const std::size_t nv = r.reordered.nv;
  {
    const bool ok = r.reordered.pivot.rows() == nv && is_lower_unitriangular(r.reordered.pivot);
    rep.add("pivot_unit_lower_triangular", ok);
    r.checks.triangular = ok;
  }

  {
    bool ok = true;
    auto boundary = [&](const char* name, const TruncatedComplex& t) {
      const bool pass = t.valid();
      rep.add(name, pass);
      ok = ok && pass;
    };
    boundary("original_d1_d2_zero", r.original);
    boundary("reordered_d1_d2_zero", r.reordered.complex);
    boundary("reduced_d1_d2_zero", r.reduced);
    r.checks.boundary = ok;
  }

  if (options.verify) {
    bool ok = guarded(rep, "reduction_axioms", [&] {
      VerificationReport axioms = verify_reduction(r.reduction);
      rep.merge(axioms);
      bool pass = axioms.passed();
      auto add = [&](const char* name, bool value) {
        rep.add(name, value);
        pass = pass && value;
      };
      add("reduction_big_is_reordered", to_truncated(r.reduction.big()) == r.reordered.complex);
      add("reduction_small_is_reduced", to_truncated(r.reduction.small()) == r.reduced);
      add("betti_preserved", same_betti(r.betti_original, r.betti_reduced));
      add("reduced_d2_is_critical_rows", r.reduced.d2 == r.reordered.d2_bottom);
      add("reduced_d2_is_f1_d2", r.reduced.d2 == mul(r.reduction.f(1), r.reordered.complex.d2));
      add("reduced_dims",
          r.reduced.c0() + nv == r.original.c0() && r.reduced.c1() + nv == r.original.c1() &&
              r.reduced.c2() == r.original.c2());
      add("reorder_restores_original", r.reordered.restore() == r.original);
      if (r.components) {
        add("betti0_is_components", r.betti_original[0] == *r.components);
        add("betti2_is_zero", r.betti_original[2] == 0);
      }
      return pass;
    });
    r.checks.reduction_axioms = ok;

    ok = guarded(rep, "nilpotency", [&] {
      Gf2Matrix strict = r.reordered.pivot + Gf2Matrix::identity(nv);
      const bool strict_zero = pow(strict, nv).is_zero();
      rep.add("pivot_plus_identity_nilpotent", strict_zero);
      return strict_zero;
    });
    r.checks.nilpotency = ok;
  }
  r.timings.verify = ms_since(start);

  if (options.verify && options.bpl_cross_check) {
    start = Clock::now();
    const bool ok = guarded(rep, "bpl_match", [&] {
      bool pass = true;
      auto add = [&](const char* name, bool value, std::string detail = {}) {
        rep.add(name, value, std::nullopt, std::move(detail));
        pass = pass && value;
      };
      const Decomposition dec = decompose(r.reduction);
      add("decomposition_a1_is_nv", dec.at(1).a == nv && dec.at(0).b == nv);

      const ImagePerturbation ip = image_perturbation(r.reordered);
      const std::optional<std::size_t> bound = nilpotency_bound(ip.perturbation, ip.initial);
      add("perturbation_bound_at_most_nv_plus_1", bound && *bound <= nv + 1,
          bound ? "bound " + std::to_string(*bound) + ", nv + 1 = " + std::to_string(nv + 1) +
                      ", nv + 2 = " + std::to_string(nv + 2)
                : "not nilpotent");

      const ReductionTriple via_bpl = bpl(ip.initial, ip.perturbation, nv + 1);
      const VerificationReport axioms = verify_reduction(via_bpl);
      rep.merge(axioms);
      pass = pass && axioms.passed();
      add("bpl_small_matches_hexagonal", to_truncated(via_bpl.small()) == r.reduced);
      return pass;
    });
    r.checks.bpl_match = ok;
    r.timings.bpl = ms_since(start);
  }
}

PipelineResult reduce_complex(const TruncatedComplex& t, const PipelineOptions& options) {
  const auto start = Clock::now();
  PipelineResult r = compute_reduction(t);
  verify_result(r, options);
  r.timings.total = ms_since(start);
  return r;
}

PipelineResult reduce_pipeline(const BinaryImage& img, const PipelineOptions& options) {
  const auto start = Clock::now();
  const TruncatedComplex t = boundary_matrices(build_cubical(img));
  const double complex_ms = ms_since(start);

  PipelineResult r = compute_reduction(t);
  r.timings.complex = complex_ms;
  const auto components_start = Clock::now();
  r.components = count_components(img);
  r.timings.betti += ms_since(components_start);

  verify_result(r, options);
  r.timings.total = ms_since(start);
  return r;
}

}  // namespace morse
