#include "morse/report.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace morse {

namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

Dims dims_of(const TruncatedComplex& t) { return {t.c0(), t.c1(), t.c2()}; }

std::vector<std::size_t> betti_values(const BettiVector& b) { return {b[0], b[1], b[2]}; }

Json dims_json(const Dims& d) { return Json{{"c0", d.c0}, {"c1", d.c1}, {"c2", d.c2}}; }

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

PipelineReport make_report(const PipelineResult& r) {
  PipelineReport out;
  out.original = dims_of(r.original);
  out.nv = r.reordered.nv;
  out.reduced = dims_of(r.reduced);
  out.betti_original = betti_values(r.betti_original);
  out.betti_reduced = betti_values(r.betti_reduced);
  out.components = r.components;
  out.checks = r.checks;
  out.timings = r.timings;
  return out;
}

PipelineReport homology_report(const BinaryImage& img, const HomologyOptions& options) {
  if (options.reduce) {
    PipelineOptions po;
    po.verify = !options.fast;
    return make_report(reduce_pipeline(img, po));
  }
  const auto start = Clock::now();
  PipelineReport out;
  const TruncatedComplex t = boundary_matrices(build_cubical(img));
  out.timings.complex = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  const auto betti_start = Clock::now();
  out.original = dims_of(t);
  out.betti_original = betti_values(betti(from_truncated(t)));
  out.components = count_components(img);
  out.timings.betti =
      std::chrono::duration<double, std::milli>(Clock::now() - betti_start).count();
  out.checks.boundary = t.valid();
  out.timings.total = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

std::string to_json(const PipelineReport& r, bool with_timings) {
  Json j;
  j["original"] = dims_json(r.original);
  j["nv"] = optional_json(r.nv);
  j["reduced"] = r.reduced ? dims_json(*r.reduced) : Json(nullptr);
  j["betti_original"] = r.betti_original;
  j["betti_reduced"] = optional_json(r.betti_reduced);
  j["components"] = optional_json(r.components);
  j["checks"] = Json{{"dvf", optional_json(r.checks.dvf)},
                     {"triangular", optional_json(r.checks.triangular)},
                     {"boundary", optional_json(r.checks.boundary)},
                     {"reduction_axioms", optional_json(r.checks.reduction_axioms)},
                     {"bpl_match", optional_json(r.checks.bpl_match)},
                     {"nilpotency", optional_json(r.checks.nilpotency)}};
  if (with_timings) {
    // Microsecond resolution keeps the output free of float noise.
    const auto us = [](double ms) { return std::round(ms * 1000.0) / 1000.0; };
    const PipelineTimings& t = r.timings;
    j["timings_ms"] = Json{{"complex", us(t.complex)}, {"dvf", us(t.dvf)},
                           {"reorder", us(t.reorder)}, {"reduce", us(t.reduce)},
                           {"betti", us(t.betti)},     {"verify", us(t.verify)},
                           {"bpl", us(t.bpl)},         {"total", us(t.total)}};
  }
  return j.dump();
}

std::size_t batch_threads() {
  if (const char* env = std::getenv("MORSEREDUCE_THREADS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& task) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t count = std::min(threads, n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

VerifyTally verify_batch(std::size_t n, const std::function<BinaryImage(std::size_t)>& make_image,
                         std::size_t threads, const ResultHook& hook) {
  struct Outcome {
    VerificationReport report;
    std::string error;
  };
  std::vector<Outcome> outcomes(n);
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      const BinaryImage img = make_image(i);
      PipelineResult r = compute_reduction(boundary_matrices(build_cubical(img)));
      r.components = count_components(img);
      if (hook) hook(r);
      verify_result(r, PipelineOptions{});
      outcomes[i].report = std::move(r.report);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  });

  VerifyTally tally;
  tally.instances = n;
  for (std::size_t i = 0; i < n; ++i) {
    const Outcome& o = outcomes[i];
    std::string first_failure;
    if (!o.error.empty()) {
      ++tally.failed["exception"];
      first_failure = o.error;
    }
    for (const Check& c : o.report.checks()) {
      if (c.passed) {
        ++tally.passed[c.name];
      } else {
        ++tally.failed[c.name];
        if (first_failure.empty()) {
          first_failure = c.name + (c.degree ? " at degree " + std::to_string(*c.degree) : "") +
                          (c.detail.empty() ? "" : ": " + c.detail);
        }
      }
    }
    if (!first_failure.empty()) {
      ++tally.failed_instances;
      tally.failures.push_back("instance " + std::to_string(i) + ": " + first_failure);
    }
  }
  return tally;
}

void print_tally(std::ostream& out, const VerifyTally& tally) {
  out << "instances " << tally.instances << ", failed " << tally.failed_instances << '\n';
  std::map<std::string, std::pair<std::size_t, std::size_t>> rows;
  for (const auto& [name, count] : tally.passed) rows[name].first = count;
  for (const auto& [name, count] : tally.failed) rows[name].second = count;
  for (const auto& [name, counts] : rows) {
    out << name << ": " << counts.first << " passed, " << counts.second << " failed\n";
  }
  for (const std::string& line : tally.failures) out << line << '\n';
}

bool run_bench(std::ostream& out, const BenchOptions& options, std::size_t threads) {
  std::vector<std::string> rows(options.trials);
  std::vector<char> ok(options.trials, 1);
  parallel_for(options.trials, threads, [&](std::size_t i) {
    const BinaryImage img = generate_image(options.width, options.height, options.density,
                                           instance_seed(options.seed, i));
    PipelineOptions po;
    po.verify = !options.fast;
    const PipelineResult r = reduce_pipeline(img, po);
    ok[i] = r.checks.passed();
    const PipelineTimings& t = r.timings;
    std::ostringstream row;
    row << i << ',' << r.original.c0() << ',' << r.original.c1() << ',' << r.original.c2() << ','
        << r.reordered.nv << ',' << r.reduced.c0() << ',' << r.reduced.c1() << ','
        << r.reduced.c2() << ',' << t.complex << ',' << t.dvf << ',' << t.reorder << ','
        << t.reduce << ',' << t.betti << ',' << t.verify << ',' << t.bpl << ',' << t.total;
    rows[i] = row.str();
  });
  out << kBenchHeader << '\n';
  for (const std::string& row : rows) out << row << '\n';
  for (char v : ok)
    if (!v) return false;
  return true;
}

}  // namespace morse
