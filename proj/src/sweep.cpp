#include "acm/sweep.hpp"

#include <atomic>
#include <chrono>
#include <ostream>
#include <thread>

#include "acm/ensembles.hpp"
#include "acm/indices.hpp"
#include "acm/matrix_io.hpp"
#include "acm/rng.hpp"

namespace acm {

std::pair<StructuredMatrix, StructuredMatrix>
sweep_trial_pair(int dim, StructureKind kind, double target_delta,
                 std::uint64_t seed, double* measured_delta) {
  EnsembleSpec es{dim, kind, 0.0, seed};
  auto [U0, V0] = commuting_pair(es);
  const std::uint64_t su = split_seed(seed, 1);
  const std::uint64_t sv = split_seed(seed, 2);
  auto measured = [&](double eta) {
    return commutator_norm(perturb(U0, eta, su).entries,
                           perturb(V0, eta, sv).entries);
  };
  // Bisect the perturbation amplitude toward 0.75 * target; the commutator
  // scale is monotone in the amplitude at these scales.
  double lo = 0.0, hi = 0.5;
  double eta = hi;
  if (measured(hi) >= 0.75 * target_delta) {
    for (int it = 0; it < 60; ++it) {
      eta = 0.5 * (lo + hi);
      if (measured(eta) < 0.75 * target_delta)
        lo = eta;
      else
        hi = eta;
    }
  }
  auto U = perturb(U0, eta, su);
  auto V = perturb(V0, eta, sv);
  if (measured_delta) *measured_delta = commutator_norm(U.entries, V.entries);
  return {U, V};
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, unsigned threads) {
  if (spec.trials < 1) throw Error("run_sweep: trials must be >= 1");
  for (double d : spec.deltas)
    if (d <= 0.0) throw Error("run_sweep: deltas must be strictly positive");

  struct Cell {
    int dim;
    StructureKind kind;
    double delta;
    int trial;
  };
  std::vector<Cell> cells;
  for (int dim : spec.dims)
    for (StructureKind kind : spec.kinds)
      for (double delta : spec.deltas)
        for (int t = 0; t < spec.trials; ++t) cells.push_back({dim, kind, delta, t});

  std::vector<SweepRecord> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& c = cells[i];
      SweepRecord& r = rows[i];
      r.dim = c.dim;
      r.kind = c.kind;
      r.target_delta = c.delta;
      r.seed = split_seed(spec.base_seed, i);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        auto [U, V] = sweep_trial_pair(c.dim, c.kind, c.delta, r.seed,
                                       &r.measured_delta);
        SolveParams params;
        params.delta_max = std::max(0.3, 2.0 * c.delta);
        auto sol = commuting_approximation(U, V, params);
        r.epsilon = sol.epsilon;
        r.residual = sol.residual;
        r.status = sol.status;
        const auto w = bott_winding(U.entries, V.entries);
        r.winding = w.winding;
        r.trace_log = bott_trace_log(U.entries, V.entries);
      } catch (const Error&) {
        r.status = SolveStatus::Failed;
      }
      const auto t1 = std::chrono::steady_clock::now();
      r.wall_time_ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    }
  };

  unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
  nthreads = std::max(1u, std::min<unsigned>(nthreads, cells.size() ? cells.size() : 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& rows,
                     bool include_timing) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.dim << ',' << kind_name(r.kind) << ','
       << format_double(r.target_delta) << ',' << format_double(r.measured_delta)
       << ',' << format_double(r.epsilon) << ',' << format_double(r.residual)
       << ',' << status_name(r.status) << ',' << r.winding << ','
       << format_double(r.trace_log) << ',' << r.seed << ','
       << (include_timing ? r.wall_time_ms : 0) << '\n';
  }
}

} // namespace acm
