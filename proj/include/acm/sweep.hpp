#ifndef ACM_SWEEP_HPP
#define ACM_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "acm/solvers.hpp"
#include "acm/structures.hpp"

// Epsilon-delta sweep experiments: perturb seeded commuting pairs to a
// target commutator scale, repair them, and tabulate the achieved distance.
namespace acm {

struct SweepSpec {
  std::vector<int> dims;
  std::vector<StructureKind> kinds; // RealOrthogonal / SymplecticUnitary
  std::vector<double> deltas;       // strictly positive, sorted descending
  int trials = 1;
  std::uint64_t base_seed = 0;
  std::string output_path;
};

struct SweepRecord {
  int dim = 0;
  StructureKind kind = StructureKind::RealOrthogonal;
  double target_delta = 0.0;
  double measured_delta = 0.0;
  double epsilon = 0.0;
  double residual = 0.0;
  SolveStatus status = SolveStatus::Failed;
  int winding = 0;
  double trace_log = 0.0;
  std::uint64_t seed = 0;
  std::int64_t wall_time_ms = 0;
};

// One almost-commuting pair with measured commutator steered into
// [target/2, target] by bisection on the perturbation amplitude.
std::pair<StructuredMatrix, StructuredMatrix>
sweep_trial_pair(int dim, StructureKind kind, double target_delta,
                 std::uint64_t seed, double* measured_delta = nullptr);

// Rows in deterministic (dim, kind, delta, trial) order; trials run on a
// work pool with per-trial derived seeds (split_seed over the trial index).
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, unsigned threads = 0);

inline constexpr const char* kSweepCsvHeader =
    "dim,kind,target_delta,measured_delta,epsilon,residual,status,winding,"
    "trace_log,seed,wall_time_ms";

// include_timing=false zeroes the wall_time_ms column so that repeated runs
// produce byte-identical files.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& rows,
                     bool include_timing = true);

} // namespace acm

#endif
