// Command-line harness: Bott index computations, single structured solves,
// ensemble generation and epsilon-delta sweep experiments over flat files.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

#include "acm/ensembles.hpp"
#include "acm/indices.hpp"
#include "acm/matrix_io.hpp"
#include "acm/rng.hpp"
#include "acm/solvers.hpp"
#include "acm/sweep.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;      // parse / structure violation / IO
constexpr int kExitDegenerate = 2; // degenerate or inadmissible index path
constexpr int kExitNotConverged = 3;

int cmd_index(const std::string& input) {
  std::vector<acm::Matrix> mats;
  try {
    mats = acm::read_matrices_file(input);
    if (mats.size() != 2 || mats[0].rows() != mats[1].rows())
      throw acm::ParseError("index expects two square matrices of equal dimension");
  } catch (const acm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  try {
    const acm::BottReport rep = acm::bott_report(mats[0], mats[1]);
    json out{{"winding", rep.winding},
             {"trace_log", rep.trace_log},
             {"k_class", rep.k_class},
             {"commutator", rep.commutator},
             {"path_min_abs_det", rep.path_min_abs_det},
             {"samples_used", rep.samples_used}};
    std::cout << out.dump() << '\n';
    return kExitOk;
  } catch (const acm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  }
}

int cmd_solve(const std::string& input, const std::string& kind_name,
              const std::string& out_path) {
  try {
    const acm::StructureKind kind = acm::kind_from_name(kind_name);
    const auto mats = acm::read_matrices_file(input);
    acm::ApproximationResult res;
    if (kind == acm::StructureKind::RealOrthogonal ||
        kind == acm::StructureKind::SymplecticUnitary) {
      if (mats.size() != 2)
        throw acm::ParseError("solve with this kind expects a matrix pair file");
      res = acm::commuting_approximation(
          acm::make_structured(mats[0], kind), acm::make_structured(mats[1], kind));
    } else if (kind == acm::StructureKind::RealContraction ||
               kind == acm::StructureKind::QuaternionicContraction) {
      if (mats.size() != 1)
        throw acm::ParseError("solve with this kind expects a single-matrix file");
      res = acm::nearest_normal(acm::make_structured(mats[0], kind));
    } else {
      std::cerr << "error: unsupported kind for solve: " << kind_name << '\n';
      return kExitError;
    }
    if (!out_path.empty()) {
      if (res.outputs.size() == 2)
        acm::write_pair_file(out_path, res.outputs[0].entries, res.outputs[1].entries);
      else
        acm::write_matrix_file(out_path, res.outputs[0].entries);
    }
    json out{{"epsilon", res.epsilon},
             {"residual", res.residual},
             {"status", acm::status_name(res.status)},
             {"iterations", res.iterations}};
    std::cout << out.dump() << '\n';
    return res.status == acm::SolveStatus::Converged ? kExitOk : kExitNotConverged;
  } catch (const acm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_gen(const std::string& kind_name, int dim, std::uint64_t seed, double eta,
            double delta, const std::string& out_path) {
  try {
    if (kind_name == "voiculescu") {
      auto [U, V] = acm::voiculescu_pair(dim);
      acm::write_pair_file(out_path, U, V);
      return kExitOk;
    }
    const acm::StructureKind kind = acm::kind_from_name(kind_name);
    if (kind == acm::StructureKind::RealContraction ||
        kind == acm::StructureKind::QuaternionicContraction) {
      auto X = acm::almost_normal(dim, delta, kind, seed);
      acm::write_matrix_file(out_path, X.entries);
      return kExitOk;
    }
    acm::EnsembleSpec spec{dim, kind, eta, seed};
    auto [U, V] = acm::commuting_pair(spec);
    if (eta > 0.0) {
      U = acm::perturb(U, eta, acm::split_seed(seed, 1));
      V = acm::perturb(V, eta, acm::split_seed(seed, 2));
    }
    acm::write_pair_file(out_path, U.entries, V.entries);
    return kExitOk;
  } catch (const acm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_sweep(const std::string& spec_path, const std::string& out_override,
              bool no_timing) {
  acm::SweepSpec spec;
  try {
    std::ifstream is(spec_path);
    if (!is) throw acm::Error("cannot open sweep spec: " + spec_path);
    const json j = json::parse(is);
    spec.dims = j.at("dims").get<std::vector<int>>();
    for (const auto& k : j.at("kinds"))
      spec.kinds.push_back(acm::kind_from_name(k.get<std::string>()));
    spec.deltas = j.at("deltas").get<std::vector<double>>();
    spec.trials = j.value("trials", 1);
    spec.base_seed = j.value("base_seed", std::uint64_t{0});
    spec.output_path = j.value("output_path", std::string{});
    if (!out_override.empty()) spec.output_path = out_override;
    if (spec.output_path.empty()) throw acm::Error("sweep needs an output path");
  } catch (const json::exception& e) {
    std::cerr << "error: bad sweep spec: " << e.what() << '\n';
    return kExitError;
  } catch (const acm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    const auto rows = acm::run_sweep(spec);
    std::ofstream os(spec.output_path);
    if (!os) throw acm::Error("cannot open for writing: " + spec.output_path);
    acm::write_sweep_csv(os, rows, !no_timing);

    // Per-cell summary: median/max epsilon and convergence rate.
    std::map<std::tuple<int, std::string, double>, std::vector<const acm::SweepRecord*>>
        cells;
    for (const auto& r : rows)
      cells[{r.dim, acm::kind_name(r.kind), r.target_delta}].push_back(&r);
    json summary = json::array();
    for (const auto& [key, recs] : cells) {
      std::vector<double> eps;
      int converged = 0;
      for (const auto* r : recs) {
        if (r->status == acm::SolveStatus::Converged) {
          ++converged;
          eps.push_back(r->epsilon);
        }
      }
      double median = 0.0, maxeps = 0.0;
      if (!eps.empty()) {
        std::sort(eps.begin(), eps.end());
        median = eps[eps.size() / 2];
        maxeps = eps.back();
      }
      summary.push_back({{"dim", std::get<0>(key)},
                         {"kind", std::get<1>(key)},
                         {"target_delta", std::get<2>(key)},
                         {"trials", recs.size()},
                         {"convergence_rate",
                          static_cast<double>(converged) / recs.size()},
                         {"median_epsilon", median},
                         {"max_epsilon", maxeps}});
    }
    std::cout << json{{"cells", summary}, {"csv", spec.output_path}}.dump() << '\n';
    return kExitOk;
  } catch (const acm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"almost-commuting structured matrix lab"};
  app.require_subcommand(1);

  std::string input, kind, out_path;
  std::uint64_t seed = 0;
  int dim = 4;
  double eta = 0.0, delta = 0.0;
  bool json_flag = false, no_timing = false;

  auto* index = app.add_subcommand("index", "Bott index of a matrix pair file");
  index->add_option("input", input, "matrix-pair file")->required();
  index->add_flag("--json", json_flag, "emit JSON (default)");

  auto* solve = app.add_subcommand("solve", "repair a pair or matrix to exact structure");
  solve->add_option("input", input, "matrix-pair or single-matrix file")->required();
  solve->add_option("--kind", kind, "structure kind")->required();
  solve->add_option("--out", out_path, "write repaired matrices here");
  solve->add_flag("--json", json_flag, "emit JSON (default)");

  auto* gen = app.add_subcommand("gen", "generate a seeded ensemble to file");
  gen->add_option("--kind", kind,
                  "structure kind, or 'voiculescu' for the clock/shift pair")
      ->required();
  gen->add_option("--dim", dim, "matrix dimension")->required();
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--eta", eta, "perturbation scale for pair kinds");
  gen->add_option("--delta", delta, "self-commutator target for contraction kinds");
  gen->add_option("--out", out_path, "output file")->required();

  auto* sweep = app.add_subcommand("sweep", "run an epsilon-delta sweep grid");
  sweep->add_option("spec", input, "sweep spec JSON file")->required();
  sweep->add_option("--out", out_path, "override the spec's output path");
  sweep->add_flag("--no-timing", no_timing,
                  "zero the wall_time_ms column for byte-stable output");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(index)) return cmd_index(input);
  if (app.got_subcommand(solve)) return cmd_solve(input, kind, out_path);
  if (app.got_subcommand(gen)) return cmd_gen(kind, dim, seed, eta, delta, out_path);
  if (app.got_subcommand(sweep)) return cmd_sweep(input, out_path, no_timing);
  return kExitError;
}
