// Command-line front end: feasibility checks, batch sampling, count
// estimation, diagnostics, uniformity experiments, and the exact oracles.
//
// Exit codes: 0 success, 1 infeasible / failed construction / dead end,
// 2 usage or parse error, 3 internal error.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "binmat/dpsampler.hpp"
#include "binmat/enumeration.hpp"
#include "binmat/errors.hpp"
#include "binmat/io.hpp"
#include "binmat/oracle.hpp"
#include "binmat/version.hpp"
#include "binmat/weights.hpp"

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct CommonArgs {
  std::string margins_path;
  std::string mask_path;
  bool zero_diagonal = false;
  std::string heuristic = "cgm";
  int n_samples = 1000;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out_dir;
  bool keep_column_order = false;
};

struct LoadedProblem {
  binmat::MarginPair margins;
  std::optional<binmat::StructuralZeroMask> mask;
  binmat::Heuristic heuristic = binmat::Heuristic::cgm;
};

LoadedProblem load_problem(const CommonArgs& args) {
  LoadedProblem p;
  p.margins = binmat::read_margins_file(args.margins_path);
  if (args.zero_diagonal) {
    p.mask = binmat::StructuralZeroMask::zero_diagonal(p.margins.rows(),
                                                       p.margins.cols());
  } else if (!args.mask_path.empty()) {
    p.mask = binmat::read_mask_file(args.mask_path, p.margins.rows(),
                                    p.margins.cols());
  }
  // With a mask present, upgrade to the corrected variant when one exists.
  binmat::Heuristic h = binmat::parse_heuristic(args.heuristic);
  if (p.mask.has_value() && !p.mask->empty()) h = binmat::masked_variant(h);
  p.heuristic = h;
  return p;
}

const binmat::StructuralZeroMask* mask_ptr(const LoadedProblem& p) {
  return p.mask.has_value() ? &*p.mask : nullptr;
}

binmat::SamplerOptions options_for(const CommonArgs& args) {
  binmat::SamplerOptions opts;
  opts.sort_columns = !args.keep_column_order;
  return opts;
}

void print_header(const CommonArgs& args, const binmat::MarginPair& mp,
                  const LoadedProblem& p, std::ostream& out) {
  out << "# binmat " << binmat::kVersion << '\n';
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, binmat::margins_hash(mp));
  out << "# margins_hash=" << hash << " heuristic="
      << binmat::heuristic_name(p.heuristic) << " seed=" << args.seed
      << " n=" << args.n_samples << " jobs=" << args.jobs << '\n';
}

void print_summary(const binmat::WeightSummary& s, std::ostream& out) {
  char line[256];
  if (std::isinf(s.delta_hat))
    out << "delta_hat=inf\n";
  else {
    std::snprintf(line, sizeof line, "delta_hat=%.6g\n", s.delta_hat);
    out << line;
  }
  std::snprintf(line, sizeof line, "cv2_hat=%.6g\n", s.cv2_hat);
  out << line;
  std::snprintf(line, sizeof line, "log_mean=%.17g\n", s.log_mean);
  out << line;
  out << "mean=" << binmat::format_log_value(s.log_mean) << '\n';
  if (s.log_se == kNegInf)
    out << "se=0\n";
  else
    out << "se=" << binmat::format_log_value(s.log_se) << '\n';
  out << "n_samples=" << s.count() << '\n';
}

int cmd_feasible(const CommonArgs& args) {
  const LoadedProblem p = load_problem(args);
  bool ok;
  if (p.mask.has_value() && !p.mask->empty()) {
    // Feasibility under a mask: try to draw one matrix; a dead end or an
    // infeasibility error both mean no matrix exists (for one-per-row/column
    // masks the support is exact, so this is decisive).
    try {
      binmat::CounterRng rng(args.seed, 0);
      binmat::sample_matrix(p.margins, p.heuristic, mask_ptr(p), rng);
      ok = true;
    } catch (const binmat::infeasible_error&) {
      ok = false;
    } catch (const binmat::no_valid_path_error&) {
      ok = false;
    }
  } else {
    ok = binmat::gale_ryser_feasible(p.margins);
  }
  std::cout << (ok ? "FEASIBLE" : "INFEASIBLE") << '\n';
  return ok ? 0 : 1;
}

int cmd_sample(const CommonArgs& args) {
  if (args.n_samples < 1) throw binmat::error("--n must be at least 1");
  const LoadedProblem p = load_problem(args);
  const binmat::SamplerOptions opts = options_for(args);

  std::filesystem::create_directories(args.out_dir);
  std::ofstream matrices(std::filesystem::path(args.out_dir) / "matrices.txt");
  std::ofstream weights(std::filesystem::path(args.out_dir) / "weights.txt");
  if (!matrices || !weights) throw binmat::error("cannot open output files");
  print_header(args, p.margins, p, matrices);
  print_header(args, p.margins, p, weights);

  // Draw k always uses stream k of the seed, so any job count produces the
  // same output.
  std::vector<binmat::SampledMatrix> draws(args.n_samples);
  auto worker = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      binmat::CounterRng rng(args.seed, static_cast<std::uint64_t>(k));
      draws[k] = binmat::sample_matrix(p.margins, p.heuristic, mask_ptr(p), rng, opts);
    }
  };
  const int jobs = std::max(1, std::min(args.jobs, args.n_samples));
  if (jobs == 1) {
    worker(0, args.n_samples);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    const int chunk = (args.n_samples + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t) {
      const int begin = t * chunk;
      const int end = std::min(args.n_samples, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, t, begin, end] {
        try {
          worker(begin, end);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  char line[64];
  for (int k = 0; k < args.n_samples; ++k) {
    matrices << "# draw " << k << '\n';
    binmat::write_matrix(matrices, draws[k].matrix);
    matrices << '\n';
    std::snprintf(line, sizeof line, "%d %.17g\n", k, draws[k].log_q);
    weights << line;
  }
  std::cout << "wrote " << args.n_samples << " samples to " << args.out_dir << '\n';
  return 0;
}

int cmd_count(const CommonArgs& args, bool diagnose) {
  const LoadedProblem p = load_problem(args);
  const binmat::WeightSummary s =
      binmat::estimate_count(p.margins, p.heuristic, mask_ptr(p),
                             args.n_samples, args.seed, args.jobs,
                             options_for(args));
  print_header(args, p.margins, p, std::cout);
  if (diagnose) {
    std::cout << "uniformity diagnostics: delta_hat is max/min weight, "
                 "cv2_hat the squared coefficient of variation\n";
  } else {
    std::cout << "count estimate (mean importance weight) with standard error\n";
  }
  print_summary(s, std::cout);
  return 0;
}

int cmd_check_uniformity(const CommonArgs& args, const std::string& mode, int L) {
  const LoadedProblem p = load_problem(args);
  if (p.mask.has_value())
    throw binmat::error("uniformity checks do not take a mask");
  print_header(args, p.margins, p, std::cout);

  if (mode == "rowgen") {
    const binmat::DeltaMaxResult res = binmat::delta_max_experiment(
        p.margins.row_sums, p.margins.cols(), L, args.n_samples, p.heuristic,
        args.seed);
    for (std::size_t ell = 0; ell < res.per_replicate.size(); ++ell) {
      std::printf("replicate=%zu delta_hat=%.6g\n", ell, res.per_replicate[ell]);
    }
    std::printf("delta_max=%.6g\n", res.delta_max);
    return 0;
  }

  // Adversarial modes: build the extreme matrix, then compare its weight
  // against a fresh batch of proposal weights.
  binmat::BinaryMatrix zstar;
  if (mode == "block") {
    const int r1 = p.margins.row_sums.empty() ? 0 : p.margins.row_sums[0];
    for (int v : p.margins.row_sums)
      if (v != r1) throw binmat::shape_error("block mode needs regular margins");
    for (int v : p.margins.col_sums)
      if (v != r1) throw binmat::shape_error("block mode needs regular margins");
    zstar = binmat::adversarial_block(p.margins.rows(), p.margins.cols(), r1);
  } else if (mode == "greedy") {
    const auto built = binmat::adversarial_greedy(p.margins);
    if (!built.has_value()) {
      std::cout << "construction-failed\n";
      return 1;
    }
    zstar = *built;
  } else {
    throw binmat::error("unknown mode: " + mode);
  }

  const double log_q_star =
      binmat::eval_matrix(p.margins, p.heuristic, nullptr, zstar);
  const binmat::WeightSummary s =
      binmat::estimate_count(p.margins, p.heuristic, nullptr, args.n_samples,
                             args.seed, args.jobs);
  const double dstar = binmat::delta_star(log_q_star, s.log_weights);
  std::printf("delta_hat_internal=%.6g\n", s.delta_hat);
  std::printf("log_q_star=%.17g\n", log_q_star);
  std::printf("delta_star=%.6g\n", dstar);
  return 0;
}

int cmd_exact_count(const CommonArgs& args) {
  const LoadedProblem p = load_problem(args);
  const binmat::ExactCount count =
      binmat::exact_count_dp(p.margins, mask_ptr(p));
  std::cout << "exact_count=" << count.value.to_string() << '\n';
  std::cout << "exact_count_sci=" << binmat::format_log_value(count.log_value(), 8)
            << '\n';
  std::printf("log_exact_count=%.17g\n", count.log_value());
  return 0;
}

int cmd_enumerate(const CommonArgs& args) {
  const LoadedProblem p = load_problem(args);
  const auto omega = binmat::enumerate_omega(p.margins, mask_ptr(p));
  std::filesystem::create_directories(args.out_dir);
  std::ofstream out(std::filesystem::path(args.out_dir) / "omega.txt");
  if (!out) throw binmat::error("cannot open output file");
  out << "# binmat " << binmat::kVersion << " enumerate count=" << omega.size()
      << '\n';
  for (std::size_t k = 0; k < omega.size(); ++k) {
    out << "# matrix " << k << '\n';
    binmat::write_matrix(out, omega[k]);
    out << '\n';
  }
  std::cout << "count=" << omega.size() << '\n';
  return 0;
}

int cmd_tv_distance(const CommonArgs& args) {
  const LoadedProblem p = load_problem(args);
  const double tv =
      binmat::tv_distance_from_uniform(p.margins, p.heuristic, mask_ptr(p));
  std::printf("tv_distance=%.6g\n", tv);
  return 0;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_margins = true) {
  auto* margins = cmd->add_option("--margins", args.margins_path,
                                  "margins file (m n / row sums / column sums)");
  if (needs_margins) margins->required();
  auto* zeros = cmd->add_option("--zeros", args.mask_path,
                                "file of forced-zero coordinates (1-based 'i j' lines)");
  cmd->add_flag("--zero-diagonal", args.zero_diagonal,
                "force zeros on the main diagonal")
      ->excludes(zeros);
  cmd->add_option("--heuristic", args.heuristic,
                  "probability family: cgm|binomial|gmw|oneil");
  cmd->add_option("--seed", args.seed, "random seed");
  cmd->add_option("--jobs", args.jobs, "parallel sampling threads");
  cmd->add_flag("--keep-column-order", args.keep_column_order,
                "process columns as given instead of by decreasing sum");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximately uniform sampling of binary matrices with fixed margins"};
  app.require_subcommand(1);
  CommonArgs args;
  int L = 10;
  std::string mode = "rowgen";

  auto* feasible = app.add_subcommand("feasible", "check margin feasibility");
  add_common(feasible, args);

  auto* sample = app.add_subcommand("sample", "draw matrices and record weights");
  add_common(sample, args);
  sample->add_option("--n", args.n_samples, "number of draws")->required();
  sample->add_option("--out", args.out_dir, "output directory")->required();

  auto* count = app.add_subcommand("count", "estimate the number of matrices");
  add_common(count, args);
  count->add_option("--n", args.n_samples, "number of draws")->required();

  auto* diagnose = app.add_subcommand("diagnose", "importance-weight diagnostics");
  add_common(diagnose, args);
  diagnose->add_option("--n", args.n_samples, "number of draws")->required();

  auto* check = app.add_subcommand("check-uniformity", "external uniformity checks");
  add_common(check, args);
  check->add_option("--mode", mode, "rowgen|block|greedy");
  check->add_option("--L", L, "number of uniform anchors (rowgen)");
  check->add_option("--n", args.n_samples, "proposal draws per anchor")->required();

  auto* exact = app.add_subcommand("exact-count", "exact matrix count");
  add_common(exact, args);

  auto* enumerate = app.add_subcommand("enumerate", "list every matrix (small instances)");
  add_common(enumerate, args);
  enumerate->add_option("--out", args.out_dir, "output directory")->required();

  auto* tv = app.add_subcommand("tv-distance",
                                "total variation between proposal and uniform");
  add_common(tv, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(feasible)) return cmd_feasible(args);
    if (app.got_subcommand(sample)) return cmd_sample(args);
    if (app.got_subcommand(count)) return cmd_count(args, false);
    if (app.got_subcommand(diagnose)) return cmd_count(args, true);
    if (app.got_subcommand(check)) return cmd_check_uniformity(args, mode, L);
    if (app.got_subcommand(exact)) return cmd_exact_count(args);
    if (app.got_subcommand(enumerate)) return cmd_enumerate(args);
    if (app.got_subcommand(tv)) return cmd_tv_distance(args);
    return 2;
  } catch (const binmat::parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const binmat::infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 1;
  } catch (const binmat::no_valid_path_error& e) {
    std::cerr << "sampling failed: " << e.what() << '\n';
    return 1;
  } catch (const binmat::size_limit_error& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 1;
  } catch (const binmat::budget_error& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 1;
  } catch (const binmat::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
