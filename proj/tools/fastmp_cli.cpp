/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fastmp/kernel.hpp"
#include "fastmp/random.hpp"
#include "fastmp/sensing.hpp"
#include "fastmp/solvers.hpp"
#include "fastmp/transform.hpp"
#include "fastmp/verify.hpp"

namespace {

using namespace fastmp;

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string support_to_string(const std::vector<std::size_t>& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
  os << ']';
  return os.str();
}

struct VerifyCmd {
  std::size_t max_n = 64;
  std::uint64_t seed = 1;
  bool corrupt = false;
};

struct SolveCmd {
  std::string kind = "fourier";
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::uint64_t seed = 1;
  double noise = 0.0;
  std::vector<std::string> modes{"conventional", "fast"};
  std::string solver = "omp";
  std::string ls = "qr";
  bool symmetry = false;
  std::size_t iters = 0;    // 0: one iteration per sparsity
  double tol = -1.0;        // <0: 1e-9 * |y|
  std::string out = "solve_out";
  std::string instance_path;  // load instead of generating
};

struct BenchCmd {
  std::string kind = "fourier";
  std::vector<std::size_t> ns;
  std::vector<std::size_t> ms;
  std::size_t k = 4;
  std::string solver = "omp";
  std::size_t tmax = 13;
  std::string out;  // empty: stdout
};

struct EquivCmd {
  std::string kind = "fourier";
  std::string solver = "omp";
  std::size_t n = 256;
  std::size_t m = 64;
  std::size_t k = 5;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double noise = 0.05;
  std::size_t threads = 1;
  bool symmetry = false;
};

int run_verify(const VerifyCmd& cmd) {
  VerifyOptions opts;
  opts.max_n = cmd.max_n;
  opts.seed = cmd.seed;
  opts.corrupt = cmd.corrupt;
  return run_verification(opts, std::cout) ? kExitOk : kExitAssertion;
}

RecoveryResult run_solver(const std::string& solver, const SensingOperator& op,
                          const ProblemInstance& inst, const SolveConfig& cfg) {
  if (solver == "omp") return omp_solve(op, inst.y, cfg);
  if (solver == "cosamp") return cosamp_solve(op, inst.y, inst.k, cfg);
  throw std::invalid_argument("unknown solver: " + solver);
}

int run_solve(const SolveCmd& cmd) {
  ProblemInstance inst;
  if (!cmd.instance_path.empty()) {
    std::ifstream in(cmd.instance_path);
    if (!in) throw std::invalid_argument("cannot open " + cmd.instance_path);
    inst = load_instance(in);
  } else {
    if (cmd.n == 0 || cmd.m == 0)
      throw std::invalid_argument("solve: --n and --m are required");
    const TransformKind kind = parse_kind(cmd.kind);
    const SensingOperator op(
        StructuredUnitary(kind, cmd.n),
        make_row_selection(cmd.n, cmd.m, derive_seed(cmd.seed, 1)));
    inst = make_instance(op, cmd.k, cmd.noise, cmd.seed);
  }
  const SensingOperator op = make_operator(inst);
  std::cout << "instance: kind=" << to_string(inst.kind) << " n=" << inst.n
            << " m=" << inst.m << " k=" << inst.k << " seed=" << inst.seed
            << "\n";

  {
    std::ofstream out(cmd.out + ".instance.txt");
    if (!out) throw std::invalid_argument("cannot write " + cmd.out);
    save_instance(inst, out);
  }
  std::cout << "wrote " << cmd.out << ".instance.txt\n";

  std::vector<std::string> modes = cmd.modes;
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
  for (const std::string& mode_name : modes) {
    SolveConfig cfg = default_config(inst.k, l2_norm(inst.y));
    cfg.correlation_mode = parse_mode(mode_name);
    if (cmd.iters > 0) cfg.max_iterations = cmd.iters;
    if (cmd.tol >= 0.0) cfg.residual_tolerance = cmd.tol;
    cfg.fourier_symmetry = cmd.symmetry;
    cfg.ls_method = (cmd.ls == "normal") ? LeastSquaresMethod::NormalEquations
                                         : LeastSquaresMethod::IncrementalQR;

    const auto t0 = std::chrono::steady_clock::now();
    const RecoveryResult res = run_solver(cmd.solver, op, inst, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();

    std::uint64_t corr_flops = 0;
    for (const IterationCost& row : res.costs.iterations)
      corr_flops += row.counted.flops();
    std::cout << "[" << mode_name << "] iterations=" << res.iterations_run
              << " residual=" << format_double(res.residual_norm)
              << " support=" << support_to_string(res.support)
              << " correlation_flops=" << corr_flops
              << (res.rank_deficient_abort ? " (rank-deficient abort)" : "")
              << " wall_ms=" << format_double(ms) << "\n";

    std::ofstream rout(cmd.out + "." + mode_name + ".result.txt");
    save_result(res, rout);
    std::ofstream cout_file(cmd.out + "." + mode_name + ".cost.csv");
    res.costs.write_csv(cout_file);
    std::cout << "wrote " << cmd.out << "." << mode_name << ".result.txt, "
              << cmd.out << "." << mode_name << ".cost.csv\n";
  }
  return kExitOk;
}

int run_bench(const BenchCmd& cmd) {
  const TransformKind kind = parse_kind(cmd.kind);
  if (cmd.ns.empty()) throw std::invalid_argument("bench: --n is required");
  std::vector<std::size_t> ms = cmd.ms;
  if (ms.empty()) {
    ms.reserve(cmd.ns.size());
    for (std::size_t n : cmd.ns) ms.push_back(std::max<std::size_t>(1, n / 4));
  } else if (ms.size() == 1) {
    ms.assign(cmd.ns.size(), ms[0]);
  } else if (ms.size() != cmd.ns.size()) {
    throw std::invalid_argument("bench: --m list must match --n list");
  }

  std::ostringstream csv;
  const bool cosamp = (cmd.solver == "cosamp");
  if (!cosamp && cmd.solver != "omp")
    throw std::invalid_argument("unknown solver: " + cmd.solver);
  csv << (cosamp ? "kind,N,K,t,relative_cost" : "kind,N,M,t,relative_cost")
      << "\n";
  for (std::size_t i = 0; i < cmd.ns.size(); ++i) {
    const std::size_t n = cmd.ns[i];
    const double conv = double(conventional_iteration_flops(kind, n));
    for (std::size_t t = 1; t <= cmd.tmax; ++t) {
      const double fast =
          cosamp ? double(cosamp_fast_iteration_flops(kind, n, cmd.k, t))
                 : double(fast_iteration_flops(kind, n, t));
      csv << to_string(kind) << ',' << n << ','
          << (cosamp ? cmd.k : ms[i]) << ',' << t << ','
          << format_double(fast / conv) << "\n";
    }
  }

  if (cmd.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(cmd.out);
    if (!out) throw std::invalid_argument("cannot write " + cmd.out);
    out << csv.str();
    std::cout << "wrote " << cmd.out << "\n";
  }
  return kExitOk;
}

struct TrialOutcome {
  bool mismatch = false;
  std::size_t iterations = 0;
  std::size_t corr_violations = 0;
  double max_dev = 0.0;
  double sum_dev = 0.0;
  std::size_t dev_count = 0;
};

TrialOutcome run_equiv_trial(const EquivCmd& cmd, TransformKind kind,
                             std::size_t trial) {
  const std::uint64_t inst_seed = derive_seed(cmd.seed, trial);
  const SensingOperator op(
      StructuredUnitary(kind, cmd.n),
      make_row_selection(cmd.n, cmd.m, derive_seed(inst_seed, 1)));
  const ProblemInstance inst = make_instance(op, cmd.k, cmd.noise, inst_seed);

  SolveConfig cfg = default_config(cmd.k, l2_norm(inst.y));
  cfg.record_correlations = true;
  cfg.fourier_symmetry = cmd.symmetry;

  cfg.correlation_mode = CorrelationMode::Conventional;
  const RecoveryResult conv = run_solver(cmd.solver, op, inst, cfg);
  cfg.correlation_mode = CorrelationMode::Fast;
  const RecoveryResult fast = run_solver(cmd.solver, op, inst, cfg);

  TrialOutcome out;
  out.iterations = conv.iterations_run;
  if (conv.support_history != fast.support_history) out.mismatch = true;
  const std::size_t iters = std::min(conv.correlation_history.size(),
                                     fast.correlation_history.size());
  if (conv.correlation_history.size() != fast.correlation_history.size())
    out.mismatch = true;
  for (std::size_t i = 0; i < iters; ++i) {
    const double ref =
        std::max(l2_norm(conv.correlation_history[i]), 1e-300);
    const double dev =
        l2_distance(fast.correlation_history[i], conv.correlation_history[i]) /
        ref;
    out.max_dev = std::max(out.max_dev, dev);
    out.sum_dev += dev;
    ++out.dev_count;
    if (dev > 1e-10) ++out.corr_violations;
  }
  return out;
}

int run_equiv(const EquivCmd& cmd) {
  const TransformKind kind = parse_kind(cmd.kind);
  std::vector<TrialOutcome> outcomes(cmd.trials);
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(cmd.threads, cmd.trials ? cmd.trials
                                                                : 1));
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t trial = next.fetch_add(1);
      if (trial >= cmd.trials || failed.load()) break;
      try {
        outcomes[trial] = run_equiv_trial(cmd, kind, trial);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
        break;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error(first_error);

  std::size_t mismatches = 0, violations = 0, dev_count = 0;
  double max_dev = 0.0, sum_dev = 0.0;
  for (const TrialOutcome& o : outcomes) {
    mismatches += o.mismatch ? 1 : 0;
    violations += o.corr_violations;
    max_dev = std::max(max_dev, o.max_dev);
    sum_dev += o.sum_dev;
    dev_count += o.dev_count;
  }
  const double mean_dev = dev_count ? sum_dev / double(dev_count) : 0.0;
  std::cout << "equiv: solver=" << cmd.solver << " kind=" << to_string(kind)
            << " n=" << cmd.n << " m=" << cmd.m << " k=" << cmd.k
            << " trials=" << cmd.trials << "\n"
            << "support mismatches: " << mismatches << "\n"
            << "correlation deviation: mean=" << format_double(mean_dev)
            << " max=" << format_double(max_dev)
            << " violations(>1e-10)=" << violations << "\n";
  return (mismatches == 0 && violations == 0) ? kExitOk : kExitAssertion;
}

// Expands a --config file of flat key=value lines into --key=value tokens,
// skipping keys already present on the command line so explicit flags win.
void expand_config(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  std::set<std::string> given;
  for (const std::string& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));

  const auto trim = [](const std::string& s) {
    const char* ws = " \t\r\n";
    const std::size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    const std::size_t eq = entry.find('=');
    const std::string key = eq == std::string::npos ? std::string()
                                                    : trim(entry.substr(0, eq));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    if (given.count("--" + key)) continue;
    args.push_back("--" + key + "=" + trim(entry.substr(eq + 1)));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fastmp: sparse recovery with fast correlation updates over partial "
      "Fourier/Hadamard sensing matrices"};
  app.require_subcommand(1);

  std::string config_path;
  static const char kConfigHelp[] =
      "flat key=value file supplying defaults; command-line flags override";

  VerifyCmd vc;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "run the structural self-checks: unitary constraints, product-index "
      "formulas, column-product permutations, kernel invariants, fast-update "
      "equivalence");
  verify->add_option("--max-n", vc.max_n, "largest transform size checked");
  verify->add_option("--seed", vc.seed, "base seed for randomized checks");
  verify->add_flag("--corrupt", vc.corrupt, "intentionally corrupt a matrix")
      ->group("");
  verify->add_option("--config", config_path, kConfigHelp);

  SolveCmd sc;
  CLI::App* solve = app.add_subcommand(
      "solve",
      "generate (or load) one instance and solve it per mode; writes "
      "<out>.instance.txt plus per-mode <out>.<mode>.result.txt and "
      "<out>.<mode>.cost.csv with rows "
      "t,mode,analytic_flops,counted_flops,relative_vs_conventional");
  solve->add_option("--kind", sc.kind, "fourier|hadamard");
  solve->add_option("--n", sc.n, "signal length");
  solve->add_option("--m", sc.m, "measurement count");
  solve->add_option("--k", sc.k, "sparsity");
  solve->add_option("--seed", sc.seed, "instance seed");
  solve->add_option("--noise", sc.noise, "noise standard deviation");
  solve->add_option("--solver", sc.solver, "omp|cosamp");
  solve->add_option("--mode", sc.modes,
                    "correlation modes to run (conventional|fast|adaptive)");
  solve->add_option("--ls", sc.ls, "least-squares method (qr|normal)");
  solve->add_flag("--symmetry", sc.symmetry,
                  "use paired-product Fourier updates");
  solve->add_option("--iters", sc.iters, "max iterations (0: sparsity)");
  solve->add_option("--tol", sc.tol, "residual tolerance (<0: 1e-9*|y|)");
  solve->add_option("--out", sc.out, "output file prefix");
  solve->add_option("--instance", sc.instance_path,
                    "load an instance file instead of generating");
  solve->add_option("--config", config_path, kConfigHelp);

  BenchCmd bc;
  CLI::App* bench = app.add_subcommand(
      "bench",
      "sweep the analytic relative correlation cost over t=1..tmax; emits "
      "CSV rows kind,N,M,t,relative_cost (omp) or kind,N,K,t,relative_cost "
      "(cosamp)");
  bench->add_option("--kind", bc.kind, "fourier|hadamard");
  bench->add_option("--n", bc.ns, "signal lengths (repeatable)");
  bench->add_option("--m", bc.ms,
                    "measurement counts (repeatable; default n/4)");
  bench->add_option("--k", bc.k, "cosamp sparsity");
  bench->add_option("--solver", bc.solver, "omp|cosamp");
  bench->add_option("--tmax", bc.tmax, "largest iteration index");
  bench->add_option("--out", bc.out, "CSV output path (default stdout)");
  bench->add_option("--config", config_path, kConfigHelp);

  EquivCmd ec;
  CLI::App* equiv = app.add_subcommand(
      "equiv",
      "Monte-Carlo campaign asserting fast/conventional support-sequence "
      "identity and correlation agreement; nonzero exit on any mismatch");
  equiv->add_option("--kind", ec.kind, "fourier|hadamard");
  equiv->add_option("--solver", ec.solver, "omp|cosamp");
  equiv->add_option("--n", ec.n, "signal length");
  equiv->add_option("--m", ec.m, "measurement count");
  equiv->add_option("--k", ec.k, "sparsity");
  equiv->add_option("--trials", ec.trials, "number of trials");
  equiv->add_option("--seed", ec.seed, "base seed");
  equiv->add_option("--noise", ec.noise, "noise standard deviation");
  equiv->add_option("--threads", ec.threads, "worker threads");
  equiv->add_flag("--symmetry", ec.symmetry,
                  "use paired-product Fourier updates");
  equiv->add_option("--config", config_path, kConfigHelp);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    expand_config(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(verify)) return run_verify(vc);
    if (app.got_subcommand(solve)) return run_solve(sc);
    if (app.got_subcommand(bench)) return run_bench(bc);
    if (app.got_subcommand(equiv)) return run_equiv(ec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
