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

// acceptance gate: one pass/fail line per shipping criterion. argv[1] must
// name the command-line binary (used by the benchmark-curve criterion).

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fastmp/kernel.hpp"
#include "fastmp/random.hpp"
#include "fastmp/sensing.hpp"
#include "fastmp/solvers.hpp"
#include "fastmp/transform.hpp"

using namespace fastmp;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::printf("[%s] %d. %s%s%s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
              detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---- criterion 1: permutation extraction over the small-size grid --------

bool permutation_suite() {
  for (TransformKind kind : {TransformKind::Fourier, TransformKind::Hadamard})
    for (std::size_t n : {2, 4, 8, 16, 32, 64}) {
      const StructuredUnitary u(kind, n);
      for (std::size_t lambda = 1; lambda <= n; ++lambda)
        if (!verify_permutation_property(u, lambda).ok) return false;
    }
  return true;
}

// ---- criterion 2: fast/conventional equivalence campaign -----------------

struct EquivStats {
  std::size_t trials = 0;
  std::size_t mismatches = 0;
  std::size_t violations = 0;
  double max_dev = 0.0;
};

RecoveryResult dispatch(bool cosamp, const SensingOperator& op,
                        const ProblemInstance& inst, const SolveConfig& cfg) {
  return cosamp ? cosamp_solve(op, inst.y, inst.k, cfg)
                : omp_solve(op, inst.y, cfg);
}

void equiv_trial(bool cosamp, TransformKind kind, std::size_t n,
                 std::size_t m, std::size_t k, std::uint64_t seed,
                 bool symmetry, EquivStats& stats) {
  const SensingOperator op(StructuredUnitary(kind, n),
                           make_row_selection(n, m, derive_seed(seed, 1)));
  const ProblemInstance inst = make_instance(op, k, 0.05, seed);
  SolveConfig cfg = default_config(k, l2_norm(inst.y));
  cfg.record_correlations = true;
  cfg.fourier_symmetry = symmetry;

  cfg.correlation_mode = CorrelationMode::Conventional;
  const RecoveryResult conv = dispatch(cosamp, op, inst, cfg);
  cfg.correlation_mode = CorrelationMode::Fast;
  const RecoveryResult fast = dispatch(cosamp, op, inst, cfg);

  ++stats.trials;
  if (conv.support_history != fast.support_history ||
      conv.correlation_history.size() != fast.correlation_history.size()) {
    ++stats.mismatches;
    return;
  }
  for (std::size_t i = 0; i < conv.correlation_history.size(); ++i) {
    const double ref = std::max(l2_norm(conv.correlation_history[i]), 1e-300);
    const double dev = l2_distance(fast.correlation_history[i],
                                   conv.correlation_history[i]) /
                       ref;
    stats.max_dev = std::max(stats.max_dev, dev);
    if (dev > 1e-10) ++stats.violations;
  }
}

bool equivalence_campaign(std::string& detail) {
  EquivStats omp_stats, cosamp_stats;
  std::uint64_t counter = 0;
  for (int cosamp = 0; cosamp < 2; ++cosamp) {
    EquivStats& stats = cosamp ? cosamp_stats : omp_stats;
    for (TransformKind kind :
         {TransformKind::Fourier, TransformKind::Hadamard})
      for (std::size_t n : {256, 1024})
        for (std::size_t m : {n / 4, n / 16})
          for (std::size_t k : {1, 4, 8})
            for (int trial = 0; trial < 42; ++trial)
              equiv_trial(cosamp != 0, kind, n, m, k,
                          derive_seed(2024, counter++),
                          kind == TransformKind::Fourier && trial % 2 == 0,
                          stats);
  }
  std::ostringstream os;
  os << omp_stats.trials << "+" << cosamp_stats.trials << " trials, "
     << (omp_stats.mismatches + cosamp_stats.mismatches) << " mismatches, "
     << "max dev " << fmt(std::max(omp_stats.max_dev, cosamp_stats.max_dev));
  detail = os.str();
  return omp_stats.trials >= 1000 && cosamp_stats.trials >= 1000 &&
         omp_stats.mismatches == 0 && cosamp_stats.mismatches == 0 &&
         omp_stats.violations == 0 && cosamp_stats.violations == 0;
}

// ---- criterion 3: per-iteration formulas, exact --------------------------

bool formula_exactness() {
  for (std::size_t logn = 6; logn <= 13; ++logn) {
    const std::size_t n = std::size_t(1) << logn;
    const std::uint64_t fconv = 5ull * n * logn;
    const std::uint64_t hconv = 2ull * n * logn;
    if (conventional_iteration_flops(TransformKind::Fourier, n) != fconv)
      return false;
    if (conventional_iteration_flops(TransformKind::Hadamard, n) != hconv)
      return false;
    for (std::size_t t = 1; t <= 13; ++t) {
      const std::uint64_t ffast =
          t == 1 ? fconv : 6ull * n * (t - 1);
      const std::uint64_t hfast =
          t == 1 ? hconv : 2ull * n * (t - 1);
      if (fast_iteration_flops(TransformKind::Fourier, n, t) != ffast)
        return false;
      if (fast_iteration_flops(TransformKind::Hadamard, n, t) != hfast)
        return false;
    }
  }
  return true;
}

// ---- criterion 4: crossover anchor and the adaptive switch ---------------

bool crossover_and_switch(std::string& detail) {
  const std::size_t tstar =
      crossover_iteration(TransformKind::Fourier, 4096);
  detail = "crossover=" + std::to_string(tstar);
  if (tstar != 11) return false;

  const SensingOperator op(StructuredUnitary(TransformKind::Fourier, 4096),
                           make_row_selection(4096, 64, 314));
  const ProblemInstance inst = make_instance(op, 16, 0.0, 2718);
  SolveConfig cfg = default_config(16, l2_norm(inst.y));
  cfg.correlation_mode = CorrelationMode::Adaptive;
  cfg.max_iterations = 13;
  cfg.residual_tolerance = 0.0;
  const RecoveryResult res = omp_solve(op, inst.y, cfg);
  if (res.costs.iterations.size() != 13) return false;
  for (const IterationCost& row : res.costs.iterations) {
    const CorrelationMode want = row.t <= 11 ? CorrelationMode::Fast
                                             : CorrelationMode::Conventional;
    if (row.mode_used != want) return false;
  }
  detail += ", conventional from t=12";
  return true;
}

// ---- criterion 5: cosamp relative-cost anchor -----------------------------

bool cosamp_anchor(std::string& detail) {
  const double rel = cosamp_relative_cost(8192, 4);
  if (!(rel == 24.0 / 65.0 && rel > 0.36 && rel < 0.38)) {
    detail = "analytic " + fmt(rel);
    return false;
  }

  const SensingOperator op(StructuredUnitary(TransformKind::Fourier, 8192),
                           make_row_selection(8192, 64, 55));
  const ProblemInstance inst = make_instance(op, 4, 0.0, 56);
  SolveConfig cfg = default_config(4, l2_norm(inst.y));
  cfg.max_iterations = 6;
  cfg.residual_tolerance = 0.0;
  cfg.fourier_symmetry = true;

  cfg.correlation_mode = CorrelationMode::Conventional;
  const RecoveryResult conv = cosamp_solve(op, inst.y, 4, cfg);
  cfg.correlation_mode = CorrelationMode::Fast;
  const RecoveryResult fast = cosamp_solve(op, inst.y, 4, cfg);
  if (conv.costs.iterations.size() != 6 || fast.costs.iterations.size() != 6)
    return false;

  std::uint64_t conv_flops = 0, fast_flops = 0;
  for (std::size_t i = 1; i < 6; ++i) {  // steady-state iterations t >= 2
    conv_flops += conv.costs.iterations[i].counted.flops();
    fast_flops += fast.costs.iterations[i].counted.flops();
  }
  const double counted = double(fast_flops) / double(conv_flops);
  detail = "analytic " + fmt(rel) + ", counted " + fmt(counted);
  return std::abs(counted - rel) <= 0.05 * rel;
}

// ---- criterion 6: counted flops track the analytic model -----------------

bool counted_vs_analytic(std::string& detail) {
  // hadamard conventional: additions exactly n*log2(n) per iteration
  {
    const std::size_t n = 1024;
    const SensingOperator op(StructuredUnitary(TransformKind::Hadamard, n),
                             make_row_selection(n, 16, 61));
    const ProblemInstance inst = make_instance(op, 8, 0.0, 62);
    SolveConfig cfg = default_config(8, l2_norm(inst.y));
    cfg.max_iterations = 8;
    cfg.residual_tolerance = 0.0;
    const RecoveryResult res = omp_solve(op, inst.y, cfg);
    if (res.costs.iterations.size() != 8) return false;
    for (const IterationCost& row : res.costs.iterations) {
      if (row.counted.complex_add != 1024 * 10) {
        detail = "hadamard adds off at t=" + std::to_string(row.t);
        return false;
      }
      if (row.counted.complex_mul != 0) return false;
    }
  }
  // fourier conventional: total within 5% (the unitary scaling is counted)
  {
    const std::size_t n = 4096;
    const SensingOperator op(StructuredUnitary(TransformKind::Fourier, n),
                             make_row_selection(n, 64, 63));
    const ProblemInstance inst = make_instance(op, 8, 0.0, 64);
    SolveConfig cfg = default_config(8, l2_norm(inst.y));
    cfg.max_iterations = 8;
    cfg.residual_tolerance = 0.0;
    const RecoveryResult res = omp_solve(op, inst.y, cfg);
    const double analytic =
        double(conventional_iteration_flops(TransformKind::Fourier, n));
    for (const IterationCost& row : res.costs.iterations) {
      const double err =
          std::abs(double(row.counted.flops()) - analytic) / analytic;
      if (err > 0.05) {
        detail = "fourier conventional off by " + fmt(err);
        return false;
      }
    }
  }
  // fast paths within 10% of the update formulas
  const auto fast_rows_ok = [&detail](TransformKind kind, std::size_t n,
                                      std::size_t m, bool symmetry) {
    const SensingOperator op(StructuredUnitary(kind, n),
                             make_row_selection(n, m, 65));
    const ProblemInstance inst = make_instance(op, 8, 0.0, 66);
    SolveConfig cfg = default_config(8, l2_norm(inst.y));
    cfg.max_iterations = 8;
    cfg.residual_tolerance = 0.0;
    cfg.correlation_mode = CorrelationMode::Fast;
    cfg.fourier_symmetry = symmetry;
    const RecoveryResult res = omp_solve(op, inst.y, cfg);
    for (const IterationCost& row : res.costs.iterations) {
      if (row.t == 1) continue;
      const double err =
          std::abs(double(row.counted.flops()) - double(row.analytic_flops)) /
          double(row.analytic_flops);
      if (err > 0.10) {
        detail = to_string(kind) + std::string(" fast off by ") + fmt(err) +
                 " at t=" + std::to_string(row.t);
        return false;
      }
    }
    return true;
  };
  if (!fast_rows_ok(TransformKind::Fourier, 4096, 64, true)) return false;
  if (!fast_rows_ok(TransformKind::Hadamard, 1024, 16, false)) return false;
  return true;
}

// ---- criterion 7: benchmark curves from the shipped binary ---------------

bool bench_curves(const std::string& cli, std::string& detail) {
  const std::string csv_path =
      "/tmp/fastmp_acceptance_" + std::to_string(getpid()) + ".csv";
  const std::string cmd = cli +
                          " bench --kind fourier --n 512 --n 4096 --n 8192 "
                          "--tmax 13 --out " +
                          csv_path + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  if (!WIFEXITED(rc) || WEXITSTATUS(rc) != 0) {
    detail = "bench invocation failed";
    return false;
  }
  std::ifstream in(csv_path);
  if (!in) {
    detail = "missing csv";
    return false;
  }
  std::string line;
  std::getline(in, line);  // header
  std::size_t rows = 0;
  // rel[n][t]
  std::vector<std::vector<double>> curves;
  std::vector<std::size_t> ns;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string kind;
    std::size_t n, m, t;
    double rel;
    if (!(ls >> kind >> n >> m >> t >> rel)) continue;
    if (t == 1) {
      ns.push_back(n);
      curves.emplace_back();
    }
    curves.back().push_back(rel);
    ++rows;
  }
  std::remove(csv_path.c_str());
  if (ns != std::vector<std::size_t>{512, 4096, 8192} || rows != 39) {
    detail = "unexpected csv shape";
    return false;
  }
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double logn = std::log2(double(ns[i]));
    const double slope = 6.0 / (5.0 * logn);
    const std::vector<double>& rel = curves[i];
    if (rel.size() != 13 || rel[0] != 1.0) {
      detail = "t=1 anchor missing for n=" + std::to_string(ns[i]);
      return false;
    }
    for (std::size_t t = 2; t <= 13; ++t) {
      const double want = slope * double(t - 1);
      if (std::abs(rel[t - 1] - want) > 1e-12) {
        detail = "pointwise mismatch at n=" + std::to_string(ns[i]) +
                 " t=" + std::to_string(t);
        return false;
      }
      if (t >= 3 && std::abs((rel[t - 1] - rel[t - 2]) - slope) > 1e-12) {
        detail = "slope mismatch at n=" + std::to_string(ns[i]);
        return false;
      }
    }
  }
  detail = "3 curves, 39 rows";
  return true;
}

// ---- criterion 8: recovery-rate parity ------------------------------------

bool recovery_parity(std::string& detail) {
  std::ostringstream os;
  for (TransformKind kind : {TransformKind::Fourier, TransformKind::Hadamard}) {
    std::size_t exact = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const std::uint64_t seed =
          derive_seed(909, trial + (kind == TransformKind::Hadamard ? 1u << 20
                                                                    : 0u));
      const SensingOperator op(StructuredUnitary(kind, 256),
                               make_row_selection(256, 64, derive_seed(seed, 1)));
      const ProblemInstance inst = make_instance(op, 4, 0.0, seed);
      SolveConfig cfg = default_config(4, l2_norm(inst.y));

      cfg.correlation_mode = CorrelationMode::Conventional;
      const RecoveryResult conv = omp_solve(op, inst.y, cfg);
      cfg.correlation_mode = CorrelationMode::Fast;
      const RecoveryResult fast = omp_solve(op, inst.y, cfg);
      if (conv.support != fast.support) {
        detail = "mode outcomes diverged";
        return false;
      }

      std::vector<std::size_t> want, got = conv.support;
      for (std::size_t j = 0; j < 256; ++j)
        if (inst.x_true[j] != cplx(0.0)) want.push_back(j + 1);
      std::sort(got.begin(), got.end());
      if (got == want) ++exact;
    }
    os << to_string(kind) << " " << exact << "/500 ";
    if (exact < 475) {  // 95% of 500
      detail = os.str();
      return false;
    }
  }
  detail = os.str() + "(rates identical across modes by construction)";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
    return 1;
  }
  const std::string cli = argv[1];
  std::string detail;

  report(1, "column-product permutation extraction (both kinds, n<=64)",
         permutation_suite());

  detail.clear();
  report(2, "fast/conventional equivalence campaign", equivalence_campaign(detail),
         detail);

  report(3, "per-iteration flop formulas exact for n=2^6..2^13, t=1..13",
         formula_exactness());

  detail.clear();
  report(4, "fourier n=4096 crossover and adaptive switch",
         crossover_and_switch(detail), detail);

  detail.clear();
  report(5, "cosamp n=8192 k=4 relative cost", cosamp_anchor(detail), detail);

  detail.clear();
  report(6, "counted flops track the analytic model",
         counted_vs_analytic(detail), detail);

  detail.clear();
  report(7, "benchmark curves linear with the predicted slope",
         bench_curves(cli, detail), detail);

  detail.clear();
  report(8, "noiseless recovery rate >=95% with mode parity",
         recovery_parity(detail), detail);

  if (g_failures == 0) {
    std::printf("acceptance: all 8 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
