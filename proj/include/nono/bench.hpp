#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nono/io.hpp"
#include "nono/rng.hpp"
#include "nono/solve.hpp"
#include "nono/stats.hpp"

namespace nono {

struct BenchOptions {
  int repetitions = 12;
  bool include_warmup = false;  // count the warm-up run as a sample
  int jobs = 1;
  std::uint64_t seed = 0;
};

struct VariantStats {
  std::string name;
  TimeStats time;
  TimeStats iterations;
  double solved_fraction = 0.0;
  std::vector<double> per_puzzle_mean_time;  // pairing basis for the tests
};

struct PairwiseTest {
  std::string a, b;
  bool ok = false;
  WilcoxonResult result;
  std::string error;
};

struct BenchReport {
  std::vector<std::string> variants;
  int repetitions = 0;
  std::uint64_t seed = 0;
  std::size_t puzzle_count = 0;
  std::vector<VariantStats> per_variant;
  std::vector<PairwiseTest> pairwise;
};

// Runs every variant on every puzzle `repetitions` times (after an untimed
// warm-up unless it is included). Cells — one (variant, puzzle) pair each —
// may run on parallel workers; the repetitions inside a cell always run
// back-to-back on one worker so their timings stay comparable. jobs = 1 is
// fully serial.
inline BenchReport benchmark(const std::vector<ClueSet>& puzzles,
                             const std::vector<SolverConfig>& variants, const Predictor* predictor,
                             const BenchOptions& options = {}) {
  if (puzzles.empty()) throw std::invalid_argument("benchmark: no puzzles");
  if (variants.empty()) throw std::invalid_argument("benchmark: no variants");
  if (options.repetitions < 1) throw std::invalid_argument("benchmark: repetitions must be >= 1");

  struct Cell {
    std::vector<double> times;
    std::vector<double> iterations;
    int solved = 0;
    int runs = 0;
  };
  std::vector<Cell> cells(variants.size() * puzzles.size());

  const auto run_cell = [&](std::size_t v, std::size_t p) {
    Cell& cell = cells[v * puzzles.size() + p];
    SolverConfig cfg = variants[v];
    cfg.rng_seed = derive_seed(options.seed, v, p);
    const int total = options.repetitions + (options.include_warmup ? 0 : 1);
    for (int rep = 0; rep < total; ++rep) {
      const SolveReport report =
          solve(puzzles[p], variant_uses_predictor(cfg.variant) ? predictor : nullptr, cfg);
      if (rep == 0 && !options.include_warmup) continue;  // warm-up discarded
      cell.times.push_back(report.elapsed_seconds);
      cell.iterations.push_back(static_cast<double>(report.iterations));
      if (report.status == SolveStatus::Solved) ++cell.solved;
      ++cell.runs;
    }
  };

  const std::size_t total_cells = variants.size() * puzzles.size();
  if (options.jobs <= 1) {
    for (std::size_t v = 0; v < variants.size(); ++v)
      for (std::size_t p = 0; p < puzzles.size(); ++p) run_cell(v, p);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < options.jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < total_cells; i = next.fetch_add(1))
          run_cell(i / puzzles.size(), i % puzzles.size());
      });
    }
    for (auto& t : workers) t.join();
  }

  BenchReport report;
  report.repetitions = options.repetitions;
  report.seed = options.seed;
  report.puzzle_count = puzzles.size();
  for (std::size_t v = 0; v < variants.size(); ++v) {
    VariantStats vs;
    vs.name = std::string(variant_name(variants[v].variant));
    report.variants.push_back(vs.name);
    std::vector<double> times, iters;
    int solved = 0, runs = 0;
    for (std::size_t p = 0; p < puzzles.size(); ++p) {
      const Cell& cell = cells[v * puzzles.size() + p];
      times.insert(times.end(), cell.times.begin(), cell.times.end());
      iters.insert(iters.end(), cell.iterations.begin(), cell.iterations.end());
      solved += cell.solved;
      runs += cell.runs;
      double mean = 0.0;
      for (double t : cell.times) mean += t;
      vs.per_puzzle_mean_time.push_back(mean / static_cast<double>(cell.times.size()));
    }
    vs.time = time_stats(times);
    vs.iterations = time_stats(iters);
    vs.solved_fraction = static_cast<double>(solved) / static_cast<double>(runs);
    report.per_variant.push_back(std::move(vs));
  }

  // paired signed-rank test on per-puzzle mean times, every variant pair
  for (std::size_t a = 0; a < variants.size(); ++a) {
    for (std::size_t b = a + 1; b < variants.size(); ++b) {
      PairwiseTest test;
      test.a = report.per_variant[a].name;
      test.b = report.per_variant[b].name;
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t p = 0; p < puzzles.size(); ++p)
        pairs.emplace_back(report.per_variant[a].per_puzzle_mean_time[p],
                           report.per_variant[b].per_puzzle_mean_time[p]);
      try {
        test.result = wilcoxon_signed_rank(pairs);
        test.ok = true;
      } catch (const std::exception& e) {
        test.error = e.what();
      }
      report.pairwise.push_back(std::move(test));
    }
  }
  return report;
}

inline json time_stats_to_json(const TimeStats& stats) {
  return json{{"mean", stats.mean},
              {"std", stats.std_dev},
              {"median", stats.median},
              {"percentiles", stats.percentiles}};
}

inline json bench_report_to_json(const BenchReport& report) {
  json per_variant = json::object();
  json solved = json::object();
  for (const VariantStats& vs : report.per_variant) {
    json entry = time_stats_to_json(vs.time);
    entry["iterations"] = {{"mean", vs.iterations.mean},
                           {"std", vs.iterations.std_dev},
                           {"median", vs.iterations.median}};
    per_variant[vs.name] = entry;
    solved[vs.name] = vs.solved_fraction;
  }
  json pairwise = json::array();
  for (const PairwiseTest& t : report.pairwise) {
    json entry{{"a", t.a}, {"b", t.b}};
    if (t.ok) {
      entry["W"] = t.result.w_plus;
      entry["p"] = t.result.p_value;
      entry["method"] = t.result.method;
    } else {
      entry["error"] = t.error;
    }
    pairwise.push_back(std::move(entry));
  }
  return json{{"variants", report.variants}, {"repetitions", report.repetitions},
              {"seed", report.seed},         {"puzzles", report.puzzle_count},
              {"per_variant", per_variant},  {"pairwise_tests", pairwise},
              {"solved_fraction", solved}};
}

namespace detail {

inline std::string fixed(double v, int places = 4) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(places);
  out << v;
  return out.str();
}

}  // namespace detail

// Human-readable rendering: time summary, iteration summary, percentile
// table, pairwise tests.
inline std::string render_bench_tables(const BenchReport& report) {
  std::ostringstream out;
  out << "Execution time (s)\n";
  out << "Algorithm\tMean\tStd\tMedian\n";
  for (const VariantStats& vs : report.per_variant)
    out << vs.name << '\t' << detail::fixed(vs.time.mean) << '\t' << detail::fixed(vs.time.std_dev)
        << '\t' << detail::fixed(vs.time.median) << '\n';

  out << "\nIterations\n";
  out << "Algorithm\tMean\tStd\tMedian\n";
  for (const VariantStats& vs : report.per_variant)
    out << vs.name << '\t' << detail::fixed(vs.iterations.mean) << '\t'
        << detail::fixed(vs.iterations.std_dev) << '\t' << detail::fixed(vs.iterations.median, 1)
        << '\n';

  out << "\nPercentiles of the execution time (s)\n";
  out << "P";
  for (const VariantStats& vs : report.per_variant) out << '\t' << vs.name;
  out << '\n';
  for (int i = 0; i <= 10; ++i) {
    out << detail::fixed(i / 10.0, 1);
    for (const VariantStats& vs : report.per_variant) out << '\t' << detail::fixed(vs.time.percentiles[i]);
    out << '\n';
  }

  out << "\nSolved fraction\n";
  for (const VariantStats& vs : report.per_variant)
    out << vs.name << '\t' << detail::fixed(vs.solved_fraction, 3) << '\n';

  out << "\nPairwise Wilcoxon signed-rank (paired per-puzzle mean times)\n";
  out << "A vs B\tW\tp-value\tmethod\n";
  for (const PairwiseTest& t : report.pairwise) {
    out << t.a << " vs " << t.b << '\t';
    if (t.ok)
      out << detail::fixed(t.result.w_plus, 1) << '\t' << detail::fixed(t.result.p_value, 6) << '\t'
          << t.result.method << '\n';
    else
      out << "-\t-\t" << t.error << '\n';
  }
  return out.str();
}

}  // namespace nono
