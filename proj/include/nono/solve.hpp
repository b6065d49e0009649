#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nono/board.hpp"
#include "nono/line.hpp"
#include "nono/predict.hpp"
#include "nono/rng.hpp"
#include "nono/symmetry.hpp"

namespace nono {

enum class Variant : int { H = 0, NeHI, Ne8HI, NeHPF, Ne8HPF, NeHPFI, Ne8HPFI };

inline constexpr std::array<Variant, 7> kAllVariants = {
    Variant::H,      Variant::NeHI,   Variant::Ne8HI, Variant::NeHPF,
    Variant::Ne8HPF, Variant::NeHPFI, Variant::Ne8HPFI};

inline std::string_view variant_name(Variant v) {
  static constexpr std::array<std::string_view, 7> names = {"H",      "NeHI",   "Ne8HI", "NeHPF",
                                                            "Ne8HPF", "NeHPFI", "Ne8HPFI"};
  return names[static_cast<int>(v)];
}

inline Variant variant_from_name(std::string_view name) {
  for (Variant v : kAllVariants)
    if (variant_name(v) == name) return v;
  throw std::invalid_argument("unknown solver variant '" + std::string(name) + "'");
}

inline bool variant_uses_predictor(Variant v) { return v != Variant::H; }
inline bool variant_uses_intuition(Variant v) {
  return v == Variant::NeHI || v == Variant::Ne8HI || v == Variant::NeHPFI || v == Variant::Ne8HPFI;
}
inline bool variant_uses_reflections(Variant v) {
  return v == Variant::Ne8HI || v == Variant::Ne8HPF || v == Variant::Ne8HPFI;
}
inline bool variant_uses_erase(Variant v) {
  return v == Variant::NeHPF || v == Variant::Ne8HPF || v == Variant::NeHPFI || v == Variant::Ne8HPFI;
}

struct SolverConfig {
  Variant variant = Variant::H;
  bool intuition = false;
  bool use_reflections = false;
  std::uint64_t rng_seed = 0;
  std::optional<std::uint64_t> node_limit;
  std::optional<double> time_limit_seconds;
  // Evaluation-only: erase lines by comparison with the known solution
  // instead of header consistency.
  bool erase_by_ground_truth = false;
  std::optional<Board> ground_truth;

  static SolverConfig for_variant(Variant v, std::uint64_t seed = 0) {
    SolverConfig cfg;
    cfg.variant = v;
    cfg.intuition = variant_uses_intuition(v);
    cfg.use_reflections = variant_uses_reflections(v);
    cfg.rng_seed = seed;
    return cfg;
  }
};

enum class SolveStatus { Solved, Unsatisfiable, NodeLimitReached, TimeLimitReached, GenerationLimitReached };
enum class SolvePhase { None, DirectPrediction, PartialEraseSearch, FullSearch };

inline std::string_view solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Unsatisfiable: return "unsatisfiable";
    case SolveStatus::NodeLimitReached: return "node_limit";
    case SolveStatus::TimeLimitReached: return "time_limit";
    case SolveStatus::GenerationLimitReached: return "generation_limit";
  }
  return "unknown";
}

inline std::string_view solve_phase_name(SolvePhase p) {
  switch (p) {
    case SolvePhase::None: return "none";
    case SolvePhase::DirectPrediction: return "direct_prediction";
    case SolvePhase::PartialEraseSearch: return "partial_erase_search";
    case SolvePhase::FullSearch: return "full_search";
  }
  return "unknown";
}

struct SolveReport {
  std::optional<Board> solution;
  SolveStatus status = SolveStatus::Unsatisfiable;
  SolvePhase phase = SolvePhase::None;
  std::uint64_t iterations = 0;  // propagation-fixpoint + branch steps
  std::uint64_t backtracks = 0;
  double elapsed_seconds = 0.0;
  std::uint64_t rng_seed = 0;
  std::string variant;
  std::optional<int> prediction_errors;  // vs ground truth, when both exist
};

// Branch score: positions where the candidate differs from the predicted
// line. Undetermined prediction cells carry no signal and never penalize.
inline int weight_combination(const LineMask& candidate, const LineMask& predicted) {
  if (candidate.size() != predicted.size())
    throw std::invalid_argument("weight_combination: length mismatch");
  int score = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i)
    if (predicted[i] != Cell::Unknown && predicted[i] != candidate[i]) ++score;
  return score;
}

// Number of rows plus columns whose encoding disagrees with their header.
inline int inconsistent_line_count(const Board& board, const ClueSet& clues) {
  int bad = 0;
  for (int i = 0; i < clues.n; ++i) {
    if (encode_line(board.row(i)) != clues.rows[i]) ++bad;
    if (encode_line(board.col(i)) != clues.cols[i]) ++bad;
  }
  return bad;
}

// Clears every row and column whose encoding disagrees with its header;
// consistent lines keep their predicted cells.
inline Board partial_erase(const Board& prediction, const ClueSet& clues) {
  if (prediction.size() != clues.n) throw std::invalid_argument("partial_erase: size mismatch");
  std::vector<bool> bad_row(clues.n), bad_col(clues.n);
  for (int i = 0; i < clues.n; ++i) {
    bad_row[i] = encode_line(prediction.row(i)) != clues.rows[i];
    bad_col[i] = encode_line(prediction.col(i)) != clues.cols[i];
  }
  Board out = prediction;
  for (int r = 0; r < clues.n; ++r)
    for (int c = 0; c < clues.n; ++c)
      if (bad_row[r] || bad_col[c]) out.set(r, c, Cell::Unknown);
  return out;
}

namespace detail {

// Clears lines that differ from the known solution (evaluation-only variant
// of the erase step).
inline Board erase_against_truth(const Board& prediction, const Board& truth) {
  const int n = prediction.size();
  std::vector<bool> bad_row(n), bad_col(n);
  for (int i = 0; i < n; ++i) {
    bad_row[i] = prediction.row(i) != truth.row(i);
    bad_col[i] = prediction.col(i) != truth.col(i);
  }
  Board out = prediction;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (bad_row[r] || bad_col[c]) out.set(r, c, Cell::Unknown);
  return out;
}

inline int cell_difference(const Board& a, const Board& b) {
  int d = 0;
  for (int r = 0; r < a.size(); ++r)
    for (int c = 0; c < a.size(); ++c)
      if (a.at(r, c) != b.at(r, c)) ++d;
  return d;
}

// Depth-first search with trivial-cell propagation. One instance accumulates
// counters across the stages of a solve.
class DfsSearch {
 public:
  DfsSearch(const ClueSet& clues, const SolverConfig& cfg,
            std::chrono::steady_clock::time_point start)
      : clues_(clues), cfg_(cfg), rng_(cfg.rng_seed), start_(start) {}

  // Runs from `board`; `guide` (may be null) is the tri-state prediction used
  // to weight branches. Returns the solution if the subtree contains one.
  std::optional<Board> run(Board board, const Board* guide) {
    guide_ = guide;
    std::vector<char> dirty(static_cast<std::size_t>(2) * clues_.n, 1);
    std::optional<Board> solution;
    dfs(board, dirty, solution);
    return solution;
  }

  bool stopped() const { return stop_ != SolveStatus::Solved; }
  SolveStatus stop_reason() const { return stop_; }
  std::uint64_t iterations() const { return iterations_; }
  std::uint64_t backtracks() const { return backtracks_; }

 private:
  bool limits_hit() {
    if (stop_ != SolveStatus::Solved) return true;
    if (cfg_.node_limit && iterations_ >= *cfg_.node_limit) {
      stop_ = SolveStatus::NodeLimitReached;
      return true;
    }
    if (cfg_.time_limit_seconds) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start_;
      if (spent.count() >= *cfg_.time_limit_seconds) {
        stop_ = SolveStatus::TimeLimitReached;
        return true;
      }
    }
    return false;
  }

  LineMask line_of(const Board& board, int idx) const {
    return idx < clues_.n ? board.row(idx) : board.col(idx - clues_.n);
  }
  const Clue& clue_of(int idx) const {
    return idx < clues_.n ? clues_.rows[idx] : clues_.cols[idx - clues_.n];
  }
  void store_line(Board& board, int idx, const LineMask& line) const {
    idx < clues_.n ? board.set_row(idx, line) : board.set_col(idx - clues_.n, line);
  }

  // Sweeps dirty lines until nothing changes. False means contradiction.
  bool propagate(Board& board, std::vector<char>& dirty) {
    const int n = clues_.n;
    bool pending = true;
    while (pending) {
      if (limits_hit()) return false;
      pending = false;
      for (int idx = 0; idx < 2 * n; ++idx) {
        if (!dirty[idx]) continue;
        dirty[idx] = 0;
        const LineMask line = line_of(board, idx);
        DeduceResult res = deduce_trivial(line, clue_of(idx));
        if (res.contradiction) return false;
        if (!res.changed) continue;
        pending = true;
        for (int p = 0; p < n; ++p) {
          if (res.line[p] == line[p]) continue;
          // mark the crossing line
          dirty[idx < n ? n + p : p] = 1;
        }
        store_line(board, idx, res.line);
      }
    }
    return true;
  }

  bool dfs(Board& board, std::vector<char>& dirty, std::optional<Board>& solution) {
    if (limits_hit()) return false;
    if (!propagate(board, dirty)) return false;
    ++iterations_;

    // Pick the open line with the fewest compatible combinations; ties go to
    // the lowest index, rows before columns.
    int best_idx = -1;
    std::uint64_t best_count = 0;
    for (int idx = 0; idx < 2 * clues_.n; ++idx) {
      const LineMask line = line_of(board, idx);
      if (std::find(line.begin(), line.end(), Cell::Unknown) == line.end()) continue;
      const std::uint64_t count = count_compatible_combinations(line, clue_of(idx));
      if (best_idx < 0 || count < best_count) {
        best_idx = idx;
        best_count = count;
      }
    }
    if (best_idx < 0) {
      solution = board;  // full and propagation-validated
      return true;
    }

    const LineMask line = line_of(board, best_idx);
    std::vector<LineMask> options = line_combinations(line, clue_of(best_idx));
    order_options(options, best_idx);

    for (const LineMask& option : options) {
      Board child = board;
      store_line(child, best_idx, option);
      std::vector<char> child_dirty(dirty.size(), 0);
      for (int p = 0; p < clues_.n; ++p)
        if (option[p] != line[p]) child_dirty[best_idx < clues_.n ? clues_.n + p : p] = 1;
      if (dfs(child, child_dirty, solution)) return true;
      if (stop_ != SolveStatus::Solved) return false;
      ++backtracks_;
    }
    return false;
  }

  // Ascending branch score; candidates tied on score are visited in an order
  // drawn from the seeded generator. Without a guide every score is zero, so
  // the whole list forms one tie group.
  void order_options(std::vector<LineMask>& options, int line_idx) {
    std::vector<int> score(options.size(), 0);
    if (guide_) {
      const LineMask predicted = line_of(*guide_, line_idx);
      for (std::size_t i = 0; i < options.size(); ++i)
        score[i] = weight_combination(options[i], predicted);
    }
    std::vector<std::size_t> order(options.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
    std::size_t lo = 0;
    while (lo < order.size()) {
      std::size_t hi = lo + 1;
      while (hi < order.size() && score[order[hi]] == score[order[lo]]) ++hi;
      rng_.shuffle(order.begin() + lo, order.begin() + hi);
      lo = hi;
    }
    std::vector<LineMask> sorted;
    sorted.reserve(options.size());
    for (std::size_t i : order) sorted.push_back(std::move(options[i]));
    options = std::move(sorted);
  }

  const ClueSet& clues_;
  const SolverConfig& cfg_;
  Rng rng_;
  std::chrono::steady_clock::time_point start_;
  const Board* guide_ = nullptr;
  SolveStatus stop_ = SolveStatus::Solved;  // Solved = no stop requested
  std::uint64_t iterations_ = 0;
  std::uint64_t backtracks_ = 0;
};

}  // namespace detail

// Master solve: prediction stage (when the variant uses a predictor),
// optional partial-erase search, then the full search. H degenerates to the
// plain heuristic DFS from an empty board.
inline SolveReport solve(const ClueSet& clues, const Predictor* predictor, SolverConfig cfg) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.variant = std::string(variant_name(cfg.variant));
  report.rng_seed = cfg.rng_seed;

  std::optional<Board> prediction;    // binarized, in the original frame
  std::optional<Board> guide;         // tri-state intuition mask, original frame

  if (variant_uses_predictor(cfg.variant)) {
    if (!predictor) throw std::invalid_argument("variant requires a predictor");
    if (predictor->board_size() != clues.n)
      throw std::invalid_argument("predictor board size does not match the puzzle");

    if (cfg.use_reflections) {
      int best_bad = -1;
      for (Reflection r : kAllReflections) {
        const ClueSet reflected = apply_to_clues(r, clues);
        const PredictionGrid grid = predictor->predict(reflected);
        const Board guess = binarize(grid);
        if (is_solution(guess, reflected)) {
          report.solution = apply_to_board(inverse(r), guess);
          report.phase = SolvePhase::DirectPrediction;
          break;
        }
        const int bad = inconsistent_line_count(guess, reflected);
        if (best_bad < 0 || bad < best_bad) {
          best_bad = bad;
          prediction = apply_to_board(inverse(r), guess);
          guide = apply_to_board(inverse(r), prediction_mask(grid));
        }
      }
    } else {
      const PredictionGrid grid = predictor->predict(clues);
      const Board guess = binarize(grid);
      if (is_solution(guess, clues)) {
        report.solution = guess;
        report.phase = SolvePhase::DirectPrediction;
      } else {
        prediction = guess;
        guide = prediction_mask(grid);
      }
    }
    if (cfg.ground_truth && (prediction || report.solution))
      report.prediction_errors =
          detail::cell_difference(report.solution ? *report.solution : *prediction, *cfg.ground_truth);
  }

  if (!report.solution) {
    detail::DfsSearch search(clues, cfg, start);
    const Board* mask = cfg.intuition && guide ? &*guide : nullptr;

    if (variant_uses_erase(cfg.variant) && prediction) {
      const Board erased = cfg.erase_by_ground_truth && cfg.ground_truth
                               ? detail::erase_against_truth(*prediction, *cfg.ground_truth)
                               : partial_erase(*prediction, clues);
      if (auto found = search.run(erased, mask)) {
        report.solution = std::move(found);
        report.phase = SolvePhase::PartialEraseSearch;
      }
    }
    if (!report.solution && !search.stopped()) {
      if (auto found = search.run(Board(clues.n, Cell::Unknown), mask)) {
        report.solution = std::move(found);
      }
      report.phase = SolvePhase::FullSearch;
    }
    report.iterations = search.iterations();
    report.backtracks = search.backtracks();
    if (report.solution)
      report.status = SolveStatus::Solved;
    else
      report.status = search.stopped() ? search.stop_reason() : SolveStatus::Unsatisfiable;
  } else {
    report.status = SolveStatus::Solved;
  }

  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// The heuristic baseline: propagation plus depth-first search over the line
// with the fewest compatible combinations.
inline SolveReport solve_h(const ClueSet& clues, SolverConfig cfg = {}) {
  cfg.variant = Variant::H;
  cfg.intuition = false;
  cfg.use_reflections = false;
  return solve(clues, nullptr, cfg);
}

// Prediction first, then the intuition-weighted search from an empty board.
inline SolveReport solve_nehi(const ClueSet& clues, const Predictor& predictor, SolverConfig cfg) {
  if (!variant_uses_intuition(cfg.variant) || variant_uses_erase(cfg.variant)) {
    cfg.variant = cfg.use_reflections ? Variant::Ne8HI : Variant::NeHI;
  }
  cfg.intuition = true;
  return solve(clues, &predictor, cfg);
}

// Prediction, partial-erase search, then full search; intuition per config.
inline SolveReport solve_nehpf(const ClueSet& clues, const Predictor& predictor, SolverConfig cfg) {
  if (!variant_uses_erase(cfg.variant)) {
    cfg.variant = cfg.intuition ? (cfg.use_reflections ? Variant::Ne8HPFI : Variant::NeHPFI)
                                : (cfg.use_reflections ? Variant::Ne8HPF : Variant::NeHPF);
  }
  return solve(clues, &predictor, cfg);
}

// Reflection-ensemble entry: predict each of the eight reflected puzzles,
// solve directly if any prediction checks out, otherwise continue with the
// configured variant on the best prediction mapped back.
inline SolveReport solve_ne8(const ClueSet& clues, const Predictor& predictor, SolverConfig cfg) {
  if (!variant_uses_reflections(cfg.variant)) {
    cfg.variant = variant_uses_erase(cfg.variant)
                      ? (cfg.intuition ? Variant::Ne8HPFI : Variant::Ne8HPF)
                      : Variant::Ne8HI;
  }
  cfg.use_reflections = true;
  return solve(clues, &predictor, cfg);
}

}  // namespace nono
