#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "nono/board.hpp"
#include "nono/predict.hpp"
#include "nono/rng.hpp"
#include "nono/solve.hpp"

namespace nono {

// Board quality: correct columns + correct rows + (n*n) * progress toward the
// required filled-cell count. A clue set demanding zero filled cells scores
// the full progress term only on an empty board.
inline double fitness(const Board& board, const ClueSet& clues) {
  if (board.size() != clues.n) throw std::invalid_argument("fitness: size mismatch");
  int correct_cols = 0, correct_rows = 0;
  for (int i = 0; i < clues.n; ++i) {
    if (encode_line(board.col(i)) == clues.cols[i]) ++correct_cols;
    if (encode_line(board.row(i)) == clues.rows[i]) ++correct_rows;
  }
  const int marked = board.count(Cell::Filled);
  const int required = clues.row_filled_total();
  const double cells = static_cast<double>(clues.n) * clues.n;
  double progress;
  if (required == 0)
    progress = marked == 0 ? cells : 0.0;
  else
    progress = cells * static_cast<double>(marked) / static_cast<double>(required);
  return correct_cols + correct_rows + progress;
}

namespace detail {

inline std::vector<int> positions_of(const Board& board, Cell v) {
  std::vector<int> idx;
  for (int i = 0; i < board.size() * board.size(); ++i)
    if (board.cells()[i] == v) idx.push_back(i);
  return idx;
}

inline void set_flat(Board& board, int flat, Cell v) {
  board.set(flat / board.size(), flat % board.size(), v);
}

}  // namespace detail

// Applies k ~ U{0..4} single-cell mutations. Each one compares the current
// filled count against the clue requirement: too few fills a random empty
// cell, too many empties a random filled cell, equal moves a filled cell to
// an empty position. Degenerate boards (nothing to fill or empty) skip the
// mutation.
inline Board mutate(const Board& board, const ClueSet& clues, Rng& rng) {
  Board out = board;
  const int required = clues.row_filled_total();
  const int k = rng.range_int(0, 4);
  for (int m = 0; m < k; ++m) {
    const int marked = out.count(Cell::Filled);
    if (marked < required) {
      const auto empties = detail::positions_of(out, Cell::Empty);
      if (empties.empty()) continue;
      detail::set_flat(out, empties[rng.below(empties.size())], Cell::Filled);
    } else if (marked > required) {
      const auto fills = detail::positions_of(out, Cell::Filled);
      if (fills.empty()) continue;
      detail::set_flat(out, fills[rng.below(fills.size())], Cell::Empty);
    } else {
      const auto fills = detail::positions_of(out, Cell::Filled);
      const auto empties = detail::positions_of(out, Cell::Empty);
      if (fills.empty() || empties.empty()) continue;
      detail::set_flat(out, fills[rng.below(fills.size())], Cell::Empty);
      detail::set_flat(out, empties[rng.below(empties.size())], Cell::Filled);
    }
  }
  return out;
}

struct Individual {
  Board board;
  double fitness = 0.0;
};

namespace detail {

// Roulette pick against a precomputed fitness total.
inline std::size_t select_index(const std::vector<Individual>& population, double total, Rng& rng) {
  if (population.empty()) throw std::invalid_argument("select: empty population");
  if (total <= 0.0) return rng.below(population.size());  // all-zero fallback: uniform
  const double w = rng.unit() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < population.size(); ++i) {
    cumulative += population[i].fitness;
    if (cumulative > w) return i;
  }
  return population.size() - 1;  // numeric edge: w landed at the very top
}

}  // namespace detail

// Fitness-proportional roulette selection; an all-zero-fitness population
// falls back to a uniform pick.
inline const Individual& select(const std::vector<Individual>& population, Rng& rng) {
  double total = 0.0;
  for (const Individual& ind : population) total += ind.fitness;
  return population[detail::select_index(population, total, rng)];
}

struct GaConfig {
  int population_size = 1000;
  int max_generations = 100;
  std::uint64_t rng_seed = 0;
  int elitism = 1;  // best parents carried into the next generation
  // Replace the worst individual as each child arrives instead of swapping
  // whole generations.
  bool steady_state = false;
};

// Mutation-only genetic search seeded from the predictor's board (or an empty
// board without one). The report's iterations field counts generations.
inline SolveReport run_ga(const ClueSet& clues, const Predictor* predictor, const GaConfig& cfg) {
  if (cfg.population_size < 2) throw std::invalid_argument("run_ga: population must be >= 2");
  if (cfg.elitism < 0 || cfg.elitism >= cfg.population_size)
    throw std::invalid_argument("run_ga: elitism must be < population size");

  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.variant = "GA";
  report.rng_seed = cfg.rng_seed;
  const auto finish = [&](SolveStatus status) {
    report.status = status;
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  Rng rng(cfg.rng_seed);
  Board seed(clues.n, Cell::Empty);
  if (predictor) {
    if (predictor->board_size() != clues.n)
      throw std::invalid_argument("run_ga: predictor board size does not match the puzzle");
    seed = binarize(predictor->predict(clues));
  }
  if (is_solution(seed, clues)) {
    report.solution = seed;
    report.phase = SolvePhase::DirectPrediction;
    return finish(SolveStatus::Solved);
  }
  report.phase = SolvePhase::FullSearch;

  std::vector<Individual> population;
  population.reserve(cfg.population_size);
  population.push_back({seed, fitness(seed, clues)});
  for (int i = 1; i < cfg.population_size; ++i) {
    Board b = mutate(seed, clues, rng);
    population.push_back({std::move(b), 0.0});
    population.back().fitness = fitness(population.back().board, clues);
  }

  std::vector<Individual> children;
  children.reserve(cfg.population_size);
  for (int gen = 1; gen <= cfg.max_generations; ++gen) {
    report.iterations = static_cast<std::uint64_t>(gen);
    double total = 0.0;
    for (const Individual& ind : population) total += ind.fitness;
    children.clear();
    for (int slot = 0; slot < cfg.population_size; ++slot) {
      const Individual& parent = population[detail::select_index(population, total, rng)];
      Board child = mutate(parent.board, clues, rng);
      if (is_solution(child, clues)) {
        report.solution = std::move(child);
        return finish(SolveStatus::Solved);
      }
      const double f = fitness(child, clues);
      if (cfg.steady_state) {
        auto worst = std::min_element(population.begin(), population.end(),
                                      [](const Individual& a, const Individual& b) {
                                        return a.fitness < b.fitness;
                                      });
        if (f > worst->fitness) {
          worst->board = std::move(child);
          worst->fitness = f;
          total = 0.0;
          for (const Individual& ind : population) total += ind.fitness;
        }
      } else {
        children.push_back({std::move(child), f});
      }
    }
    if (!cfg.steady_state) {
      // Keep the elitism-best parents, fill the rest with this generation's
      // children in creation order.
      std::vector<std::size_t> order(population.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return population[a].fitness > population[b].fitness;
      });
      std::vector<Individual> next;
      next.reserve(cfg.population_size);
      for (int e = 0; e < cfg.elitism; ++e) next.push_back(population[order[e]]);
      for (std::size_t c = 0; next.size() < static_cast<std::size_t>(cfg.population_size); ++c)
        next.push_back(std::move(children[c]));
      population = std::move(next);
    }
  }
  return finish(SolveStatus::GenerationLimitReached);
}

}  // namespace nono
