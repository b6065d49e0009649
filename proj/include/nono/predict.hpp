#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "nono/board.hpp"

namespace nono {

// Per-cell fill probabilities, row-major.
struct PredictionGrid {
  int n = 0;
  std::vector<double> p;

  PredictionGrid() = default;
  PredictionGrid(int n_, std::vector<double> probs) : n(n_), p(std::move(probs)) {
    if (p.size() != static_cast<std::size_t>(n) * n)
      throw std::invalid_argument("prediction grid size mismatch");
  }

  double at(int r, int c) const { return p[static_cast<std::size_t>(r) * n + c]; }
};

// Anything that maps headers to cell probabilities. Solvers only see this
// interface, so tests can plug in stubs and adversaries; the MLP is one
// implementation. Implementations must be safe for concurrent read-only use.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual int board_size() const = 0;
  virtual PredictionGrid predict(const ClueSet& clues) const = 0;
};

// Probability >= threshold binarizes to Filled (ties fill).
inline Board binarize(const PredictionGrid& grid, double threshold = 0.5) {
  Board board(grid.n);
  for (int r = 0; r < grid.n; ++r)
    for (int c = 0; c < grid.n; ++c)
      board.set(r, c, grid.at(r, c) >= threshold ? Cell::Filled : Cell::Empty);
  return board;
}

// Tri-state view of a prediction for branch weighting: probability exactly
// 0.5 carries no signal and maps to Unknown.
inline Board prediction_mask(const PredictionGrid& grid) {
  Board board(grid.n);
  for (int r = 0; r < grid.n; ++r)
    for (int c = 0; c < grid.n; ++c) {
      const double v = grid.at(r, c);
      board.set(r, c, v > 0.5 ? Cell::Filled : v < 0.5 ? Cell::Empty : Cell::Unknown);
    }
  return board;
}

}  // namespace nono
