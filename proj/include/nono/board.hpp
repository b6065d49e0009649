#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nono {

// A cell is tri-state while a puzzle is being solved; finished boards are
// binary (Filled/Empty only).
enum class Cell : std::uint8_t { Unknown = 0, Filled = 1, Empty = 2 };

inline char cell_char(Cell c) {
  switch (c) {
    case Cell::Unknown: return '?';
    case Cell::Filled: return '#';
    case Cell::Empty: return '.';
  }
  throw std::invalid_argument("invalid cell value");
}

inline Cell cell_from_char(char ch) {
  switch (ch) {
    case '?': return Cell::Unknown;
    case '#': return Cell::Filled;
    case '.': return Cell::Empty;
    default: break;
  }
  throw std::invalid_argument(std::string("invalid board character '") + ch + "'");
}

// One row or column extracted from a board.
using LineMask = std::vector<Cell>;

// Block lengths of one line header, in order. An all-empty line has no
// blocks; it is serialized as "0" / [] where a textual form is needed.
struct Clue {
  std::vector<int> blocks;

  Clue() = default;
  Clue(std::initializer_list<int> b) : blocks(b) {}
  explicit Clue(std::vector<int> b) : blocks(std::move(b)) {}

  int sum() const { return std::accumulate(blocks.begin(), blocks.end(), 0); }

  // Minimum line length able to hold the blocks (one gap between each pair).
  int min_span() const {
    if (blocks.empty()) return 0;
    return sum() + static_cast<int>(blocks.size()) - 1;
  }

  bool fits(int length) const { return min_span() <= length; }

  friend bool operator==(const Clue&, const Clue&) = default;
  friend auto operator<=>(const Clue&, const Clue&) = default;
};

struct ClueSet {
  int n = 0;
  std::vector<Clue> rows;  // top to bottom
  std::vector<Clue> cols;  // left to right

  int row_filled_total() const {
    int t = 0;
    for (const auto& c : rows) t += c.sum();
    return t;
  }
  int col_filled_total() const {
    int t = 0;
    for (const auto& c : cols) t += c.sum();
    return t;
  }
  // Disagreement implies the clue set is unsatisfiable.
  bool totals_match() const { return row_filled_total() == col_filled_total(); }

  friend bool operator==(const ClueSet&, const ClueSet&) = default;
};

// Square tri-state board, row-major, zero-based (row, col) addressing.
class Board {
 public:
  Board() = default;
  explicit Board(int n, Cell init = Cell::Unknown) : n_(n), cells_(static_cast<std::size_t>(n) * n, init) {
    if (n < 1) throw std::invalid_argument("board side must be >= 1");
  }

  int size() const { return n_; }

  Cell at(int r, int c) const { return cells_[static_cast<std::size_t>(r) * n_ + c]; }
  void set(int r, int c, Cell v) { cells_[static_cast<std::size_t>(r) * n_ + c] = v; }

  bool is_full() const {
    for (Cell c : cells_)
      if (c == Cell::Unknown) return false;
    return true;
  }

  int count(Cell v) const {
    int k = 0;
    for (Cell c : cells_)
      if (c == v) ++k;
    return k;
  }

  LineMask row(int r) const {
    return LineMask(cells_.begin() + static_cast<std::ptrdiff_t>(r) * n_,
                    cells_.begin() + static_cast<std::ptrdiff_t>(r + 1) * n_);
  }

  LineMask col(int c) const {
    LineMask line(n_);
    for (int r = 0; r < n_; ++r) line[r] = at(r, c);
    return line;
  }

  void set_row(int r, const LineMask& line) {
    for (int c = 0; c < n_; ++c) set(r, c, line[c]);
  }

  void set_col(int c, const LineMask& line) {
    for (int r = 0; r < n_; ++r) set(r, c, line[r]);
  }

  const std::vector<Cell>& cells() const { return cells_; }

  friend bool operator==(const Board&, const Board&) = default;

 private:
  int n_ = 0;
  std::vector<Cell> cells_;
};

// Run-length encoding of a fully determined line: the ordered lengths of its
// maximal Filled runs.
inline Clue encode_line(const LineMask& line) {
  Clue clue;
  int run = 0;
  for (Cell c : line) {
    if (c == Cell::Unknown) throw std::invalid_argument("encode_line: line has undetermined cells");
    if (c == Cell::Filled) {
      ++run;
    } else if (run > 0) {
      clue.blocks.push_back(run);
      run = 0;
    }
  }
  if (run > 0) clue.blocks.push_back(run);
  return clue;
}

inline ClueSet encode_board(const Board& board) {
  ClueSet cs;
  cs.n = board.size();
  cs.rows.reserve(cs.n);
  cs.cols.reserve(cs.n);
  for (int r = 0; r < cs.n; ++r) cs.rows.push_back(encode_line(board.row(r)));
  for (int c = 0; c < cs.n; ++c) cs.cols.push_back(encode_line(board.col(c)));
  return cs;
}

// True iff the board is fully determined and encodes exactly to `clues`.
// Any header-compatible board counts as a solution.
inline bool is_solution(const Board& board, const ClueSet& clues) {
  if (board.size() != clues.n || !board.is_full()) return false;
  return encode_board(board) == clues;
}

inline std::string format_board(const Board& board) {
  std::string out;
  out.reserve(static_cast<std::size_t>(board.size()) * (board.size() + 1));
  for (int r = 0; r < board.size(); ++r) {
    for (int c = 0; c < board.size(); ++c) out += cell_char(board.at(r, c));
    out += '\n';
  }
  return out;
}

// Parses the text grid format: one row per line, '#'/'.'/'?', square only.
inline Board parse_board(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string row;
  while (std::getline(in, row)) {
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (!row.empty()) lines.push_back(row);
  }
  if (lines.empty()) throw std::invalid_argument("parse_board: empty input");
  const int n = static_cast<int>(lines.size());
  Board board(n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(lines[r].size()) != n)
      throw std::invalid_argument("parse_board: board must be square");
    for (int c = 0; c < n; ++c) board.set(r, c, cell_from_char(lines[r][c]));
  }
  return board;
}

}  // namespace nono
