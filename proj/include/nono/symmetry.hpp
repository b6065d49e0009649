#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "nono/board.hpp"

namespace nono {

// The eight grid reflections. Two-letter codes: lowercase r/c read rows or
// columns in natural order, uppercase in reverse; the first letter says what
// the output rows are read from. rc is the identity, cr the transpose, Rc and
// rC the vertical/horizontal mirror, the rest their composites.
enum class Reflection : int { rc = 0, cr, rC, Rc, cR, Cr, RC, CR };

inline constexpr std::array<Reflection, 8> kAllReflections = {
    Reflection::rc, Reflection::cr, Reflection::rC, Reflection::Rc,
    Reflection::cR, Reflection::Cr, Reflection::RC, Reflection::CR};

inline std::string_view reflection_name(Reflection r) {
  static constexpr std::array<std::string_view, 8> names = {"rc", "cr", "rC", "Rc",
                                                            "cR", "Cr", "RC", "CR"};
  return names[static_cast<int>(r)];
}

inline Reflection reflection_from_name(std::string_view name) {
  for (Reflection r : kAllReflections)
    if (reflection_name(r) == name) return r;
  throw std::invalid_argument("unknown reflection '" + std::string(name) + "'");
}

namespace detail {

// Source-coordinate map: output (i, j) reads input (p, q) where (p, q) starts
// as (i, j), optionally transposed, then flipped per axis.
struct CoordMap {
  bool transpose, flip_r, flip_c;

  std::pair<int, int> source(int i, int j, int n) const {
    int p = transpose ? j : i;
    int q = transpose ? i : j;
    if (flip_r) p = n - 1 - p;
    if (flip_c) q = n - 1 - q;
    return {p, q};
  }
};

inline constexpr std::array<CoordMap, 8> kCoordMaps = {{
    {false, false, false},  // rc
    {true, false, false},   // cr
    {false, false, true},   // rC
    {false, true, false},   // Rc
    {true, true, false},    // cR
    {true, false, true},    // Cr
    {false, true, true},    // RC
    {true, true, true},     // CR
}};

// The 8x8 group table is derived by brute force on a marker grid rather than
// transcribed, once, at first use.
inline const std::array<std::array<Reflection, 8>, 8>& composition_table() {
  static const std::array<std::array<Reflection, 8>, 8> table = [] {
    constexpr int n = 4;
    const auto apply = [](const CoordMap& m, const std::array<int, n * n>& grid) {
      std::array<int, n * n> out{};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const auto [p, q] = m.source(i, j, n);
          out[i * n + j] = grid[p * n + q];
        }
      return out;
    };
    std::array<int, n * n> marker{};
    for (int i = 0; i < n * n; ++i) marker[i] = i;

    std::array<std::array<Reflection, 8>, 8> t{};
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        const auto combined = apply(kCoordMaps[a], apply(kCoordMaps[b], marker));
        bool found = false;
        for (int c = 0; c < 8; ++c) {
          if (apply(kCoordMaps[c], marker) == combined) {
            t[a][b] = static_cast<Reflection>(c);
            found = true;
            break;
          }
        }
        if (!found) throw std::logic_error("reflection composition left the group");
      }
    }
    return t;
  }();
  return table;
}

}  // namespace detail

inline Board apply_to_board(Reflection r, const Board& board) {
  const int n = board.size();
  const auto& map = detail::kCoordMaps[static_cast<int>(r)];
  Board out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto [p, q] = map.source(i, j, n);
      out.set(i, j, board.at(p, q));
    }
  return out;
}

// Acts on headers so that encoding commutes with the board transform:
// a transpose swaps the row and column lists; mirroring one axis reverses the
// order of that axis' headers and the block sequence of the other axis'.
inline ClueSet apply_to_clues(Reflection r, const ClueSet& clues) {
  const int n = clues.n;
  const auto& map = detail::kCoordMaps[static_cast<int>(r)];
  const auto pick = [n](const std::vector<Clue>& v, bool flip, int i) {
    return v[flip ? n - 1 - i : i];
  };
  const auto reversed = [](Clue c) {
    std::reverse(c.blocks.begin(), c.blocks.end());
    return c;
  };

  ClueSet out;
  out.n = n;
  out.rows.reserve(n);
  out.cols.reserve(n);
  for (int i = 0; i < n; ++i) {
    Clue row = map.transpose ? pick(clues.cols, map.flip_c, i) : pick(clues.rows, map.flip_r, i);
    if (map.transpose ? map.flip_r : map.flip_c) row = reversed(row);
    out.rows.push_back(std::move(row));
  }
  for (int j = 0; j < n; ++j) {
    Clue col = map.transpose ? pick(clues.rows, map.flip_r, j) : pick(clues.cols, map.flip_c, j);
    if (map.transpose ? map.flip_c : map.flip_r) col = reversed(col);
    out.cols.push_back(std::move(col));
  }
  return out;
}

// Group product: apply b first, then a.
inline Reflection compose(Reflection a, Reflection b) {
  return detail::composition_table()[static_cast<int>(a)][static_cast<int>(b)];
}

inline Reflection inverse(Reflection r) {
  for (Reflection s : kAllReflections)
    if (compose(r, s) == Reflection::rc) return s;
  throw std::logic_error("reflection without inverse");  // unreachable
}

}  // namespace nono
