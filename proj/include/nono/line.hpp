#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "nono/board.hpp"

namespace nono {

// Binomial coefficient, saturating at the uint64 maximum.
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i, staying exact at every step
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num)
      return std::numeric_limits<std::uint64_t>::max();
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

// Number of placements of the clue's blocks in a blank line:
// C(length - sum + 1, #blocks). Zero when the blocks do not fit, one for the
// empty clue.
inline std::uint64_t count_line_combinations(int length, const Clue& clue) {
  if (clue.blocks.empty()) return 1;
  if (!clue.fits(length)) return 0;
  return binomial(length - clue.sum() + 1, static_cast<int>(clue.blocks.size()));
}

namespace detail {

// Recursively places blocks[bi..] at start positions >= pos, honoring the
// determined cells of `mask`. Positions ascend, so completed lines come out
// in lexicographic order of leftmost block starts. The visitor receives each
// complete line; returning false stops the enumeration.
template <typename Visitor>
bool place_blocks(const LineMask& mask, const Clue& clue, std::size_t bi, int pos,
                  std::vector<int>& starts, LineMask& scratch, Visitor& visit) {
  const int length = static_cast<int>(mask.size());
  if (bi == clue.blocks.size()) {
    for (int i = pos; i < length; ++i)
      if (mask[i] == Cell::Filled) return true;  // leftover filled cell: dead end
    for (int i = 0; i < length; ++i) scratch[i] = Cell::Empty;
    for (std::size_t b = 0; b < starts.size(); ++b)
      for (int i = 0; i < clue.blocks[b]; ++i) scratch[starts[b] + i] = Cell::Filled;
    return visit(const_cast<const LineMask&>(scratch));
  }

  int span = clue.blocks[bi];
  for (std::size_t b = bi + 1; b < clue.blocks.size(); ++b) span += clue.blocks[b] + 1;
  const int len = clue.blocks[bi];

  for (int s = pos; s + span <= length; ++s) {
    // The block must cover the first Filled cell at or beyond pos.
    if (s > pos && mask[s - 1] == Cell::Filled) break;
    bool ok = true;
    for (int i = s; i < s + len; ++i) {
      if (mask[i] == Cell::Empty) {
        ok = false;
        break;
      }
    }
    // A maximal run may not touch a Filled cell on its right.
    if (ok && s + len < length && mask[s + len] == Cell::Filled) ok = false;
    if (ok) {
      starts.push_back(s);
      const bool keep = place_blocks(mask, clue, bi + 1, s + len + 1, starts, scratch, visit);
      starts.pop_back();
      if (!keep) return false;
    }
  }
  return true;
}

}  // namespace detail

// Streams every complete line consistent with both the clue and the already
// determined cells of `line`, lexicographically by block start positions.
// Returns false if the visitor stopped the enumeration early.
template <typename Visitor>
bool for_each_line_combination(const LineMask& line, const Clue& clue, Visitor&& visit) {
  std::vector<int> starts;
  starts.reserve(clue.blocks.size());
  LineMask scratch(line.size());
  return detail::place_blocks(line, clue, 0, 0, starts, scratch, visit);
}

// Eager form of the enumeration; an empty result signals a contradiction.
// Intended for lines whose combination count is moderate (the solver streams
// through for_each_line_combination and never materializes large lines).
inline std::vector<LineMask> line_combinations(const LineMask& line, const Clue& clue) {
  std::vector<LineMask> out;
  for_each_line_combination(line, clue, [&](const LineMask& comb) {
    out.push_back(comb);
    return true;
  });
  return out;
}

// Number of complete lines compatible with the clue and the determined cells,
// via a memoized placement count. Equals line_combinations(...).size()
// without materializing anything; used for branch ordering.
inline std::uint64_t count_compatible_combinations(const LineMask& line, const Clue& clue) {
  const int length = static_cast<int>(line.size());
  const int k = static_cast<int>(clue.blocks.size());

  // filled_after[i]: is there a Filled cell at index >= i
  std::vector<char> filled_after(length + 1, 0);
  for (int i = length - 1; i >= 0; --i)
    filled_after[i] = filled_after[i + 1] || line[i] == Cell::Filled;

  if (k == 0) return filled_after[0] ? 0 : 1;

  std::vector<int> span_from(k);
  span_from[k - 1] = clue.blocks[k - 1];
  for (int b = k - 2; b >= 0; --b) span_from[b] = clue.blocks[b] + 1 + span_from[b + 1];

  constexpr std::uint64_t kUnset = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> memo(static_cast<std::size_t>(k + 1) * (length + 2), kUnset);
  const auto idx = [length](int bi, int pos) {
    return static_cast<std::size_t>(bi) * (length + 2) + pos;
  };

  const auto ways = [&](auto&& self, int bi, int pos) -> std::uint64_t {
    if (pos > length) pos = length;
    if (bi == k) return filled_after[pos] ? 0 : 1;
    std::uint64_t& slot = memo[idx(bi, pos)];
    if (slot != kUnset) return slot;
    std::uint64_t total = 0;
    const int len = clue.blocks[bi];
    for (int s = pos; s + span_from[bi] <= length; ++s) {
      if (s > pos && line[s - 1] == Cell::Filled) break;
      bool ok = true;
      for (int i = s; i < s + len; ++i) {
        if (line[i] == Cell::Empty) {
          ok = false;
          break;
        }
      }
      if (ok && s + len < length && line[s + len] == Cell::Filled) ok = false;
      if (ok) total += self(self, bi + 1, s + len + 1);
    }
    slot = total;
    return total;
  };
  return ways(ways, 0, 0);
}

struct DeduceResult {
  LineMask line;
  bool changed = false;
  bool contradiction = false;
};

// Fixes every Unknown cell that carries the same value in all compatible
// combinations. Zero compatible combinations is reported as a contradiction,
// not an error; determined cells are never touched.
inline DeduceResult deduce_trivial(const LineMask& line, const Clue& clue) {
  const int length = static_cast<int>(line.size());
  DeduceResult result{line, false, false};

  std::vector<char> always_filled(length, 1), always_empty(length, 1);
  bool any = false;
  for_each_line_combination(line, clue, [&](const LineMask& comb) {
    any = true;
    int open = 0;
    for (int i = 0; i < length; ++i) {
      if (comb[i] == Cell::Filled)
        always_empty[i] = 0;
      else
        always_filled[i] = 0;
      if (line[i] == Cell::Unknown && (always_filled[i] || always_empty[i])) ++open;
    }
    return open > 0;  // nothing forcible left: stop streaming
  });

  if (!any) {
    result.contradiction = true;
    return result;
  }
  for (int i = 0; i < length; ++i) {
    if (line[i] != Cell::Unknown) continue;
    if (always_filled[i]) {
      result.line[i] = Cell::Filled;
      result.changed = true;
    } else if (always_empty[i]) {
      result.line[i] = Cell::Empty;
      result.changed = true;
    }
  }
  return result;
}

}  // namespace nono
