#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nono/board.hpp"

namespace nono {

// 2^(n*n) as an exact decimal string (the board-space cardinality grows past
// 64 bits at n = 9).
inline std::string count_boards(int n) {
  if (n < 1) throw std::invalid_argument("count_boards: n must be >= 1");
  const int exponent = n * n;
  std::vector<std::uint32_t> digits{1};  // base 1e9, little-endian
  for (int e = 0; e < exponent; ++e) {
    std::uint32_t carry = 0;
    for (auto& d : digits) {
      const std::uint64_t v = 2ull * d + carry;
      d = static_cast<std::uint32_t>(v % 1000000000ull);
      carry = static_cast<std::uint32_t>(v / 1000000000ull);
    }
    if (carry) digits.push_back(carry);
  }
  std::string out = std::to_string(digits.back());
  for (auto it = digits.rbegin() + 1; it != digits.rend(); ++it) {
    std::string part = std::to_string(*it);
    out += std::string(9 - part.size(), '0') + part;
  }
  return out;
}

inline std::uint64_t count_boards_u64(int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("count_boards_u64: need 1 <= n <= 7");
  return 1ull << (n * n);
}

// |Psi_n|: the number of distinct clue sets over all 2^(n*n) boards.
// Exhausts the whole board space, so n > 5 is rejected unless the caller
// overrides the guard (and accepts the memory bill: the key buffer holds one
// 64-bit word per board).
inline std::uint64_t count_valid_clue_sets(int n, bool allow_large = false) {
  if (n < 1) throw std::invalid_argument("count_valid_clue_sets: n must be >= 1");
  if (n > 5 && !allow_large)
    throw std::invalid_argument("count_valid_clue_sets: n > 5 needs allow_large (2^(n*n) boards)");

  // Map each of the 2^n line patterns to a small clue id. Bit i of a pattern
  // is cell i of the line, so the table serves rows and columns alike.
  const std::uint32_t patterns = 1u << n;
  std::map<Clue, std::uint32_t> ids;
  std::vector<std::uint32_t> clue_id(patterns);
  for (std::uint32_t p = 0; p < patterns; ++p) {
    LineMask line(n);
    for (int i = 0; i < n; ++i) line[i] = (p >> i) & 1u ? Cell::Filled : Cell::Empty;
    const Clue clue = encode_line(line);
    auto [it, inserted] = ids.try_emplace(clue, static_cast<std::uint32_t>(ids.size()));
    clue_id[p] = it->second;
  }
  int bits = 1;
  while ((1u << bits) < ids.size()) ++bits;
  if (bits * 2 * n > 64)
    throw std::invalid_argument("count_valid_clue_sets: clue-set key exceeds 64 bits");

  const std::uint64_t total = 1ull << (n * n);
  const std::uint32_t mask = patterns - 1;
  std::vector<std::uint64_t> keys;
  keys.reserve(total);
  for (std::uint64_t b = 0; b < total; ++b) {
    std::uint64_t key = 0;
    std::uint32_t row_bits[8];
    for (int r = 0; r < n; ++r) {
      row_bits[r] = static_cast<std::uint32_t>(b >> (n * r)) & mask;
      key = (key << bits) | clue_id[row_bits[r]];
    }
    for (int c = 0; c < n; ++c) {
      std::uint32_t col = 0;
      for (int r = 0; r < n; ++r) col |= ((row_bits[r] >> c) & 1u) << r;
      key = (key << bits) | clue_id[col];
    }
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<std::uint64_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

// |Psi_n| / |Omega_n|, defined for the exhaustively countable sizes.
inline double clue_set_ratio(int n, bool allow_large = false) {
  return static_cast<double>(count_valid_clue_sets(n, allow_large)) /
         static_cast<double>(count_boards_u64(n));
}

}  // namespace nono
