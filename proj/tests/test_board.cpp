#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "nono/board.hpp"
#include "nono/line.hpp"
#include "nono/rng.hpp"

using namespace nono;

namespace {

LineMask make_line(const std::string& text) {
  LineMask line;
  for (char ch : text) line.push_back(cell_from_char(ch));
  return line;
}

// Test-only oracle: enumerate all 2^length binary lines, keep the ones that
// agree with the determined cells and encode to the clue.
std::vector<LineMask> brute_force_lines(const LineMask& mask, const Clue& clue) {
  const int length = static_cast<int>(mask.size());
  std::vector<LineMask> out;
  for (std::uint32_t bits = 0; bits < (1u << length); ++bits) {
    LineMask candidate(length);
    bool compatible = true;
    for (int i = 0; i < length; ++i) {
      candidate[i] = (bits >> i) & 1u ? Cell::Filled : Cell::Empty;
      if (mask[i] != Cell::Unknown && mask[i] != candidate[i]) compatible = false;
    }
    if (compatible && encode_line(candidate) == clue) out.push_back(candidate);
  }
  return out;
}

Board random_full_board(int n, Rng& rng) {
  Board board(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) board.set(r, c, rng.unit() < 0.5 ? Cell::Filled : Cell::Empty);
  return board;
}

Clue random_clue(int length, Rng& rng) {
  Clue clue;
  int space = rng.range_int(0, length);
  while (space > 0) {
    const int block = rng.range_int(1, space);
    clue.blocks.push_back(block);
    space -= block + 1;
  }
  return clue;
}

}  // namespace

TEST_CASE("encode_line produces maximal runs in order", "[board]") {
  CHECK(encode_line(make_line("###..")) == Clue{3});
  CHECK(encode_line(make_line(".....")) == Clue{});
  CHECK(encode_line(make_line("#.##.")) == Clue{1, 2});
  CHECK(encode_line(make_line("#")) == Clue{1});
  CHECK_THROWS_AS(encode_line(make_line("##?..")), std::invalid_argument);
}

TEST_CASE("encode_board encodes rows then columns", "[board]") {
  Board all_filled(2, Cell::Filled);
  ClueSet cs = encode_board(all_filled);
  CHECK(cs.rows == std::vector<Clue>{Clue{2}, Clue{2}});
  CHECK(cs.cols == std::vector<Clue>{Clue{2}, Clue{2}});

  Board diag(2, Cell::Empty);
  diag.set(0, 0, Cell::Filled);
  diag.set(1, 1, Cell::Filled);
  cs = encode_board(diag);
  CHECK(cs.rows == std::vector<Clue>{Clue{1}, Clue{1}});
  CHECK(cs.cols == std::vector<Clue>{Clue{1}, Clue{1}});

  Board with_unknown(2);
  CHECK_THROWS_AS(encode_board(with_unknown), std::invalid_argument);
}

TEST_CASE("encode_board on a hand-transcribed 5x5 figure", "[board]") {
  const Board heart = parse_board(
      ".#.#.\n"
      "#####\n"
      "#####\n"
      ".###.\n"
      "..#..\n");
  const ClueSet cs = encode_board(heart);
  CHECK(cs.rows == std::vector<Clue>{Clue{1, 1}, Clue{5}, Clue{5}, Clue{3}, Clue{1}});
  CHECK(cs.cols == std::vector<Clue>{Clue{2}, Clue{4}, Clue{4}, Clue{4}, Clue{2}});
}

TEST_CASE("count_line_combinations closed form", "[line]") {
  CHECK(count_line_combinations(5, Clue{3}) == 3);
  CHECK(count_line_combinations(5, Clue{5}) == 1);
  CHECK(count_line_combinations(5, Clue{1, 1, 1}) == 1);
  CHECK(count_line_combinations(10, Clue{2, 3}) == 15);  // frozen from the brute-force oracle
  CHECK(count_line_combinations(10, Clue{2, 3}) == brute_force_lines(LineMask(10, Cell::Unknown), Clue{2, 3}).size());
  CHECK(count_line_combinations(5, Clue{}) == 1);
  CHECK(count_line_combinations(3, Clue{2, 2}) == 0);  // does not fit
}

TEST_CASE("line_combinations respects the determined cells", "[line]") {
  CHECK(line_combinations(LineMask(5, Cell::Unknown), Clue{3}).size() == 3);

  const auto anchored = line_combinations(make_line("#????"), Clue{3});
  REQUIRE(anchored.size() == 1);
  CHECK(anchored[0] == make_line("###.."));

  CHECK(line_combinations(make_line("..???"), Clue{4}).empty());
}

TEST_CASE("line_combinations is lexicographic by block starts", "[line]") {
  const auto combs = line_combinations(LineMask(5, Cell::Unknown), Clue{3});
  REQUIRE(combs.size() == 3);
  CHECK(combs[0] == make_line("###.."));
  CHECK(combs[1] == make_line(".###."));
  CHECK(combs[2] == make_line("..###"));
}

TEST_CASE("line enumeration matches brute force on random masked lines", "[line][oracle]") {
  Rng rng(20240915);
  for (int trial = 0; trial < 400; ++trial) {
    const int length = rng.range_int(1, 10);
    LineMask mask(length);
    for (auto& cell : mask) {
      const int pick = rng.range_int(0, 3);
      cell = pick == 0 ? Cell::Filled : pick == 1 ? Cell::Empty : Cell::Unknown;
    }
    const Clue clue = random_clue(length, rng);
    const auto expected = brute_force_lines(mask, clue);
    auto actual = line_combinations(mask, clue);
    CHECK(actual.size() == expected.size());
    CHECK(count_compatible_combinations(mask, clue) == expected.size());
    std::sort(actual.begin(), actual.end());
    auto sorted_expected = expected;
    std::sort(sorted_expected.begin(), sorted_expected.end());
    CHECK(actual == sorted_expected);
  }
}

TEST_CASE("deduce_trivial fixes cells shared by all combinations", "[line]") {
  const auto center = deduce_trivial(LineMask(5, Cell::Unknown), Clue{3});
  CHECK_FALSE(center.contradiction);
  CHECK(center.changed);
  CHECK(center.line == make_line("??#??"));

  const auto full = deduce_trivial(LineMask(5, Cell::Unknown), Clue{5});
  CHECK(full.line == make_line("#####"));

  const auto dead = deduce_trivial(make_line("..???"), Clue{4});
  CHECK(dead.contradiction);
}

TEST_CASE("deduce_trivial is idempotent and preserves determined cells", "[line]") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int length = rng.range_int(1, 12);
    LineMask mask(length);
    for (auto& cell : mask) {
      const int pick = rng.range_int(0, 3);
      cell = pick == 0 ? Cell::Filled : pick == 1 ? Cell::Empty : Cell::Unknown;
    }
    const Clue clue = random_clue(length, rng);
    const auto once = deduce_trivial(mask, clue);
    if (once.contradiction) continue;
    for (int i = 0; i < length; ++i)
      if (mask[i] != Cell::Unknown) CHECK(once.line[i] == mask[i]);
    const auto twice = deduce_trivial(once.line, clue);
    CHECK_FALSE(twice.contradiction);
    CHECK_FALSE(twice.changed);
    CHECK(twice.line == once.line);
  }
}

TEST_CASE("is_solution accepts any header-compatible full board", "[board]") {
  Board filled(2, Cell::Filled);
  ClueSet cs = encode_board(filled);
  CHECK(is_solution(filled, cs));

  Board partial(2, Cell::Filled);
  partial.set(0, 0, Cell::Unknown);
  CHECK_FALSE(is_solution(partial, cs));

  // two distinct boards validating the same clues
  ClueSet ones;
  ones.n = 2;
  ones.rows = {Clue{1}, Clue{1}};
  ones.cols = {Clue{1}, Clue{1}};
  Board diag(2, Cell::Empty), anti(2, Cell::Empty);
  diag.set(0, 0, Cell::Filled);
  diag.set(1, 1, Cell::Filled);
  anti.set(0, 1, Cell::Filled);
  anti.set(1, 0, Cell::Filled);
  CHECK(is_solution(diag, ones));
  CHECK(is_solution(anti, ones));
}

TEST_CASE("round trip: combinations of a row re-encode to its clue", "[board][property]") {
  Rng rng(321);
  for (int trial = 0; trial < 50; ++trial) {
    const Board board = random_full_board(rng.range_int(1, 8), rng);
    for (int r = 0; r < board.size(); ++r) {
      const Clue clue = encode_line(board.row(r));
      for (const LineMask& comb : line_combinations(board.row(r), clue))
        CHECK(encode_line(comb) == clue);
    }
  }
}

TEST_CASE("encode_board output always admits the source board", "[board][property]") {
  Rng rng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    const Board board = random_full_board(rng.range_int(1, 10), rng);
    const ClueSet cs = encode_board(board);
    CHECK(cs.totals_match());
    CHECK(is_solution(board, cs));
  }
}

TEST_CASE("board text round trip", "[board][io]") {
  const Board board = parse_board("#?.\n.#?\n..#\n");
  CHECK(board.size() == 3);
  CHECK(board.at(0, 1) == Cell::Unknown);
  CHECK(format_board(board) == "#?.\n.#?\n..#\n");
  CHECK(parse_board("#?.\n.#?\n..#") == board);  // trailing newline optional
  CHECK_THROWS_AS(parse_board("##\n#\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_board("ab\ncd\n"), std::invalid_argument);
}

TEST_CASE("clue helpers", "[board]") {
  CHECK(Clue{}.min_span() == 0);
  CHECK(Clue{3}.min_span() == 3);
  CHECK((Clue{1, 2}).min_span() == 4);
  CHECK((Clue{1, 2}).fits(4));
  CHECK_FALSE((Clue{1, 2}).fits(3));
}
