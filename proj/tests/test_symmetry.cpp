#include <catch2/catch_amalgamated.hpp>

#include <cstdint>

#include "nono/rng.hpp"
#include "nono/symmetry.hpp"

using namespace nono;

namespace {

Board board_from_bits(int n, std::uint64_t bits) {
  Board board(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      board.set(r, c, (bits >> (r * n + c)) & 1u ? Cell::Filled : Cell::Empty);
  return board;
}

Board random_full_board(int n, Rng& rng) {
  Board board(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) board.set(r, c, rng.unit() < 0.5 ? Cell::Filled : Cell::Empty);
  return board;
}

}  // namespace

TEST_CASE("named reflections act as documented on boards", "[symmetry]") {
  Board b(2, Cell::Empty);
  b.set(0, 1, Cell::Filled);
  CHECK(apply_to_board(Reflection::rc, b) == b);

  const Board transposed = apply_to_board(Reflection::cr, b);
  CHECK(transposed.at(1, 0) == Cell::Filled);
  CHECK(transposed.count(Cell::Filled) == 1);

  Board corner(5, Cell::Empty);
  corner.set(0, 0, Cell::Filled);
  // frozen from composing the two mirrors coordinate-by-coordinate
  CHECK(apply_to_board(Reflection::RC, corner).at(4, 4) == Cell::Filled);

  // partial boards transform cell-for-cell
  Board partial(3);
  partial.set(0, 2, Cell::Filled);
  partial.set(1, 1, Cell::Empty);
  const Board flipped = apply_to_board(Reflection::rC, partial);
  CHECK(flipped.at(0, 0) == Cell::Filled);
  CHECK(flipped.at(1, 1) == Cell::Empty);
  CHECK(flipped.at(2, 2) == Cell::Unknown);
}

TEST_CASE("named reflections act as documented on clues", "[symmetry]") {
  ClueSet cs;
  cs.n = 2;
  cs.rows = {Clue{1, 2}, Clue{2}};   // synthetic; only the mapping matters
  cs.cols = {Clue{2}, Clue{1}};

  CHECK(apply_to_clues(Reflection::rc, cs) == cs);

  const ClueSet mirrored = apply_to_clues(Reflection::rC, cs);
  CHECK(mirrored.rows[0] == (Clue{2, 1}));  // block order reverses in place
  CHECK(mirrored.rows[1] == Clue{2});
  CHECK(mirrored.cols == std::vector<Clue>{Clue{1}, Clue{2}});

  ClueSet swap_case;
  swap_case.n = 2;
  swap_case.rows = {Clue{1}, Clue{2}};
  swap_case.cols = {Clue{2}, Clue{1}};
  const ClueSet transposed = apply_to_clues(Reflection::cr, swap_case);
  CHECK(transposed.rows == std::vector<Clue>{Clue{2}, Clue{1}});
  CHECK(transposed.cols == std::vector<Clue>{Clue{1}, Clue{2}});
}

TEST_CASE("composition follows the group table", "[symmetry]") {
  // cr is the diagonal reflection g with g.g = id
  CHECK(compose(Reflection::cr, Reflection::cr) == Reflection::rc);
  // vertical then horizontal mirror is the half turn
  CHECK(compose(Reflection::Rc, Reflection::rC) == Reflection::RC);
  // horizontal mirror after the transpose
  CHECK(compose(Reflection::rC, Reflection::cr) == Reflection::cR);
}

TEST_CASE("every element has the expected inverse", "[symmetry]") {
  CHECK(inverse(Reflection::rc) == Reflection::rc);
  CHECK(inverse(Reflection::Rc) == Reflection::Rc);  // mirrors are involutions
  CHECK(inverse(Reflection::cR) == Reflection::Cr);  // frozen from a table search
  for (Reflection r : kAllReflections) {
    CHECK(compose(r, inverse(r)) == Reflection::rc);
    CHECK(compose(inverse(r), r) == Reflection::rc);
  }
}

TEST_CASE("group axioms hold", "[symmetry][property]") {
  for (Reflection a : kAllReflections) {
    CHECK(compose(Reflection::rc, a) == a);
    CHECK(compose(a, Reflection::rc) == a);
    for (Reflection b : kAllReflections)
      for (Reflection c : kAllReflections)
        CHECK(compose(a, compose(b, c)) == compose(compose(a, b), c));
  }

  bool noncommuting = false;
  for (Reflection a : kAllReflections)
    for (Reflection b : kAllReflections)
      if (compose(a, b) != compose(b, a)) noncommuting = true;
  CHECK(noncommuting);
}

TEST_CASE("composition agrees with applying transforms in sequence", "[symmetry][property]") {
  Rng rng(99);
  const Board board = random_full_board(6, rng);
  for (Reflection a : kAllReflections)
    for (Reflection b : kAllReflections)
      CHECK(apply_to_board(compose(a, b), board) ==
            apply_to_board(a, apply_to_board(b, board)));
}

TEST_CASE("encoding commutes with every reflection, exhaustively at n=2 and 3",
          "[symmetry][property]") {
  for (int n : {2, 3}) {
    const std::uint64_t total = 1ull << (n * n);
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      const Board board = board_from_bits(n, bits);
      const ClueSet encoded = encode_board(board);
      for (Reflection r : kAllReflections)
        REQUIRE(encode_board(apply_to_board(r, board)) == apply_to_clues(r, encoded));
    }
  }
}

TEST_CASE("encoding commutes with every reflection on random larger boards",
          "[symmetry][property]") {
  Rng rng(2718);
  for (int n : {5, 10, 15}) {
    for (int trial = 0; trial < 60; ++trial) {
      const Board board = random_full_board(n, rng);
      const ClueSet encoded = encode_board(board);
      for (Reflection r : kAllReflections)
        REQUIRE(encode_board(apply_to_board(r, board)) == apply_to_clues(r, encoded));
    }
  }
}

TEST_CASE("reflections are bijections on boards", "[symmetry][property]") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const Board board = random_full_board(7, rng);
    for (Reflection r : kAllReflections)
      CHECK(apply_to_board(inverse(r), apply_to_board(r, board)) == board);
  }
}

TEST_CASE("reflection names round trip", "[symmetry]") {
  for (Reflection r : kAllReflections) CHECK(reflection_from_name(reflection_name(r)) == r);
  CHECK_THROWS_AS(reflection_from_name("xx"), std::invalid_argument);
}
