#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nono/enumerate.hpp"

using namespace nono;

TEST_CASE("count_boards is exactly 2^(n*n)", "[enumerate]") {
  CHECK(count_boards(1) == "2");
  CHECK(count_boards(2) == "16");
  CHECK(count_boards(3) == "512");
  CHECK(count_boards(4) == "65536");
  CHECK(count_boards(5) == "33554432");
  // past 64 bits
  CHECK(count_boards(10) == "1267650600228229401496703205376");
  CHECK(count_boards_u64(5) == 33554432ull);
  CHECK_THROWS_AS(count_boards_u64(8), std::invalid_argument);
}

TEST_CASE("valid clue-set counts for the exhaustively countable sizes", "[enumerate]") {
  CHECK(count_valid_clue_sets(1) == 2);
  CHECK(count_valid_clue_sets(2) == 15);
  CHECK(count_valid_clue_sets(3) == 445);
  CHECK(count_valid_clue_sets(4) == 58196);
}

TEST_CASE("clue-set ratios to three decimals", "[enumerate]") {
  CHECK(std::abs(clue_set_ratio(1) - 1.000) < 5e-4);
  CHECK(std::abs(clue_set_ratio(2) - 0.938) < 5e-4);
  CHECK(std::abs(clue_set_ratio(3) - 0.869) < 5e-4);
  CHECK(std::abs(clue_set_ratio(4) - 0.888) < 5e-4);
}

TEST_CASE("cost guard rejects large sizes unless overridden", "[enumerate]") {
  CHECK_THROWS_AS(count_valid_clue_sets(6), std::invalid_argument);
  CHECK_THROWS_AS(count_valid_clue_sets(0), std::invalid_argument);
}
