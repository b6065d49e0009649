#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nono/board.hpp"
#include "nono/solve.hpp"

namespace nono {

using json = nlohmann::json;

inline json clue_set_to_json(const ClueSet& clues) {
  json rows = json::array(), cols = json::array();
  for (const Clue& c : clues.rows) rows.push_back(c.blocks);
  for (const Clue& c : clues.cols) cols.push_back(c.blocks);
  return json{{"n", clues.n}, {"rows", rows}, {"cols", cols}};
}

inline ClueSet clue_set_from_json(const json& j) {
  ClueSet clues;
  clues.n = j.at("n").get<int>();
  if (clues.n < 1) throw std::runtime_error("puzzle: n must be >= 1");
  const auto parse_lines = [&](const json& arr, const char* what) {
    std::vector<Clue> out;
    if (!arr.is_array() || static_cast<int>(arr.size()) != clues.n)
      throw std::runtime_error(std::string("puzzle: expected ") + std::to_string(clues.n) + " " + what);
    for (const auto& blocks : arr) {
      Clue clue;
      for (const auto& b : blocks) {
        const int len = b.get<int>();
        if (len < 1) throw std::runtime_error("puzzle: block lengths must be >= 1");
        clue.blocks.push_back(len);
      }
      if (!clue.fits(clues.n))
        throw std::runtime_error(std::string("puzzle: ") + what + " clue does not fit the board");
      out.push_back(std::move(clue));
    }
    return out;
  };
  clues.rows = parse_lines(j.at("rows"), "row clues");
  clues.cols = parse_lines(j.at("cols"), "column clues");
  return clues;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline ClueSet read_puzzle_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error("'" + path + "' is not valid JSON: " + e.what());
  }
  return clue_set_from_json(j);
}

inline void write_puzzle_file(const ClueSet& clues, const std::string& path) {
  write_text_file(path, clue_set_to_json(clues).dump(2) + "\n");
}

inline Board read_board_file(const std::string& path) { return parse_board(read_text_file(path)); }

inline void write_board_file(const Board& board, const std::string& path) {
  write_text_file(path, format_board(board));
}

inline json solve_report_to_json(const SolveReport& report) {
  json j{{"variant", report.variant},
         {"status", std::string(solve_status_name(report.status))},
         {"phase", std::string(solve_phase_name(report.phase))},
         {"iterations", report.iterations},
         {"backtracks", report.backtracks},
         {"elapsed_seconds", report.elapsed_seconds},
         {"seed", report.rng_seed}};
  if (report.solution) {
    json lines = json::array();
    for (int r = 0; r < report.solution->size(); ++r) {
      std::string row;
      for (int c = 0; c < report.solution->size(); ++c)
        row += cell_char(report.solution->at(r, c));
      lines.push_back(row);
    }
    j["solution"] = lines;
  }
  if (report.prediction_errors) j["prediction_errors"] = *report.prediction_errors;
  return j;
}

}  // namespace nono
