#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nono/board.hpp"
#include "nono/image.hpp"
#include "nono/io.hpp"
#include "nono/rng.hpp"

namespace nono {

// Each cell drawn independently: filled when the uniform draw lands below 0.5.
inline Board random_noise_board(int n, Rng& rng) {
  Board board(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) board.set(r, c, rng.unit() < 0.5 ? Cell::Filled : Cell::Empty);
  return board;
}

namespace detail {

inline void draw_line(Board& board, int r0, int c0, int r1, int c1) {
  // Bresenham, any octant
  const int dr = std::abs(r1 - r0), dc = std::abs(c1 - c0);
  const int sr = r0 < r1 ? 1 : -1, sc = c0 < c1 ? 1 : -1;
  int err = (dc > dr ? dc : -dr) / 2;
  for (;;) {
    board.set(r0, c0, Cell::Filled);
    if (r0 == r1 && c0 == c1) break;
    const int e = err;
    if (e > -dc) {
      err -= dr;
      c0 += sc;
    }
    if (e < dr) {
      err += dc;
      r0 += sr;
    }
  }
}

inline void draw_rectangle(Board& board, int r0, int c0, int r1, int c1) {
  if (r0 > r1) std::swap(r0, r1);
  if (c0 > c1) std::swap(c0, c1);
  for (int c = c0; c <= c1; ++c) {
    board.set(r0, c, Cell::Filled);
    board.set(r1, c, Cell::Filled);
  }
  for (int r = r0; r <= r1; ++r) {
    board.set(r, c0, Cell::Filled);
    board.set(r, c1, Cell::Filled);
  }
}

inline void draw_circle(Board& board, int cr, int cc, int radius) {
  // midpoint circle outline, clipped at the border
  const int n = board.size();
  const auto plot = [&](int r, int c) {
    if (r >= 0 && r < n && c >= 0 && c < n) board.set(r, c, Cell::Filled);
  };
  int x = radius, y = 0;
  int err = 1 - radius;
  while (x >= y) {
    plot(cr + y, cc + x);
    plot(cr + x, cc + y);
    plot(cr + x, cc - y);
    plot(cr + y, cc - x);
    plot(cr - y, cc - x);
    plot(cr - x, cc - y);
    plot(cr - x, cc + y);
    plot(cr - y, cc + x);
    ++y;
    if (err < 0) {
      err += 2 * y + 1;
    } else {
      --x;
      err += 2 * (y - x) + 1;
    }
  }
}

}  // namespace detail

// Draws 1..4 figures (line, rectangle outline, or circle outline, uniformly)
// with uniform positions; circle radii span [1, n/2].
inline Board random_figures_board(int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("random_figures_board: n must be >= 2");
  Board board(n, Cell::Empty);
  const int figures = rng.range_int(1, 4);
  for (int f = 0; f < figures; ++f) {
    const int kind = rng.range_int(0, 2);
    if (kind == 0) {
      const int r0 = rng.range_int(0, n - 1), c0 = rng.range_int(0, n - 1);
      const int r1 = rng.range_int(0, n - 1), c1 = rng.range_int(0, n - 1);
      detail::draw_line(board, r0, c0, r1, c1);
    } else if (kind == 1) {
      const int r0 = rng.range_int(0, n - 1), c0 = rng.range_int(0, n - 1);
      const int r1 = rng.range_int(0, n - 1), c1 = rng.range_int(0, n - 1);
      detail::draw_rectangle(board, r0, c0, r1, c1);
    } else {
      const int cr = rng.range_int(0, n - 1), cc = rng.range_int(0, n - 1);
      const int radius = rng.range_int(1, std::max(1, n / 2));
      detail::draw_circle(board, cr, cc, radius);
    }
  }
  return board;
}

struct DatasetSpec {
  int n = 10;
  int noise_count = 0;
  int figures_count = 0;
  std::uint64_t rng_seed = 0;
  std::string output_root;
};

struct DatasetResult {
  int records = 0;
  int train_records = 0;
  int test_records = 0;
  int images_used = 0;
  int images_skipped = 0;
  int duplicates_removed = 0;
  std::string manifest_path;
};

// Builds the on-disk dataset: images are deduplicated by average hash, scaled
// and binarized with each transform (the "canny" tag is reserved in the
// manifest schema but not produced); image-derived boards split 80/20 into
// train/test, random noise and figure boards go to train only. Every record
// stores the board and its encoded headers; the manifest pins the seed and
// generation parameters.
inline DatasetResult generate_dataset(const DatasetSpec& spec,
                                      const std::vector<std::string>& image_paths = {}) {
  namespace fs = std::filesystem;
  if (spec.n < 1) throw std::invalid_argument("generate_dataset: n must be >= 1");
  if (spec.noise_count < 0 || spec.figures_count < 0)
    throw std::invalid_argument("generate_dataset: counts must be >= 0");
  if (spec.output_root.empty()) throw std::invalid_argument("generate_dataset: output root required");

  fs::create_directories(fs::path(spec.output_root) / "train");
  fs::create_directories(fs::path(spec.output_root) / "test");

  DatasetResult result;
  json manifest_records = json::array();
  json skipped = json::array();

  struct PendingRecord {
    Board board;
    std::string source, transform, image, split;
    std::uint64_t hash = 0;
    bool hashed = false;
  };
  std::vector<PendingRecord> records;

  // images: dedup on the original image's hash, then the three transforms
  std::set<std::uint64_t> seen_hashes;
  for (const std::string& path : image_paths) {
    GrayImage img;
    try {
      img = read_pgm(path);
    } catch (const std::exception& e) {
      ++result.images_skipped;
      skipped.push_back({{"path", path}, {"reason", e.what()}});
      continue;
    }
    const std::uint64_t hash = average_hash(img);
    if (!seen_hashes.insert(hash).second) {
      ++result.duplicates_removed;
      continue;
    }
    ++result.images_used;
    const GrayImage scaled = scale_image(img, spec.n);
    for (ThresholdMethod method :
         {ThresholdMethod::Fixed128, ThresholdMethod::Otsu, ThresholdMethod::OtsuInverted}) {
      PendingRecord rec;
      rec.board = binarize_image(scaled, method);
      rec.source = "image";
      rec.transform = std::string(threshold_method_name(method));
      rec.image = path;
      rec.hash = hash;
      rec.hashed = true;
      records.push_back(std::move(rec));
    }
  }

  // 80/20 split of the image-derived records, shuffled reproducibly
  {
    Rng split_rng(derive_seed(spec.rng_seed, 0x5954));
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    split_rng.shuffle(order.begin(), order.end());
    const std::size_t train_n = records.size() * 8 / 10;
    for (std::size_t i = 0; i < order.size(); ++i)
      records[order[i]].split = i < train_n ? "train" : "test";
  }

  // random boards, one derived generator per record, appended to train
  for (int i = 0; i < spec.noise_count; ++i) {
    Rng rng(derive_seed(spec.rng_seed, 1, static_cast<std::uint64_t>(i)));
    records.push_back({random_noise_board(spec.n, rng), "noise", "none", "", "train", 0, false});
  }
  for (int i = 0; i < spec.figures_count; ++i) {
    Rng rng(derive_seed(spec.rng_seed, 2, static_cast<std::uint64_t>(i)));
    records.push_back({random_figures_board(spec.n, rng), "figures", "none", "", "train", 0, false});
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    const PendingRecord& rec = records[i];
    char id[24];
    std::snprintf(id, sizeof id, "%06zu", i);
    const fs::path dir = fs::path(spec.output_root) / rec.split;
    write_puzzle_file(encode_board(rec.board), (dir / (std::string(id) + ".puzzle.json")).string());
    write_board_file(rec.board, (dir / (std::string(id) + ".board.txt")).string());
    json entry{{"id", id}, {"split", rec.split}, {"source", rec.source}, {"transform", rec.transform}};
    if (!rec.image.empty()) entry["image"] = rec.image;
    if (rec.hashed) {
      char hex[20];
      std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(rec.hash));
      entry["hash"] = hex;
    }
    manifest_records.push_back(std::move(entry));
    ++result.records;
    rec.split == "train" ? ++result.train_records : ++result.test_records;
  }

  json manifest{{"format", "nonodataset-1"},
                {"n", spec.n},
                {"seed", spec.rng_seed},
                {"spec",
                 {{"noise", spec.noise_count},
                  {"figures", spec.figures_count},
                  {"images", static_cast<int>(image_paths.size())},
                  {"figure_count_range", {1, 4}},
                  {"circle_radius_range", {1, std::max(1, spec.n / 2)}},
                  {"train_fraction", 0.8},
                  {"transforms", {"fixed128", "otsu", "otsu_inverted"}}}},
                {"records", manifest_records},
                {"skipped", skipped}};
  const std::string manifest_path = (fs::path(spec.output_root) / "manifest.json").string();
  write_text_file(manifest_path, manifest.dump(2) + "\n");
  result.manifest_path = manifest_path;
  return result;
}

// Loads the (clues, board) pairs of one dataset split, ordered by record id.
inline std::vector<std::pair<ClueSet, Board>> load_dataset_split(const std::string& root,
                                                                 const std::string& split) {
  namespace fs = std::filesystem;
  std::vector<std::string> ids;
  const fs::path dir = fs::path(root) / split;
  if (!fs::is_directory(dir)) throw std::runtime_error("no dataset split at '" + dir.string() + "'");
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    const auto pos = name.find(".puzzle.json");
    if (pos != std::string::npos) ids.push_back(name.substr(0, pos));
  }
  std::sort(ids.begin(), ids.end());
  std::vector<std::pair<ClueSet, Board>> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    out.emplace_back(read_puzzle_file((dir / (id + ".puzzle.json")).string()),
                     read_board_file((dir / (id + ".board.txt")).string()));
  }
  return out;
}

}  // namespace nono
