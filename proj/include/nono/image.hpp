#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nono/board.hpp"

namespace nono {

// 8-bit grayscale image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1) throw std::invalid_argument("image dimensions must be >= 1");
  }

  std::uint8_t at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  void set(int y, int x, std::uint8_t v) { pixels[static_cast<std::size_t>(y) * width + x] = v; }
};

namespace detail {

inline int pgm_next_token(std::istream& in, std::string& token) {
  token.clear();
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {  // comment runs to end of line
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) return 1;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token.empty() ? 0 : 1;
}

}  // namespace detail

// Reads an 8-bit PGM, plain (P2) or raw (P5).
inline GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image '" + path + "'");
  std::string tok;
  if (!detail::pgm_next_token(in, tok) || (tok != "P2" && tok != "P5"))
    throw std::runtime_error("'" + path + "' is not an 8-bit PGM (P2/P5)");
  const bool raw = tok == "P5";
  int fields[3];
  for (int& f : fields) {
    if (!detail::pgm_next_token(in, tok)) throw std::runtime_error("'" + path + "': truncated header");
    try {
      f = std::stoi(tok);
    } catch (const std::exception&) {
      throw std::runtime_error("'" + path + "': bad header field '" + tok + "'");
    }
  }
  const int width = fields[0], height = fields[1], maxval = fields[2];
  if (width < 1 || height < 1) throw std::runtime_error("'" + path + "': bad dimensions");
  if (maxval < 1 || maxval > 255) throw std::runtime_error("'" + path + "': only 8-bit PGM supported");

  GrayImage img(width, height);
  if (raw) {
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
      throw std::runtime_error("'" + path + "': truncated pixel data");
  } else {
    for (auto& p : img.pixels) {
      if (!detail::pgm_next_token(in, tok)) throw std::runtime_error("'" + path + "': truncated pixel data");
      const int v = std::stoi(tok);
      if (v < 0 || v > maxval) throw std::runtime_error("'" + path + "': pixel out of range");
      p = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

inline void write_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

// Area-average (box filter) resample to n x n, rounding to nearest intensity.
inline GrayImage scale_image(const GrayImage& img, int n) {
  if (n < 1) throw std::invalid_argument("scale_image: target size must be >= 1");
  GrayImage out(n, n);
  const double sx = static_cast<double>(img.width) / n;
  const double sy = static_cast<double>(img.height) / n;
  for (int ty = 0; ty < n; ++ty) {
    const double y0 = ty * sy, y1 = (ty + 1) * sy;
    for (int tx = 0; tx < n; ++tx) {
      const double x0 = tx * sx, x1 = (tx + 1) * sx;
      double sum = 0.0;
      for (int y = static_cast<int>(y0); y < img.height && y < y1; ++y) {
        const double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
        if (wy <= 0.0) continue;
        for (int x = static_cast<int>(x0); x < img.width && x < x1; ++x) {
          const double wx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
          if (wx <= 0.0) continue;
          sum += wx * wy * img.at(y, x);
        }
      }
      out.set(ty, tx, static_cast<std::uint8_t>(std::lround(sum / (sx * sy))));
    }
  }
  return out;
}

// Threshold maximizing the between-class variance of the 256-bin histogram;
// the smallest maximizer wins ties. A constant image has no split and yields
// no threshold.
inline bool otsu_threshold(const GrayImage& img, int& threshold) {
  std::array<std::uint64_t, 256> hist{};
  for (std::uint8_t p : img.pixels) ++hist[p];
  const double total = static_cast<double>(img.pixels.size());
  double total_sum = 0.0;
  for (int v = 0; v < 256; ++v) total_sum += static_cast<double>(v) * hist[v];

  double best = 0.0;
  int best_t = -1;
  double w0 = 0.0, sum0 = 0.0;
  for (int t = 0; t < 256; ++t) {
    w0 += hist[t];
    sum0 += static_cast<double>(t) * hist[t];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (total_sum - sum0) / w1;
    const double variance = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (variance > best) {
      best = variance;
      best_t = t;
    }
  }
  if (best_t < 0) return false;
  threshold = best_t;
  return true;
}

enum class ThresholdMethod { Fixed128, Otsu, OtsuInverted };

inline std::string_view threshold_method_name(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::Fixed128: return "fixed128";
    case ThresholdMethod::Otsu: return "otsu";
    case ThresholdMethod::OtsuInverted: return "otsu_inverted";
  }
  return "unknown";
}

// Image must already be square, board-sized. fixed128 fills at intensity
// >= 128; Otsu fills strictly above its threshold; the inverted variant is
// the cell-wise complement. A constant image maps to all-Empty under Otsu
// (all-Filled inverted).
inline Board binarize_image(const GrayImage& img, ThresholdMethod method) {
  if (img.width != img.height) throw std::invalid_argument("binarize_image: image must be square");
  const int n = img.width;
  Board board(n);
  int otsu_t = 0;
  bool has_split = true;
  if (method != ThresholdMethod::Fixed128) has_split = otsu_threshold(img, otsu_t);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      bool filled;
      if (method == ThresholdMethod::Fixed128)
        filled = img.at(y, x) >= 128;
      else
        filled = has_split && img.at(y, x) > otsu_t;
      if (method == ThresholdMethod::OtsuInverted) filled = !filled;
      board.set(y, x, filled ? Cell::Filled : Cell::Empty);
    }
  return board;
}

// Perceptual average hash: resample to 8x8, compare each pixel against the
// mean (strictly above = 1), bits row-major with bit 0 in the most
// significant position.
inline std::uint64_t average_hash(const GrayImage& img) {
  const GrayImage small = (img.width == 8 && img.height == 8) ? img : scale_image(img, 8);
  double mean = 0.0;
  for (std::uint8_t p : small.pixels) mean += p;
  mean /= 64.0;
  std::uint64_t hash = 0;
  for (int i = 0; i < 64; ++i)
    if (small.pixels[i] > mean) hash |= 1ull << (63 - i);
  return hash;
}

}  // namespace nono
