#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nono/board.hpp"
#include "nono/predict.hpp"
#include "nono/rng.hpp"
#include "nono/symmetry.hpp"
#include "nono/version.hpp"

namespace nono {

// Maximum number of blocks a line of length n can hold.
inline int max_blocks(int n) { return (n + 1) / 2; }

// Header vectorization: all row clues top-to-bottom, then all column clues
// left-to-right, each left-padded with zeros to max_blocks(n) slots. Block
// lengths are scaled by 1/n so inputs live in [0, 1].
inline std::vector<double> vectorize_clues(const ClueSet& clues) {
  const int n = clues.n;
  const int lm = max_blocks(n);
  std::vector<double> input;
  input.reserve(static_cast<std::size_t>(2) * lm * n);
  const auto emit = [&](const Clue& clue) {
    if (static_cast<int>(clue.blocks.size()) > lm)
      throw std::invalid_argument("vectorize_clues: clue has more blocks than fit the line");
    for (int pad = lm - static_cast<int>(clue.blocks.size()); pad > 0; --pad) input.push_back(0.0);
    for (int b : clue.blocks) input.push_back(static_cast<double>(b) / n);
  };
  for (const Clue& c : clues.rows) emit(c);
  for (const Clue& c : clues.cols) emit(c);
  return input;
}

// Fully connected network: rectifier hidden layers, logistic output layer,
// inverted dropout after each hidden activation while training.
struct MlpModel {
  int n = 0;
  int lm = 0;
  std::vector<int> layer_sizes;               // input, hidden..., output
  std::vector<std::vector<double>> weights;   // [layer][out * in], row-major by output
  std::vector<std::vector<double>> biases;    // [layer][out]
  double dropout_rate = 0.0;
  bool scaled_input = true;

  static MlpModel make(int n, const std::vector<int>& hidden, double dropout, Rng& rng) {
    if (n < 1) throw std::invalid_argument("MlpModel: board size must be >= 1");
    if (dropout < 0.0 || dropout >= 1.0) throw std::invalid_argument("MlpModel: dropout in [0,1)");
    MlpModel m;
    m.n = n;
    m.lm = max_blocks(n);
    m.layer_sizes.push_back(2 * m.lm * n);
    for (int h : hidden) {
      if (h < 1) throw std::invalid_argument("MlpModel: hidden size must be >= 1");
      m.layer_sizes.push_back(h);
    }
    m.layer_sizes.push_back(n * n);
    m.dropout_rate = dropout;
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
      const int fan_in = m.layer_sizes[l];
      const int fan_out = m.layer_sizes[l + 1];
      const double bound = std::sqrt(6.0 / fan_in);
      std::vector<double> w(static_cast<std::size_t>(fan_out) * fan_in);
      for (double& x : w) x = (2.0 * rng.unit() - 1.0) * bound;
      m.weights.push_back(std::move(w));
      m.biases.emplace_back(fan_out, 0.0);
    }
    return m;
  }

  // The paper-scale default for 5x5 boards; desk-scale tests use far smaller nets.
  static MlpModel default_for(int n, Rng& rng) {
    if (n <= 5) return make(n, {2048, 1024, 256}, 0.05, rng);
    return make(n, {2048, 1024, 1024, 1024, 512}, 0.05, rng);
  }

  std::size_t layer_count() const { return layer_sizes.size(); }
  std::size_t parameter_count() const {
    std::size_t total = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) total += weights[l].size() + biases[l].size();
    return total;
  }
};

namespace detail {

inline double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// Stable binary cross-entropy from the logit.
inline double bce_from_logit(double z, double y) {
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

// Activations (post-nonlinearity) per layer plus the output logits and the
// dropout keep masks used on the hidden layers.
struct ForwardTrace {
  std::vector<std::vector<double>> activations;  // [0] is the input
  std::vector<double> logits;
  std::vector<std::vector<char>> keep;           // per hidden layer; empty if no dropout
  double keep_scale = 1.0;
};

inline ForwardTrace forward_trace(const MlpModel& m, std::span<const double> input, bool training,
                                  Rng* rng) {
  if (input.size() != static_cast<std::size_t>(m.layer_sizes.front()))
    throw std::invalid_argument("forward: input width does not match the model");
  ForwardTrace t;
  t.activations.emplace_back(input.begin(), input.end());
  const std::size_t L = m.weights.size();
  const bool drop = training && m.dropout_rate > 0.0;
  t.keep_scale = drop ? 1.0 / (1.0 - m.dropout_rate) : 1.0;
  for (std::size_t l = 0; l < L; ++l) {
    const int out_n = m.layer_sizes[l + 1];
    const int in_n = m.layer_sizes[l];
    const std::vector<double>& a = t.activations.back();
    std::vector<double> z(out_n);
    const double* w = m.weights[l].data();
    for (int o = 0; o < out_n; ++o) {
      double acc = m.biases[l][o];
      const double* row = w + static_cast<std::size_t>(o) * in_n;
      for (int i = 0; i < in_n; ++i) acc += row[i] * a[i];
      z[o] = acc;
    }
    if (l + 1 == L) {
      t.logits = z;
      std::vector<double> p(out_n);
      for (int o = 0; o < out_n; ++o) p[o] = sigmoid(z[o]);
      t.activations.push_back(std::move(p));
    } else {
      for (int o = 0; o < out_n; ++o) z[o] = std::max(z[o], 0.0);
      if (drop) {
        std::vector<char> keep(out_n);
        for (int o = 0; o < out_n; ++o) {
          keep[o] = rng->unit() >= m.dropout_rate;
          z[o] = keep[o] ? z[o] * t.keep_scale : 0.0;
        }
        t.keep.push_back(std::move(keep));
      }
      t.activations.push_back(std::move(z));
    }
  }
  return t;
}

}  // namespace detail

// Inference-mode forward pass (no dropout noise): rectifier hidden layers,
// sigmoid output.
inline std::vector<double> forward(const MlpModel& model, std::span<const double> input) {
  return detail::forward_trace(model, input, false, nullptr).activations.back();
}

struct TrainSample {
  ClueSet clues;
  Board board;  // fully determined target
};

struct TrainConfig {
  double learning_rate = 1e-3;
  int epochs = 1;
  int batch_size = 32;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t rng_seed = 0;
  bool augment_reflections = false;
};

struct TrainResult {
  std::vector<double> loss_history;  // mean batch loss per epoch
};

namespace detail {

struct Gradients {
  std::vector<std::vector<double>> w, b;

  explicit Gradients(const MlpModel& m) {
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
      w.emplace_back(m.weights[l].size(), 0.0);
      b.emplace_back(m.biases[l].size(), 0.0);
    }
  }
  void zero() {
    for (auto& v : w) std::fill(v.begin(), v.end(), 0.0);
    for (auto& v : b) std::fill(v.begin(), v.end(), 0.0);
  }
};

// Accumulates dLoss/dParams for one sample into `g`, where the loss is the
// cell-mean BCE divided by `sample_weight_denom` (the batch size).
inline double backprop_sample(const MlpModel& m, const ForwardTrace& t,
                              const std::vector<double>& target, double sample_weight_denom,
                              Gradients& g) {
  const std::size_t L = m.weights.size();
  const int out_n = m.layer_sizes.back();
  const double denom = sample_weight_denom * out_n;

  double loss = 0.0;
  std::vector<double> delta(out_n);
  for (int o = 0; o < out_n; ++o) {
    loss += bce_from_logit(t.logits[o], target[o]);
    delta[o] = (t.activations.back()[o] - target[o]) / denom;
  }
  loss /= out_n;

  for (std::size_t l = L; l-- > 0;) {
    const int o_n = m.layer_sizes[l + 1];
    const int i_n = m.layer_sizes[l];
    const std::vector<double>& a_prev = t.activations[l];
    double* gw = g.w[l].data();
    for (int o = 0; o < o_n; ++o) {
      const double d = delta[o];
      g.b[l][o] += d;
      double* row = gw + static_cast<std::size_t>(o) * i_n;
      for (int i = 0; i < i_n; ++i) row[i] += d * a_prev[i];
    }
    if (l == 0) break;
    std::vector<double> prev(i_n, 0.0);
    const double* w = m.weights[l].data();
    for (int o = 0; o < o_n; ++o) {
      const double d = delta[o];
      const double* row = w + static_cast<std::size_t>(o) * i_n;
      for (int i = 0; i < i_n; ++i) prev[i] += d * row[i];
    }
    // Through the hidden nonlinearity: rectifier gate plus the dropout mask.
    const std::vector<double>& act = t.activations[l];
    const bool dropped = !t.keep.empty();
    for (int i = 0; i < i_n; ++i) {
      double d = act[i] > 0.0 ? prev[i] : 0.0;
      if (dropped) d = t.keep[l - 1][i] ? d * t.keep_scale : 0.0;
      prev[i] = d;
    }
    delta = std::move(prev);
  }
  return loss;
}

struct AdamState {
  std::vector<std::vector<double>> mw, vw, mb, vb;
  std::uint64_t t = 0;

  explicit AdamState(const MlpModel& m) {
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
      mw.emplace_back(m.weights[l].size(), 0.0);
      vw.emplace_back(m.weights[l].size(), 0.0);
      mb.emplace_back(m.biases[l].size(), 0.0);
      vb.emplace_back(m.biases[l].size(), 0.0);
    }
  }

  void step(MlpModel& m, const Gradients& g, const TrainConfig& cfg) {
    ++t;
    const double c1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(t));
    const auto update = [&](std::vector<double>& p, std::vector<double>& mm, std::vector<double>& vv,
                            const std::vector<double>& grad) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        mm[i] = cfg.adam_beta1 * mm[i] + (1.0 - cfg.adam_beta1) * grad[i];
        vv[i] = cfg.adam_beta2 * vv[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
        p[i] -= cfg.learning_rate * (mm[i] / c1) / (std::sqrt(vv[i] / c2) + cfg.adam_epsilon);
      }
    };
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
      update(m.weights[l], mw[l], vw[l], g.w[l]);
      update(m.biases[l], mb[l], vb[l], g.b[l]);
    }
  }
};

inline std::vector<double> target_vector(const Board& board) {
  const int n = board.size();
  std::vector<double> y(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const Cell cell = board.at(r, c);
      if (cell == Cell::Unknown)
        throw std::invalid_argument("training target board has undetermined cells");
      y[static_cast<std::size_t>(r) * n + c] = cell == Cell::Filled ? 1.0 : 0.0;
    }
  return y;
}

}  // namespace detail

// Expands each sample into its eight reflected (clues, board) pairs, in the
// canonical reflection order.
inline std::vector<TrainSample> augment_with_reflections(const std::vector<TrainSample>& samples) {
  std::vector<TrainSample> out;
  out.reserve(samples.size() * kAllReflections.size());
  for (const TrainSample& s : samples)
    for (Reflection r : kAllReflections)
      out.push_back({apply_to_clues(r, s.clues), apply_to_board(r, s.board)});
  return out;
}

// Mini-batch Adam on the mean binary cross-entropy between predicted cell
// probabilities and targets (Filled = 1). Deterministic for a fixed seed.
inline TrainResult train(MlpModel& model, const std::vector<TrainSample>& dataset,
                         const TrainConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.learning_rate <= 0.0) throw std::invalid_argument("train: learning rate must be > 0");
  if (cfg.batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");
  for (const TrainSample& s : dataset)
    if (s.clues.n != model.n || s.board.size() != model.n)
      throw std::invalid_argument("train: sample size does not match the model");

  const std::vector<TrainSample>& base =
      cfg.augment_reflections ? augment_with_reflections(dataset) : dataset;
  std::vector<std::vector<double>> inputs, targets;
  inputs.reserve(base.size());
  targets.reserve(base.size());
  for (const TrainSample& s : base) {
    inputs.push_back(vectorize_clues(s.clues));
    targets.push_back(detail::target_vector(s.board));
  }

  Rng rng(cfg.rng_seed);
  detail::AdamState adam(model);
  detail::Gradients grads(model);
  std::vector<std::size_t> order(base.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      grads.zero();
      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        const auto trace = detail::forward_trace(model, inputs[order[i]], true, &rng);
        batch_loss += detail::backprop_sample(model, trace, targets[order[i]],
                                              static_cast<double>(end - start), grads);
      }
      adam.step(model, grads, cfg);
      epoch_loss += batch_loss / static_cast<double>(end - start);
      ++batches;
    }
    result.loss_history.push_back(epoch_loss / static_cast<double>(batches));
  }
  return result;
}

// Mean BCE of the model on one sample, dropout off.
inline double sample_loss(const MlpModel& model, const std::vector<double>& input,
                          const std::vector<double>& target) {
  const auto trace = detail::forward_trace(model, input, false, nullptr);
  double loss = 0.0;
  for (std::size_t o = 0; o < target.size(); ++o)
    loss += detail::bce_from_logit(trace.logits[o], target[o]);
  return loss / static_cast<double>(target.size());
}

// Compares the analytic gradient with central finite differences over every
// parameter (dropout disabled). Returns the worst relative error; intended
// for small models only.
inline double gradient_check(const MlpModel& model, const TrainSample& sample) {
  const std::vector<double> input = vectorize_clues(sample.clues);
  const std::vector<double> target = detail::target_vector(sample.board);

  detail::Gradients analytic(model);
  const auto trace = detail::forward_trace(model, input, false, nullptr);
  detail::backprop_sample(model, trace, target, 1.0, analytic);

  MlpModel probe = model;
  const double h = 1e-5;
  double worst = 0.0;
  const auto check = [&](double& param, double analytic_grad) {
    const double saved = param;
    param = saved + h;
    const double up = sample_loss(probe, input, target);
    param = saved - h;
    const double down = sample_loss(probe, input, target);
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double rel = std::abs(analytic_grad - numeric) /
                       std::max(1e-6, std::abs(analytic_grad) + std::abs(numeric));
    worst = std::max(worst, rel);
  };
  for (std::size_t l = 0; l < probe.weights.size(); ++l) {
    for (std::size_t i = 0; i < probe.weights[l].size(); ++i)
      check(probe.weights[l][i], analytic.w[l][i]);
    for (std::size_t i = 0; i < probe.biases[l].size(); ++i)
      check(probe.biases[l][i], analytic.b[l][i]);
  }
  return worst;
}

// Vectorize, run in inference mode, reshape row-major.
inline PredictionGrid predict(const MlpModel& model, const ClueSet& clues) {
  if (clues.n != model.n) throw std::invalid_argument("predict: clue size does not match the model");
  return PredictionGrid(model.n, forward(model, vectorize_clues(clues)));
}

struct ModelAccuracy {
  double cell_accuracy = 0.0;
  double board_accuracy = 0.0;
};

inline ModelAccuracy evaluate_accuracy(const MlpModel& model, const std::vector<TrainSample>& samples) {
  std::size_t cells_right = 0, cells_total = 0, boards_right = 0;
  for (const TrainSample& s : samples) {
    const Board guess = binarize(predict(model, s.clues));
    bool all = true;
    for (int r = 0; r < s.board.size(); ++r)
      for (int c = 0; c < s.board.size(); ++c) {
        ++cells_total;
        if (guess.at(r, c) == s.board.at(r, c))
          ++cells_right;
        else
          all = false;
      }
    if (all) ++boards_right;
  }
  return {static_cast<double>(cells_right) / static_cast<double>(cells_total),
          static_cast<double>(boards_right) / static_cast<double>(samples.size())};
}

// ---------------------------------------------------------------------------
// Weights file (format NONOMLP1)
//
//   magic "NONOMLP1", then little-endian: n (u32), lm (u32), layer count
//   (u32), layer sizes (u32 each), dropout rate (f64), input-scale flag (u8),
//   precision flag (u8: 0 = f64, 1 = f32), then per layer the row-major
//   weight matrix followed by the bias vector, and finally the CRC-32 of the
//   payload (everything after the magic).
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint32_t crc32(const unsigned char* data, std::size_t size, std::uint32_t seed = 0) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = ~seed;
  for (std::size_t i = 0; i < size; ++i) crc = table[(crc ^ data[i]) & 0xffu] ^ (crc >> 8);
  return ~crc;
}

struct ByteWriter {
  std::string bytes;

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void u8(std::uint8_t v) { bytes.push_back(static_cast<char>(v)); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
  }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
};

struct ByteReader {
  const unsigned char* data;
  std::size_t size;
  std::size_t pos = 0;

  void need(std::size_t k) const {
    if (pos + k > size) throw std::runtime_error("weights file is truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint8_t u8() {
    need(1);
    return data[pos++];
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(data[pos + i]) << (8 * i);
    pos += 8;
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
};

}  // namespace detail

enum class WeightPrecision : std::uint8_t { F64 = 0, F32 = 1 };

inline void save_weights(const MlpModel& model, const std::string& path,
                         WeightPrecision precision = WeightPrecision::F64) {
  detail::ByteWriter payload;
  payload.u32(static_cast<std::uint32_t>(model.n));
  payload.u32(static_cast<std::uint32_t>(model.lm));
  payload.u32(static_cast<std::uint32_t>(model.layer_sizes.size()));
  for (int s : model.layer_sizes) payload.u32(static_cast<std::uint32_t>(s));
  payload.f64(model.dropout_rate);
  payload.u8(model.scaled_input ? 1 : 0);
  payload.u8(static_cast<std::uint8_t>(precision));
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (double w : model.weights[l])
      precision == WeightPrecision::F64 ? payload.f64(w) : payload.f32(static_cast<float>(w));
    for (double b : model.biases[l])
      precision == WeightPrecision::F64 ? payload.f64(b) : payload.f32(static_cast<float>(b));
  }
  const std::uint32_t crc = detail::crc32(
      reinterpret_cast<const unsigned char*>(payload.bytes.data()), payload.bytes.size());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(kWeightsFormat, 8);
  out.write(payload.bytes.data(), static_cast<std::streamsize>(payload.bytes.size()));
  detail::ByteWriter tail;
  tail.u32(crc);
  out.write(tail.bytes.data(), 4);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline MlpModel load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (blob.size() < 12) throw std::runtime_error("weights file is truncated");
  if (blob.compare(0, 8, "NONOMLP1") != 0)
    throw std::runtime_error("weights format mismatch (expected NONOMLP1)");

  const auto* bytes = reinterpret_cast<const unsigned char*>(blob.data());
  const std::size_t payload_size = blob.size() - 12;
  detail::ByteReader tail{bytes + 8 + payload_size, 4, 0};
  const std::uint32_t stored_crc = tail.u32();
  if (detail::crc32(bytes + 8, payload_size) != stored_crc)
    throw std::runtime_error("weights file failed its checksum");

  detail::ByteReader r{bytes + 8, payload_size, 0};
  MlpModel m;
  m.n = static_cast<int>(r.u32());
  m.lm = static_cast<int>(r.u32());
  const std::uint32_t layers = r.u32();
  if (layers < 2 || layers > 64) throw std::runtime_error("weights file has a bad layer count");
  for (std::uint32_t i = 0; i < layers; ++i) m.layer_sizes.push_back(static_cast<int>(r.u32()));
  m.dropout_rate = r.f64();
  m.scaled_input = r.u8() != 0;
  const std::uint8_t precision = r.u8();
  if (precision > 1) throw std::runtime_error("weights file has a bad precision flag");
  if (m.n < 1 || m.lm != max_blocks(m.n) || m.layer_sizes.front() != 2 * m.lm * m.n ||
      m.layer_sizes.back() != m.n * m.n)
    throw std::runtime_error("weights file header is inconsistent");
  for (std::uint32_t l = 0; l + 1 < layers; ++l) {
    const std::size_t w_n = static_cast<std::size_t>(m.layer_sizes[l + 1]) * m.layer_sizes[l];
    std::vector<double> w(w_n);
    for (double& x : w) x = precision == 0 ? r.f64() : static_cast<double>(r.f32());
    std::vector<double> b(m.layer_sizes[l + 1]);
    for (double& x : b) x = precision == 0 ? r.f64() : static_cast<double>(r.f32());
    m.weights.push_back(std::move(w));
    m.biases.push_back(std::move(b));
  }
  if (r.pos != payload_size) throw std::runtime_error("weights file has trailing data");
  return m;
}

class MlpPredictor : public Predictor {
 public:
  explicit MlpPredictor(MlpModel model) : model_(std::move(model)) {}

  int board_size() const override { return model_.n; }
  PredictionGrid predict(const ClueSet& clues) const override { return nono::predict(model_, clues); }

  const MlpModel& model() const { return model_; }

 private:
  MlpModel model_;
};

}  // namespace nono
