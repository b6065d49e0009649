#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nono/board.hpp"

namespace nono {

// Number of cells where the prediction disagrees with the truth.
inline int error_count(const Board& predicted, const Board& truth) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("error_count: size mismatch");
  int errors = 0;
  for (int r = 0; r < predicted.size(); ++r)
    for (int c = 0; c < predicted.size(); ++c) {
      const Cell a = predicted.at(r, c), b = truth.at(r, c);
      if (a == Cell::Unknown || b == Cell::Unknown)
        throw std::invalid_argument("error_count: boards must be fully determined");
      if (a != b) ++errors;
    }
  return errors;
}

struct WeibullParams {
  double alpha = 1.0;  // scale
  double beta = 1.0;   // shape
};

// Discrete Weibull CDF: P{F <= f} = 1 - exp(-((f+1)/alpha)^beta).
inline double weibull_cdf(int f, const WeibullParams& p) {
  if (p.alpha <= 0.0 || p.beta <= 0.0) throw std::invalid_argument("weibull_cdf: params must be > 0");
  if (f < 0) return 0.0;
  return 1.0 - std::exp(-std::pow((f + 1.0) / p.alpha, p.beta));
}

inline double weibull_pmf(int f, const WeibullParams& p) {
  return weibull_cdf(f, p) - weibull_cdf(f - 1, p);
}

// Smallest maximizer of the pmf (scanned until the tail mass is negligible).
inline int weibull_mode(const WeibullParams& p) {
  int best = 0;
  double best_mass = weibull_pmf(0, p);
  for (int f = 1; weibull_cdf(f - 1, p) < 1.0 - 1e-12 && f < 1000000; ++f) {
    const double mass = weibull_pmf(f, p);
    if (mass > best_mass) {
      best = f;
      best_mass = mass;
    }
  }
  return best;
}

namespace detail {

// Nelder-Mead on R^2, small and dependency-free; ample for a two-parameter
// likelihood surface.
inline std::array<double, 2> nelder_mead_2d(const std::function<double(double, double)>& f,
                                            std::array<double, 2> start, double scale = 0.5,
                                            int max_iter = 400) {
  struct Vertex {
    std::array<double, 2> x;
    double v;
  };
  std::array<Vertex, 3> simplex;
  simplex[0] = {start, f(start[0], start[1])};
  simplex[1] = {{start[0] + scale, start[1]}, 0.0};
  simplex[2] = {{start[0], start[1] + scale}, 0.0};
  simplex[1].v = f(simplex[1].x[0], simplex[1].x[1]);
  simplex[2].v = f(simplex[2].x[0], simplex[2].x[1]);

  for (int it = 0; it < max_iter; ++it) {
    std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
    if (std::abs(simplex[2].v - simplex[0].v) < 1e-12) break;
    const std::array<double, 2> centroid = {(simplex[0].x[0] + simplex[1].x[0]) / 2.0,
                                            (simplex[0].x[1] + simplex[1].x[1]) / 2.0};
    const auto point = [&](double t) {
      return std::array<double, 2>{centroid[0] + t * (simplex[2].x[0] - centroid[0]),
                                   centroid[1] + t * (simplex[2].x[1] - centroid[1])};
    };
    const auto reflected = point(-1.0);
    const double fr = f(reflected[0], reflected[1]);
    if (fr < simplex[0].v) {
      const auto expanded = point(-2.0);
      const double fe = f(expanded[0], expanded[1]);
      simplex[2] = fe < fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
    } else if (fr < simplex[1].v) {
      simplex[2] = {reflected, fr};
    } else {
      const auto contracted = point(0.5);
      const double fc = f(contracted[0], contracted[1]);
      if (fc < simplex[2].v) {
        simplex[2] = {contracted, fc};
      } else {
        for (int i = 1; i < 3; ++i) {
          simplex[i].x = {(simplex[i].x[0] + simplex[0].x[0]) / 2.0,
                          (simplex[i].x[1] + simplex[0].x[1]) / 2.0};
          simplex[i].v = f(simplex[i].x[0], simplex[i].x[1]);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
  return simplex[0].x;
}

}  // namespace detail

struct WeibullFit {
  WeibullParams params;
  double neg_log_likelihood = 0.0;
};

// Maximum-likelihood fit of the discrete Weibull over (log alpha, log beta),
// initialized by least squares on the log(-log(1 - ecdf)) vs log(f+1)
// transform of the empirical CDF.
inline WeibullFit fit_weibull(const std::vector<int>& samples) {
  if (samples.size() < 10) throw std::invalid_argument("fit_weibull: need at least 10 samples");
  for (int s : samples)
    if (s < 0) throw std::invalid_argument("fit_weibull: samples must be >= 0");
  if (std::all_of(samples.begin(), samples.end(), [&](int s) { return s == samples.front(); }))
    throw std::invalid_argument("fit_weibull: degenerate samples (all identical)");

  std::vector<int> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());

  // initializer from the linearized CDF
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int points = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double ecdf = static_cast<double>(j) / count;
    if (ecdf < 1.0) {
      const double x = std::log(sorted[i] + 1.0);
      const double y = std::log(-std::log(1.0 - ecdf));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++points;
    }
    i = j;
  }
  double beta0 = 1.0, alpha0 = 1.0;
  const double det = points * sxx - sx * sx;
  if (points >= 2 && std::abs(det) > 1e-12) {
    const double slope = (points * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / points;
    if (slope > 1e-6) {
      beta0 = slope;
      alpha0 = std::exp(-intercept / slope);
    }
  }
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) alpha0 = 1.0;

  const auto nll = [&](double log_alpha, double log_beta) {
    const WeibullParams p{std::exp(log_alpha), std::exp(log_beta)};
    double total = 0.0;
    for (int s : sorted) total -= std::log(std::max(weibull_pmf(s, p), 1e-300));
    return total;
  };

  const std::array<double, 2> start = {std::log(alpha0), std::log(beta0)};
  const auto best = detail::nelder_mead_2d([&](double a, double b) { return nll(a, b); }, start);

  WeibullFit fit;
  fit.params = {std::exp(best[0]), std::exp(best[1])};
  fit.neg_log_likelihood = nll(best[0], best[1]);
  return fit;
}

// Draws one discrete Weibull variate by CDF inversion.
inline int weibull_sample(const WeibullParams& p, double u) {
  const double x = p.alpha * std::pow(-std::log1p(-u), 1.0 / p.beta) - 1.0;
  const int f = static_cast<int>(std::ceil(x));
  return f < 0 ? 0 : f;
}

struct TimeStats {
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation (n-1)
  double median = 0.0;
  std::array<double, 11> percentiles{};  // 0.0, 0.1, ..., 1.0
};

// Linear interpolation between closest order statistics; percentile 0 is the
// minimum and percentile 1 the maximum.
inline double percentile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline TimeStats time_stats(std::vector<double> durations) {
  if (durations.empty()) throw std::invalid_argument("time_stats: empty sample");
  std::sort(durations.begin(), durations.end());
  TimeStats stats;
  const double n = static_cast<double>(durations.size());
  for (double d : durations) stats.mean += d;
  stats.mean /= n;
  if (durations.size() > 1) {
    double ss = 0.0;
    for (double d : durations) ss += (d - stats.mean) * (d - stats.mean);
    stats.std_dev = std::sqrt(ss / (n - 1.0));
  }
  stats.median = percentile(durations, 0.5);
  for (int i = 0; i <= 10; ++i) stats.percentiles[i] = percentile(durations, i / 10.0);
  return stats;
}

enum class WilcoxonMethod { Auto, Exact, NormalApprox };

struct WilcoxonResult {
  double w_plus = 0.0;            // sum of ranks of positive differences
  double w_minus = 0.0;
  double signed_rank_sum = 0.0;   // w_plus - w_minus
  double p_value = 1.0;
  std::string method;             // "exact" or "normal-approx"
  int n_nonzero = 0;
};

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Two-sided paired signed-rank test on a-b. Zero differences are dropped and
// ties receive average ranks. Up to 25 non-zero differences the null
// distribution is enumerated exactly (a rank-sum count over all sign
// assignments); beyond that a normal approximation with tie and continuity
// corrections is used.
inline WilcoxonResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs,
                                           WilcoxonMethod method = WilcoxonMethod::Auto) {
  std::vector<double> diffs;
  for (const auto& [a, b] : pairs)
    if (a != b) diffs.push_back(a - b);
  const int m = static_cast<int>(diffs.size());
  if (m < 5)
    throw std::invalid_argument("wilcoxon_signed_rank: need at least 5 non-zero differences");

  std::vector<std::size_t> order(diffs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(diffs[a]) < std::abs(diffs[b]); });

  // average ranks; doubling keeps them integral for exact counting
  std::vector<int> rank2(m);
  std::vector<double> tie_sizes;
  for (int i = 0; i < m;) {
    int j = i;
    while (j < m && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
    const int doubled_avg = (i + 1) + j;  // 2 * average of ranks i+1 .. j
    for (int k = i; k < j; ++k) rank2[order[k]] = doubled_avg;
    tie_sizes.push_back(static_cast<double>(j - i));
    i = j;
  }

  WilcoxonResult result;
  result.n_nonzero = m;
  std::int64_t w2_plus = 0, w2_total = 0;
  for (int i = 0; i < m; ++i) {
    w2_total += rank2[i];
    if (diffs[i] > 0) w2_plus += rank2[i];
  }
  result.w_plus = static_cast<double>(w2_plus) / 2.0;
  result.w_minus = static_cast<double>(w2_total - w2_plus) / 2.0;
  result.signed_rank_sum = result.w_plus - result.w_minus;

  const bool exact = method == WilcoxonMethod::Exact || (method == WilcoxonMethod::Auto && m <= 25);
  if (exact && m > 62)
    throw std::invalid_argument("wilcoxon_signed_rank: exact enumeration capped at 62 differences");
  if (exact) {
    // distribution of the doubled positive-rank sum via polynomial counting
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(w2_total) + 1, 0);
    counts[0] = 1;
    std::size_t reach = 0;
    for (int i = 0; i < m; ++i) {
      reach += static_cast<std::size_t>(rank2[i]);
      for (std::size_t s = reach + 1; s-- > static_cast<std::size_t>(rank2[i]);)
        counts[s] += counts[s - rank2[i]];
    }
    std::uint64_t le = 0, ge = 0;
    for (std::int64_t s = 0; s <= w2_total; ++s) {
      if (s <= w2_plus) le += counts[s];
      if (s >= w2_plus) ge += counts[s];
    }
    const double denom = std::pow(2.0, m);
    result.p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / denom);
    result.method = "exact";
  } else {
    const double n = static_cast<double>(m);
    const double mean = n * (n + 1.0) / 4.0;
    double tie_term = 0.0;
    for (double t : tie_sizes) tie_term += t * t * t - t;
    const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if (variance <= 0.0) throw std::invalid_argument("wilcoxon_signed_rank: zero variance");
    const double w = result.w_plus;
    const double centered = w - mean;
    const double correction = centered > 0 ? -0.5 : centered < 0 ? 0.5 : 0.0;
    const double z = (centered + correction) / std::sqrt(variance);
    result.p_value = std::min(1.0, 2.0 * normal_cdf(-std::abs(z)));
    result.method = "normal-approx";
  }
  return result;
}

}  // namespace nono
