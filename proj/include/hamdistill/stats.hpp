#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace hd {

// Pairwise summation: result depends only on the input order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

struct MeanStats {
  double mean = 0.0;
  double variance = 0.0;  // sample variance
  double std_error = 0.0;
};

inline MeanStats mean_stats(std::span<const double> v) {
  MeanStats s;
  const auto n = static_cast<double>(v.size());
  if (v.empty()) return s;
  s.mean = pairwise_sum(v) / n;
  if (v.size() > 1) {
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - s.mean) * (v[i] - s.mean);
    s.variance = pairwise_sum(sq) / (n - 1.0);
    s.std_error = std::sqrt(s.variance / n);
  }
  return s;
}

// Sample covariance of two equally long series.
inline double covariance(std::span<const double> a, std::span<const double> b, double ma, double mb) {
  if (a.size() < 2) return 0.0;
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = (a[i] - ma) * (b[i] - mb);
  return pairwise_sum(p) / static_cast<double>(a.size() - 1);
}

}  // namespace hd
