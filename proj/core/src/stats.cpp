#include "warp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "warp/series.hpp"

namespace warp::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw Error("mean of empty sequence");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

double quantile_inplace(std::span<double> scratch, double q) {
  if (scratch.empty()) throw Error("quantile of empty sequence");
  q = std::clamp(q, 0.0, 1.0);
  const double pos = q * static_cast<double>(scratch.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  auto lo_it = scratch.begin() + static_cast<std::ptrdiff_t>(lo);
  std::nth_element(scratch.begin(), lo_it, scratch.end());
  const double a = *lo_it;
  if (frac == 0.0 || lo + 1 >= scratch.size()) return a;
  const double b = *std::min_element(lo_it + 1, scratch.end());
  return a + (b - a) * frac;
}

double quantile(std::span<const double> x, double q) {
  std::vector<double> scratch(x.begin(), x.end());
  return quantile_inplace(scratch, q);
}

double median(std::span<const double> x) {
  return quantile(x, 0.5);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw Error("pearson: length mismatch or empty input");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

Line fit_line(std::span<const double> y) {
  if (y.empty()) throw Error("fit_line of empty sequence");
  const double n = static_cast<double>(y.size());
  if (y.size() == 1) return {y[0], 0.0};
  const double xm = (n - 1.0) / 2.0;
  const double ym = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dx = static_cast<double>(i) - xm;
    sxy += dx * (y[i] - ym);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  return {ym - slope * xm, slope};
}

}  // namespace warp::stats
