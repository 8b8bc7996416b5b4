#pragma once

#include <span>
#include <vector>

namespace warp::stats {

double mean(std::span<const double> x);
/// Population standard deviation.
double stddev(std::span<const double> x);
/// Linear-interpolated sample quantile (Hyndman-Fan type 7). Reorders `scratch`.
double quantile_inplace(std::span<double> scratch, double q);
double quantile(std::span<const double> x, double q);
double median(std::span<const double> x);
double pearson(std::span<const double> a, std::span<const double> b);

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double at(double x) const { return intercept + slope * x; }
};
/// Ordinary least squares fit of y against x = 0, 1, ..., n-1.
Line fit_line(std::span<const double> y);

}  // namespace warp::stats
