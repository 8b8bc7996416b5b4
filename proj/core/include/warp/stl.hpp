#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace warp::seasonal {

/// Window sizes are in samples, except seasonal_window which counts cycles.
/// Zero means "derive the standard default" (see resolved()).
struct StlParams {
  std::size_t period = 0;
  std::size_t seasonal_window = 11;
  std::size_t trend_window = 0;    // default: smallest odd >= 1.5 period / (1 - 1.5 / seasonal_window)
  std::size_t lowpass_window = 0;  // default: smallest odd >= period
  int seasonal_degree = 0;
  int trend_degree = 1;
  int lowpass_degree = 1;
  std::size_t seasonal_jump = 0;  // default: ceil(window / 10)
  std::size_t trend_jump = 0;
  std::size_t lowpass_jump = 0;
  std::size_t inner_iters = 2;
  std::size_t outer_iters = 1;  // robustness passes after the first

  static StlParams for_period(std::size_t period);
  StlParams resolved() const;
};

struct StlResult {
  std::vector<double> seasonal;
  std::vector<double> trend;
  std::vector<double> remainder;  // input - seasonal - trend
  std::vector<double> robustness_weights;
  std::size_t period = 0;
};

/// Seasonal-trend decomposition by LOESS. Requires length >= 2 * period.
StlResult stl(std::span<const double> series, const StlParams& params);

}  // namespace warp::seasonal
