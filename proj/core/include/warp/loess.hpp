#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace warp::seasonal {

struct LoessParams {
  std::size_t window = 3;  // odd, >= 3: neighbourhood size in samples
  int degree = 1;          // 0 or 1
  std::size_t robustness_iters = 0;

  void validate() const;
};

/// Locally weighted regression of y on x (x strictly increasing), evaluated at
/// `eval_points`. Each fit uses the `window` nearest samples with tricube weights;
/// robustness iterations refit with bisquare weights on the residuals.
std::vector<double> loess(std::span<const double> x, std::span<const double> y,
                          std::span<const double> eval_points, const LoessParams& params);

/// Bisquare robustness weights from residuals, scaled by 6 * median |r|.
/// When the median absolute residual is zero the mean absolute residual is
/// used instead; all-zero residuals give unit weights.
std::vector<double> bisquare_weights(std::span<const double> residuals);

namespace detail {

/// Weighted local polynomial (degree 0 or 1) at `xs` over samples
/// [left, right] with bandwidth `h`. `robust` may be empty. `scratch` must have
/// x.size() entries. Returns nullopt when every weight vanishes.
std::optional<double> local_fit(std::span<const double> x, std::span<const double> y,
                                std::span<const double> robust, std::size_t left, std::size_t right,
                                double xs, double h, int degree, std::vector<double>& scratch);

}  // namespace detail

}  // namespace warp::seasonal
