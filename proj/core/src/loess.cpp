#include "warp/loess.hpp"

#include <algorithm>
#include <cmath>

#include "warp/series.hpp"
#include "warp/stats.hpp"

namespace warp::seasonal {

void LoessParams::validate() const {
  if (window < 3 || window % 2 == 0) throw Error("loess.window must be odd and >= 3");
  if (degree != 0 && degree != 1) throw Error("loess.degree must be 0 or 1");
}

namespace detail {

std::optional<double> local_fit(std::span<const double> x, std::span<const double> y,
                                std::span<const double> robust, std::size_t left, std::size_t right,
                                double xs, double h, int degree, std::vector<double>& scratch) {
  const double range = x.back() - x.front();
  const double h9 = 0.999 * h;
  const double h1 = 0.001 * h;
  double total = 0.0;
  for (std::size_t j = left; j <= right; ++j) {
    scratch[j] = 0.0;
    const double r = std::abs(x[j] - xs);
    if (r <= h9) {
      double w = 1.0;
      if (r > h1) {
        const double u = r / h;
        const double t = 1.0 - u * u * u;
        w = t * t * t;
      }
      if (!robust.empty()) w *= robust[j];
      scratch[j] = w;
      total += w;
    }
  }
  if (total <= 0.0) return std::nullopt;
  for (std::size_t j = left; j <= right; ++j) scratch[j] /= total;

  if (h > 0.0 && degree > 0) {
    double centre = 0.0;
    for (std::size_t j = left; j <= right; ++j) centre += scratch[j] * x[j];
    double slope_num = xs - centre;
    double spread = 0.0;
    for (std::size_t j = left; j <= right; ++j) spread += scratch[j] * (x[j] - centre) * (x[j] - centre);
    // Nearly collinear design: keep the local mean.
    if (std::sqrt(spread) > 0.001 * range) {
      slope_num /= spread;
      for (std::size_t j = left; j <= right; ++j) scratch[j] *= slope_num * (x[j] - centre) + 1.0;
    }
  }
  double fit = 0.0;
  for (std::size_t j = left; j <= right; ++j) fit += scratch[j] * y[j];
  return fit;
}

}  // namespace detail

std::vector<double> bisquare_weights(std::span<const double> residuals) {
  std::vector<double> abs_r(residuals.size());
  std::ranges::transform(residuals, abs_r.begin(), [](double r) { return std::abs(r); });
  std::vector<double> weights(residuals.size(), 1.0);
  if (abs_r.empty()) return weights;
  double scale = 6.0 * stats::median(abs_r);
  if (scale <= 0.0) scale = 6.0 * stats::mean(abs_r);
  if (scale <= 0.0) return weights;
  const double c9 = 0.999 * scale;
  const double c1 = 0.001 * scale;
  for (std::size_t i = 0; i < abs_r.size(); ++i) {
    const double r = abs_r[i];
    if (r <= c1) {
      weights[i] = 1.0;
    } else if (r <= c9) {
      const double u = r / scale;
      weights[i] = (1.0 - u * u) * (1.0 - u * u);
    } else {
      weights[i] = 0.0;
    }
  }
  return weights;
}

namespace {

// Index range of the `q` samples nearest to xs in sorted x.
std::pair<std::size_t, std::size_t> nearest_window(std::span<const double> x, double xs, std::size_t q) {
  const std::size_t n = x.size();
  const auto it = std::ranges::lower_bound(x, xs);
  const auto pos = static_cast<std::size_t>(it - x.begin());
  std::size_t left = pos > q / 2 ? pos - q / 2 : 0;
  left = std::min(left, n - q);
  while (left + q < n && xs - x[left] > x[left + q] - xs) ++left;
  while (left > 0 && x[left + q - 1] - xs > xs - x[left - 1]) --left;
  return {left, left + q - 1};
}

}  // namespace

std::vector<double> loess(std::span<const double> x, std::span<const double> y,
                          std::span<const double> eval_points, const LoessParams& params) {
  params.validate();
  if (x.size() != y.size()) throw Error("loess: x and y lengths differ");
  if (params.window > x.size()) {
    throw Error("loess: window " + std::to_string(params.window) + " exceeds sample count " +
                std::to_string(x.size()));
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw Error("loess: x must be strictly increasing");
  }

  std::vector<double> scratch(x.size());
  std::vector<double> robust;
  auto fit_one = [&](double xs) {
    const auto [left, right] = nearest_window(x, xs, params.window);
    const double h = std::max(xs - x[left], x[right] - xs);
    const auto v = detail::local_fit(x, y, robust, left, right, xs, h, params.degree, scratch);
    if (v) return *v;
    // All weights vanished: fall back to the nearest observation.
    const auto [l1, r1] = nearest_window(x, xs, 1);
    return y[l1 + (r1 - l1)];
  };

  for (std::size_t iter = 0; iter < params.robustness_iters; ++iter) {
    std::vector<double> residuals(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) residuals[i] = y[i] - fit_one(x[i]);
    robust = bisquare_weights(residuals);
  }

  std::vector<double> out(eval_points.size());
  for (std::size_t k = 0; k < eval_points.size(); ++k) out[k] = fit_one(eval_points[k]);
  return out;
}

}  // namespace warp::seasonal
