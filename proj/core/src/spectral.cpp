#include "warp/spectral.hpp"

#include <algorithm>

#include "warp/fft.hpp"

namespace warp::spectral {

void SpectralParams::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw Error("spectral.lambda must be in (0, 1]");
  if (!(keep_period_min > 0.0) || !(keep_period_min < keep_period_max)) {
    throw Error("spectral.keep_period_min must be positive and below spectral.keep_period_max");
  }
}

WeekSpectrum fft_band_limit(const WeekGrid& week, double keep_period_min, double keep_period_max,
                            std::size_t week_index) {
  if (!(keep_period_min < keep_period_max)) throw Error("keep_period_min must be below keep_period_max");
  WeekSpectrum out{fft::forward(week.values()), week_index};
  const std::size_t n = kMinutesPerWeek;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t folded = std::min(k, n - k);
    const double period = static_cast<double>(n) / static_cast<double>(folded);
    if (period < keep_period_min || period > keep_period_max) out.coefficients[k] = {};
  }
  return out;
}

WeekGrid to_week(const WeekSpectrum& spectrum) {
  return WeekGrid(fft::inverse_real(spectrum.coefficients));
}

WeekGrid spectral_ewma_predict(std::span<const WeekGrid> weeks, const SpectralParams& params) {
  params.validate();
  if (weeks.empty()) throw Error("spectral prediction needs at least one training week");
  auto smoothed = fft_band_limit(weeks[0], params.keep_period_min, params.keep_period_max, 0);
  for (std::size_t w = 1; w < weeks.size(); ++w) {
    const auto next = fft_band_limit(weeks[w], params.keep_period_min, params.keep_period_max, w);
    for (std::size_t k = 0; k < kMinutesPerWeek; ++k) {
      smoothed.coefficients[k] =
          params.lambda * next.coefficients[k] + (1.0 - params.lambda) * smoothed.coefficients[k];
    }
    smoothed.week_index = w;
  }
  return to_week(smoothed);
}

}  // namespace warp::spectral
