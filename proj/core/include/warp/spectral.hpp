#pragma once

#include <complex>
#include <span>
#include <vector>

#include "warp/series.hpp"

namespace warp::spectral {

struct SpectralParams {
  double lambda = 0.5;              // EWMA weight of the newest week
  double keep_period_min = 240.0;   // minutes
  double keep_period_max = 10080.0; // minutes

  void validate() const;
};

/// DFT of one background week (length 10080, conjugate symmetric).
struct WeekSpectrum {
  std::vector<std::complex<double>> coefficients;
  std::size_t week_index = 0;
};

/// Zeroes every nonzero-frequency bin whose period 10080/k lies outside
/// [keep_period_min, keep_period_max]. The mean (k = 0) always passes.
WeekSpectrum fft_band_limit(const WeekGrid& week, double keep_period_min, double keep_period_max,
                            std::size_t week_index = 0);

/// Inverse transform, real part.
WeekGrid to_week(const WeekSpectrum& spectrum);

/// Band-limits each week, folds S <- lambda * S_w + (1 - lambda) * S over the
/// complex coefficients in chronological order (seeded with the first week),
/// and inverts the result.
WeekGrid spectral_ewma_predict(std::span<const WeekGrid> weeks, const SpectralParams& params);

}  // namespace warp::spectral
