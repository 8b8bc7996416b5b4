#pragma once

#include <cstddef>

#include "warp/series.hpp"
#include "warp/stl.hpp"

namespace warp::seasonal {

struct SeasonalConfig {
  std::size_t seasonal_window = 11;
  std::size_t inner_iters = 2;
  std::size_t outer_iters = 1;

  StlParams daily() const;
  StlParams weekly() const;
};

/// One predicted week of the seasonal branch.
struct SeasonalProfile {
  WeekGrid baseline;         // trend line extrapolated over the prediction week
  WeekGrid global_seasonal;  // daily + weekly seasonality, averaged per minute-of-week
  WeekGrid spike_seasonal;   // weekly seasonality of the spike series, averaged
  WeekGrid combined;         // baseline + global_seasonal + spike_seasonal
};

/// Full intermediate state, for diagnostics and tests.
struct SeasonalFit {
  SeasonalProfile profile;
  StlResult daily;   // on the background
  StlResult weekly;  // on daily trend + remainder
  StlResult spikes;  // weekly STL of the spike series
};

/// Two-pass STL on the background (daily, then weekly on trend + remainder),
/// a straight-line trend extrapolated one week ahead, and the weekly
/// seasonality of the spikes. Inputs must be dense, week-aligned, equal length
/// and span at least two weeks.
SeasonalFit seasonal_fit(const MinuteSeries& background_train, const MinuteSeries& spikes_train,
                         const SeasonalConfig& config = {});

SeasonalProfile seasonal_predict(const MinuteSeries& background_train, const MinuteSeries& spikes_train,
                                 const SeasonalConfig& config = {});

/// Per minute-of-week mean over the whole weeks of a week-aligned series.
WeekGrid average_by_minute_of_week(std::span<const double> series);

}  // namespace warp::seasonal
