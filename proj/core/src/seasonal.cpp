#include "warp/seasonal.hpp"

#include "warp/stats.hpp"

namespace warp::seasonal {

StlParams SeasonalConfig::daily() const {
  StlParams p;
  p.period = kMinutesPerDay;
  p.seasonal_window = seasonal_window;
  p.inner_iters = inner_iters;
  p.outer_iters = outer_iters;
  return p.resolved();
}

StlParams SeasonalConfig::weekly() const {
  StlParams p = daily();
  p.period = kMinutesPerWeek;
  p.trend_window = 0;
  p.lowpass_window = 0;
  p.trend_jump = 0;
  p.lowpass_jump = 0;
  return p.resolved();
}

WeekGrid average_by_minute_of_week(std::span<const double> series) {
  if (series.empty() || series.size() % kMinutesPerWeek != 0) throw Error("not week-aligned");
  const std::size_t weeks = series.size() / kMinutesPerWeek;
  WeekGrid out;
  for (std::size_t i = 0; i < series.size(); ++i) out[i % kMinutesPerWeek] += series[i];
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) out[m] /= static_cast<double>(weeks);
  return out;
}

SeasonalFit seasonal_fit(const MinuteSeries& background_train, const MinuteSeries& spikes_train,
                         const SeasonalConfig& config) {
  if (background_train.size() != spikes_train.size() || background_train.start() != spikes_train.start()) {
    throw Error("background and spike series must share start and length");
  }
  if (!is_week_aligned(background_train.start()) || background_train.size() % kMinutesPerWeek != 0 ||
      background_train.size() < 2 * kMinutesPerWeek) {
    throw Error("seasonal prediction needs at least two whole, week-aligned training weeks");
  }
  const auto background = background_train.dense();
  const auto spikes = spikes_train.dense();
  const std::size_t n = background.size();

  SeasonalFit fit;
  fit.daily = stl(background, config.daily());
  std::vector<double> deseasoned(n);
  for (std::size_t i = 0; i < n; ++i) deseasoned[i] = fit.daily.trend[i] + fit.daily.remainder[i];
  fit.weekly = stl(deseasoned, config.weekly());

  std::vector<double> global(n);
  for (std::size_t i = 0; i < n; ++i) global[i] = fit.daily.seasonal[i] + fit.weekly.seasonal[i];
  fit.profile.global_seasonal = average_by_minute_of_week(global);

  const auto line = stats::fit_line(fit.weekly.trend);
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) {
    fit.profile.baseline[m] = line.at(static_cast<double>(n + m));
  }

  fit.spikes = stl(spikes, config.weekly());
  fit.profile.spike_seasonal = average_by_minute_of_week(fit.spikes.seasonal);

  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) {
    fit.profile.combined[m] =
        fit.profile.baseline[m] + fit.profile.global_seasonal[m] + fit.profile.spike_seasonal[m];
  }
  return fit;
}

SeasonalProfile seasonal_predict(const MinuteSeries& background_train, const MinuteSeries& spikes_train,
                                 const SeasonalConfig& config) {
  return seasonal_fit(background_train, spikes_train, config).profile;
}

}  // namespace warp::seasonal
