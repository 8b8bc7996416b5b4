#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "warp/ingest.hpp"
#include "warp/seasonal.hpp"
#include "warp/series.hpp"
#include "warp/spectral.hpp"
#include "warp/wavelet.hpp"

namespace warp::profiler {

enum class Method { warp, ss, ewma, published };

std::string_view method_name(Method m);
/// Accepts the lowercase names used by method_name.
std::optional<Method> parse_method(std::string_view name);

using RegimeGrid = BasicWeekGrid<std::uint8_t>;

struct WarpProfile {
  std::string link_id;
  MinuteTime target_week_start;
  WeekGrid spectral;
  WeekGrid seasonal;
  RegimeGrid regime;  // 1 where the seasonal branch is used
  WeekGrid combined;
};

/// Picks seasonal.combined where spike_seasonal > spike_floor, spectral elsewhere.
/// Non-positive picks are replaced by `positive_floor`.
WarpProfile hybrid_combine(const WeekGrid& spectral, const seasonal::SeasonalProfile& seasonal_profile,
                           double spike_floor, double positive_floor);

/// Per minute-of-week x <- alpha_mem * week + (1 - alpha_mem) * x, seeded with the first week.
WeekGrid ewma_profile(std::span<const WeekGrid> train, double alpha_mem);

/// Per minute-of-week mean of the training weeks.
WeekGrid simple_segmentation(std::span<const WeekGrid> train);

struct ForecastConfig {
  std::size_t train_weeks = 8;
  std::size_t folds = 4;
  double alpha_mem = 0.3;
  wavelet::WaveletParams wavelet;
  spectral::SpectralParams spectral;
  seasonal::SeasonalConfig seasonal;

  void validate() const;
};

struct FoldForecast {
  Method method = Method::ss;
  std::size_t fold = 0;
  std::string link_id;
  MinuteTime target_week_start;
  WeekGrid prediction;
  PartialWeekGrid target;
  std::optional<WarpProfile> warp;  // set for Method::warp
};

/// The WARP pipeline on one dense, week-aligned training series.
WarpProfile warp_predict(const MinuteSeries& training, const ForecastConfig& config);

/// One forecast per fold; fold f trains on weeks [f, f + train_weeks) and
/// predicts week f + train_weeks. Training gaps are filled from the same
/// minute-of-week in the other training weeks before any method runs.
std::vector<FoldForecast> rolling_forecast(const ingest::LinkDataset& dataset, Method method,
                                           const ForecastConfig& config);

/// `link_id,week_start,minute_of_week,spectral_s,seasonal_s,regime,combined_s`.
/// Baseline methods leave the spectral, seasonal and regime cells empty.
void write_profile_csv(std::ostream& out, const FoldForecast& forecast);

}  // namespace warp::profiler
