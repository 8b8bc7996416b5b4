#include "warp/profiler.hpp"

#include <algorithm>
#include <ostream>

#include "warp/csv.hpp"
#include "warp/stats.hpp"

namespace warp::profiler {

namespace {

constexpr std::pair<Method, std::string_view> kNames[] = {
    {Method::warp, "warp"}, {Method::ss, "ss"}, {Method::ewma, "ewma"}, {Method::published, "published"}};

void require_weeks(std::span<const WeekGrid> train) {
  if (train.empty()) throw Error("at least one training week is required");
}

// Linear interpolation across gaps within one week; ends are held flat.
WeekGrid fill_week(const PartialWeekGrid& week, const std::string& what) {
  std::vector<std::optional<double>> values(week.begin(), week.end());
  if (std::ranges::none_of(values, [](const auto& v) { return v.has_value(); })) {
    throw Error(what + " has no values");
  }
  auto filled = interpolate_gaps(MinuteSeries({}, std::move(values)), kMinutesPerWeek);
  std::vector<double> out(kMinutesPerWeek);
  const auto first = std::ranges::find_if(filled.values(), [](const auto& v) { return v.has_value(); });
  double carry = **first;
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) {
    if (filled[m]) carry = *filled[m];
    out[m] = carry;
  }
  return WeekGrid(std::move(out));
}

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [method, name] : kNames) {
    if (method == m) return name;
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [method, n] : kNames) {
    if (n == name) return method;
  }
  return std::nullopt;
}

WarpProfile hybrid_combine(const WeekGrid& spectral, const seasonal::SeasonalProfile& seasonal_profile,
                           double spike_floor, double positive_floor) {
  WarpProfile out;
  out.spectral = spectral;
  out.seasonal = seasonal_profile.combined;
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) {
    const bool spike = seasonal_profile.spike_seasonal[m] > spike_floor;
    out.regime[m] = spike ? 1 : 0;
    const double pick = spike ? out.seasonal[m] : out.spectral[m];
    out.combined[m] = pick > 0.0 ? pick : positive_floor;
  }
  return out;
}

WeekGrid ewma_profile(std::span<const WeekGrid> train, double alpha_mem) {
  require_weeks(train);
  if (!(alpha_mem >= 0.0 && alpha_mem <= 1.0)) throw Error("alpha_mem must be in [0, 1]");
  WeekGrid out = train.front();
  for (std::size_t w = 1; w < train.size(); ++w) {
    for (std::size_t m = 0; m < kMinutesPerWeek; ++m) {
      out[m] = alpha_mem * train[w][m] + (1.0 - alpha_mem) * out[m];
    }
  }
  return out;
}

WeekGrid simple_segmentation(std::span<const WeekGrid> train) {
  require_weeks(train);
  WeekGrid out;
  for (const auto& week : train) {
    for (std::size_t m = 0; m < kMinutesPerWeek; ++m) out[m] += week[m];
  }
  const double n = static_cast<double>(train.size());
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) out[m] /= n;
  return out;
}

void ForecastConfig::validate() const {
  if (train_weeks < 2) throw Error("train_weeks must be >= 2");
  if (folds < 1) throw Error("folds must be >= 1");
  if (!(alpha_mem >= 0.0 && alpha_mem <= 1.0)) throw Error("alpha_mem must be in [0, 1]");
  wavelet.validate();
  spectral.validate();
  seasonal.daily();
}

WarpProfile warp_predict(const MinuteSeries& training, const ForecastConfig& config) {
  const auto parts = wavelet::decompose(training, config.wavelet);
  const auto background_weeks = split_weeks(parts.background);
  const auto spectral_week = spectral::spectral_ewma_predict(background_weeks, config.spectral);
  const auto seasonal_profile = seasonal::seasonal_predict(parts.background, parts.spikes, config.seasonal);
  const double floor = stats::quantile(training.dense(), 0.01);
  auto profile = hybrid_combine(spectral_week, seasonal_profile, config.wavelet.spike_floor, floor);
  profile.target_week_start = training.time_at(training.size());
  return profile;
}

std::vector<FoldForecast> rolling_forecast(const ingest::LinkDataset& dataset, Method method,
                                           const ForecastConfig& config) {
  config.validate();
  if (method == Method::published && !dataset.has_profile) {
    throw Error("link " + dataset.link_id + ": method 'published' needs a profile_tt_s column");
  }
  std::vector<FoldForecast> out;
  out.reserve(config.folds);
  for (std::size_t fold = 0; fold < config.folds; ++fold) {
    auto window = ingest::build_training_window(dataset, fold, config.train_weeks);
    if (window.train_offset + window.training.size() != window.target_offset) {
      throw Error("training window overlaps its target week");
    }
    FoldForecast f;
    f.method = method;
    f.fold = fold;
    f.link_id = dataset.link_id;
    f.target_week_start = window.target_start;
    f.target = std::move(window.target);

    if (method == Method::published) {
      const auto slice = dataset.published_profile.slice(window.target_offset, kMinutesPerWeek);
      PartialWeekGrid published(std::vector<std::optional<double>>(slice.values().begin(), slice.values().end()));
      f.prediction = fill_week(published, "published profile of " + dataset.link_id);
      out.push_back(std::move(f));
      continue;
    }

    const auto training =
        MinuteSeries::from_dense(window.training.start(), ingest::fill_by_week_profile(window.training));
    if (method == Method::warp) {
      auto profile = warp_predict(training, config);
      profile.link_id = dataset.link_id;
      f.prediction = profile.combined;
      f.warp = std::move(profile);
    } else {
      const auto weeks = split_weeks(training);
      f.prediction = method == Method::ss ? simple_segmentation(weeks) : ewma_profile(weeks, config.alpha_mem);
    }
    out.push_back(std::move(f));
  }
  return out;
}

void write_profile_csv(std::ostream& out, const FoldForecast& forecast) {
  out << "link_id,week_start,minute_of_week,spectral_s,seasonal_s,regime,combined_s\n";
  const std::string week_start = format_time(forecast.target_week_start);
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) {
    out << forecast.link_id << ',' << week_start << ',' << m << ',';
    if (forecast.warp) {
      const auto& w = *forecast.warp;
      out << csv::format_number(w.spectral[m]) << ',' << csv::format_number(w.seasonal[m]) << ','
          << static_cast<int>(w.regime[m]) << ',';
    } else {
      out << ",,,";
    }
    out << csv::format_number(forecast.prediction[m]) << '\n';
  }
}

}  // namespace warp::profiler
