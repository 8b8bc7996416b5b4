#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "warp/series.hpp"

namespace warp::eval {

inline constexpr std::size_t kBinCount = 7;
/// Column labels for the signed relative-error buckets
/// (-inf,-25%] (-25%,-15%] (-15%,-5%] (-5%,5%) [5%,15%) [15%,25%) [25%,inf).
extern const std::array<const char*, kBinCount> kBinLabels;

/// Prediction/actual pairs for minutes whose actual value is present.
struct ScoredMinutes {
  std::vector<double> predicted;
  std::vector<double> actual;
  std::vector<std::uint16_t> minute_of_week;

  static ScoredMinutes from(const WeekGrid& predicted, const PartialWeekGrid& actual);
  /// Pairs without a minute-of-week; they count as minute 0.
  static ScoredMinutes from(std::span<const double> predicted, std::span<const double> actual);

  void append(const ScoredMinutes& other);
  ScoredMinutes where(const std::function<bool(std::size_t minute_of_week)>& keep) const;
  std::size_t size() const { return actual.size(); }
};

double mare(const ScoredMinutes& s);
double rmse(const ScoredMinutes& s);
/// Percentage of scored minutes per bucket (see kBinLabels).
std::array<double, kBinCount> relative_error_bins(const ScoredMinutes& s);
/// MARE per time-of-day bucket of `bucket_minutes`, pooled over weekdays; nullopt for empty buckets.
std::vector<std::optional<double>> mare_by_time_of_day(const ScoredMinutes& s, std::size_t bucket_minutes);
/// MARE in 100 equal-count groups ranked by actual value; the first n % 100 groups get one extra.
std::vector<double> mare_by_percentile(const ScoredMinutes& s);

double mare(const WeekGrid& predicted, const PartialWeekGrid& actual);
double rmse(const WeekGrid& predicted, const PartialWeekGrid& actual);
std::array<double, kBinCount> relative_error_bins(const WeekGrid& predicted, const PartialWeekGrid& actual);

struct EvalReport {
  std::string link_id;
  std::string method;
  std::size_t fold = 0;
  std::size_t scored = 0;
  double mare = 0.0;
  double rmse = 0.0;
  std::array<double, kBinCount> bins{};
  std::vector<std::optional<double>> mare_by_hour;  // 24 entries
  std::vector<double> mare_by_percentile;           // 100 entries, empty below 100 scored minutes

  nlohmann::json to_json() const;
};

EvalReport make_report(std::string link_id, std::string method, std::size_t fold, const ScoredMinutes& s);

}  // namespace warp::eval
