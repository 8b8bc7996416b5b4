#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace warp {

inline constexpr std::size_t kMinutesPerDay = 1440;
inline constexpr std::size_t kMinutesPerWeek = 10080;

/// Raised for every contract violation in the library (bad input, bad configuration).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Timezone-naive wall-clock time at minute resolution. DST is not modelled.
using MinuteTime = std::chrono::sys_time<std::chrono::minutes>;

MinuteTime make_time(int year, unsigned month, unsigned day, int hour = 0, int minute = 0);

/// Parses `YYYY-MM-DDTHH:MM`. Returns nullopt on any deviation from that layout.
std::optional<MinuteTime> parse_time(std::string_view text);
std::string format_time(MinuteTime t);

/// Minutes since the most recent Monday 00:00.
std::size_t minute_of_week(MinuteTime t);
/// Start of the week containing `t`, i.e. the preceding (or equal) Monday 00:00.
MinuteTime week_floor(MinuteTime t);
bool is_week_aligned(MinuteTime t);

/// Minutely series with explicit gaps. Index i is start + i minutes.
class MinuteSeries {
 public:
  MinuteSeries() = default;
  MinuteSeries(MinuteTime start, std::vector<std::optional<double>> values);
  static MinuteSeries from_dense(MinuteTime start, std::span<const double> values);

  MinuteTime start() const { return start_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  MinuteTime time_at(std::size_t i) const { return start_ + std::chrono::minutes(i); }

  const std::optional<double>& operator[](std::size_t i) const { return values_[i]; }
  std::span<const std::optional<double>> values() const { return values_; }

  std::size_t present_count() const;
  bool is_dense() const;
  /// Throws Error("dense series required") when any value is missing.
  std::vector<double> dense() const;

  MinuteSeries slice(std::size_t offset, std::size_t count) const;

 private:
  MinuteTime start_{};
  std::vector<std::optional<double>> values_;
};

/// Exactly 10080 entries indexed by minute-of-week (0 = Monday 00:00).
template <typename T>
class BasicWeekGrid {
 public:
  BasicWeekGrid() : values_(kMinutesPerWeek) {}
  explicit BasicWeekGrid(std::vector<T> values) : values_(std::move(values)) {
    if (values_.size() != kMinutesPerWeek) {
      throw Error("week grid requires " + std::to_string(kMinutesPerWeek) + " values, got " +
                  std::to_string(values_.size()));
    }
  }

  static constexpr std::size_t size() { return kMinutesPerWeek; }
  T& operator[](std::size_t m) { return values_[m]; }
  const T& operator[](std::size_t m) const { return values_[m]; }
  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool operator==(const BasicWeekGrid&) const = default;

 private:
  std::vector<T> values_;
};

using WeekGrid = BasicWeekGrid<double>;
/// Week of realized (or published) values that may contain gaps.
using PartialWeekGrid = BasicWeekGrid<std::optional<double>>;

PartialWeekGrid to_partial(const WeekGrid& week);

/// Fills every run of at most `max_gap` consecutive missing values by linear
/// interpolation between the bounding present values. Runs touching either end
/// of the series have only one anchor and stay missing.
MinuteSeries interpolate_gaps(const MinuteSeries& series, std::size_t max_gap);

/// Splits a dense, week-aligned series into consecutive weeks.
std::vector<WeekGrid> split_weeks(const MinuteSeries& series);
/// As split_weeks, keeping gaps.
std::vector<PartialWeekGrid> split_partial_weeks(const MinuteSeries& series);

}  // namespace warp
