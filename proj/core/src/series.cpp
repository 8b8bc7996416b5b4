#include "warp/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace warp {

namespace {

bool parse_fixed(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  const char* first = text.data() + pos;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

MinuteTime make_time(int year, unsigned month, unsigned day, int hour, int minute) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
  return sys_days{ymd} + hours{hour} + minutes{minute};
}

std::optional<MinuteTime> parse_time(std::string_view text) {
  // YYYY-MM-DDTHH:MM
  if (text.size() != 16 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':') {
    return std::nullopt;
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  if (!parse_fixed(text, 0, 4, y) || !parse_fixed(text, 5, 2, mo) || !parse_fixed(text, 8, 2, d) ||
      !parse_fixed(text, 11, 2, h) || !parse_fixed(text, 14, 2, mi)) {
    return std::nullopt;
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi};
}

std::string format_time(MinuteTime t) {
  using namespace std::chrono;
  const auto day_start = floor<days>(t);
  const year_month_day ymd{day_start};
  const auto in_day = (t - day_start).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(in_day / 60), static_cast<int>(in_day % 60));
  return buf;
}

std::size_t minute_of_week(MinuteTime t) {
  using namespace std::chrono;
  const auto day_start = floor<days>(t);
  const unsigned iso = weekday{day_start}.iso_encoding();  // Monday = 1
  return (iso - 1) * kMinutesPerDay + static_cast<std::size_t>((t - day_start).count());
}

MinuteTime week_floor(MinuteTime t) {
  return t - std::chrono::minutes(minute_of_week(t));
}

bool is_week_aligned(MinuteTime t) {
  return minute_of_week(t) == 0;
}

MinuteSeries::MinuteSeries(MinuteTime start, std::vector<std::optional<double>> values)
    : start_(start), values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] && !std::isfinite(*values_[i])) {
      throw Error("non-finite value at index " + std::to_string(i));
    }
  }
}

MinuteSeries MinuteSeries::from_dense(MinuteTime start, std::span<const double> values) {
  std::vector<std::optional<double>> v(values.begin(), values.end());
  return MinuteSeries(start, std::move(v));
}

std::size_t MinuteSeries::present_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](const auto& v) { return v.has_value(); }));
}

bool MinuteSeries::is_dense() const {
  return present_count() == values_.size();
}

std::vector<double> MinuteSeries::dense() const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (const auto& v : values_) {
    if (!v) throw Error("dense series required");
    out.push_back(*v);
  }
  return out;
}

MinuteSeries MinuteSeries::slice(std::size_t offset, std::size_t count) const {
  if (offset + count > values_.size()) {
    throw Error("slice [" + std::to_string(offset) + ", " + std::to_string(offset + count) +
                ") exceeds series length " + std::to_string(values_.size()));
  }
  std::vector<std::optional<double>> v(values_.begin() + static_cast<std::ptrdiff_t>(offset),
                                       values_.begin() + static_cast<std::ptrdiff_t>(offset + count));
  return MinuteSeries(time_at(offset), std::move(v));
}

PartialWeekGrid to_partial(const WeekGrid& week) {
  std::vector<std::optional<double>> v(week.begin(), week.end());
  return PartialWeekGrid(std::move(v));
}

MinuteSeries interpolate_gaps(const MinuteSeries& series, std::size_t max_gap) {
  if (max_gap < 1) throw Error("max_gap must be at least 1");
  if (series.empty()) return series;
  if (series.present_count() == 0) throw Error("no anchor values");

  std::vector<std::optional<double>> out(series.values().begin(), series.values().end());
  const std::size_t n = out.size();
  std::size_t i = 0;
  while (i < n) {
    if (out[i]) {
      ++i;
      continue;
    }
    const std::size_t gap_begin = i;
    while (i < n && !out[i]) ++i;
    const std::size_t gap_end = i;  // exclusive
    const std::size_t run = gap_end - gap_begin;
    if (gap_begin == 0 || gap_end == n || run > max_gap) continue;
    const double left = *out[gap_begin - 1];
    const double right = *out[gap_end];
    const double span = static_cast<double>(run + 1);
    for (std::size_t k = gap_begin; k < gap_end; ++k) {
      const double frac = static_cast<double>(k - gap_begin + 1) / span;
      out[k] = left + (right - left) * frac;
    }
  }
  return MinuteSeries(series.start(), std::move(out));
}

namespace {

void require_week_aligned(const MinuteSeries& series) {
  if (series.empty() || series.size() % kMinutesPerWeek != 0 || !is_week_aligned(series.start())) {
    throw Error("not week-aligned");
  }
}

}  // namespace

std::vector<WeekGrid> split_weeks(const MinuteSeries& series) {
  require_week_aligned(series);
  const auto dense = series.dense();
  std::vector<WeekGrid> weeks;
  weeks.reserve(series.size() / kMinutesPerWeek);
  for (std::size_t w = 0; w * kMinutesPerWeek < dense.size(); ++w) {
    auto first = dense.begin() + static_cast<std::ptrdiff_t>(w * kMinutesPerWeek);
    weeks.emplace_back(std::vector<double>(first, first + kMinutesPerWeek));
  }
  return weeks;
}

std::vector<PartialWeekGrid> split_partial_weeks(const MinuteSeries& series) {
  require_week_aligned(series);
  std::vector<PartialWeekGrid> weeks;
  const auto values = series.values();
  for (std::size_t w = 0; w * kMinutesPerWeek < values.size(); ++w) {
    auto first = values.begin() + static_cast<std::ptrdiff_t>(w * kMinutesPerWeek);
    weeks.emplace_back(std::vector<std::optional<double>>(first, first + kMinutesPerWeek));
  }
  return weeks;
}

}  // namespace warp
