#include "warp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace warp::eval {

const std::array<const char*, kBinCount> kBinLabels = {"le_m25", "m25_m15", "m15_m5", "m5_p5",
                                                       "p5_p15", "p15_p25", "ge_p25"};

namespace {

void require_scored(const ScoredMinutes& s) {
  if (s.size() == 0) throw Error("no scored minutes");
}

std::size_t bucket_of(double e) {
  if (e <= -0.25) return 0;
  if (e <= -0.15) return 1;
  if (e <= -0.05) return 2;
  if (e < 0.05) return 3;
  if (e < 0.15) return 4;
  if (e < 0.25) return 5;
  return 6;
}

nlohmann::json optional_array(const std::vector<std::optional<double>>& v) {
  auto out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(x ? nlohmann::json(*x) : nlohmann::json(nullptr));
  return out;
}

}  // namespace

ScoredMinutes ScoredMinutes::from(const WeekGrid& predicted, const PartialWeekGrid& actual) {
  ScoredMinutes s;
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) {
    if (!actual[m]) continue;
    s.predicted.push_back(predicted[m]);
    s.actual.push_back(*actual[m]);
    s.minute_of_week.push_back(static_cast<std::uint16_t>(m));
  }
  return s;
}

ScoredMinutes ScoredMinutes::from(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) throw Error("predicted and actual differ in length");
  ScoredMinutes s;
  s.predicted.assign(predicted.begin(), predicted.end());
  s.actual.assign(actual.begin(), actual.end());
  s.minute_of_week.assign(actual.size(), 0);
  return s;
}

void ScoredMinutes::append(const ScoredMinutes& other) {
  predicted.insert(predicted.end(), other.predicted.begin(), other.predicted.end());
  actual.insert(actual.end(), other.actual.begin(), other.actual.end());
  minute_of_week.insert(minute_of_week.end(), other.minute_of_week.begin(), other.minute_of_week.end());
}

ScoredMinutes ScoredMinutes::where(const std::function<bool(std::size_t)>& keep) const {
  ScoredMinutes s;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!keep(minute_of_week[i])) continue;
    s.predicted.push_back(predicted[i]);
    s.actual.push_back(actual[i]);
    s.minute_of_week.push_back(minute_of_week[i]);
  }
  return s;
}

double mare(const ScoredMinutes& s) {
  require_scored(s);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += std::abs(s.predicted[i] - s.actual[i]) / s.actual[i];
  return sum / static_cast<double>(s.size());
}

double rmse(const ScoredMinutes& s) {
  require_scored(s);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = s.predicted[i] - s.actual[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(s.size()));
}

std::array<double, kBinCount> relative_error_bins(const ScoredMinutes& s) {
  require_scored(s);
  std::array<std::size_t, kBinCount> counts{};
  for (std::size_t i = 0; i < s.size(); ++i) ++counts[bucket_of((s.predicted[i] - s.actual[i]) / s.actual[i])];
  std::array<double, kBinCount> out{};
  for (std::size_t b = 0; b < kBinCount; ++b) {
    out[b] = 100.0 * static_cast<double>(counts[b]) / static_cast<double>(s.size());
  }
  return out;
}

std::vector<std::optional<double>> mare_by_time_of_day(const ScoredMinutes& s, std::size_t bucket_minutes) {
  if (bucket_minutes == 0 || kMinutesPerDay % bucket_minutes != 0) {
    throw Error("time-of-day bucket must divide 1440 minutes");
  }
  const std::size_t n = kMinutesPerDay / bucket_minutes;
  std::vector<double> sum(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::size_t b = (s.minute_of_week[i] % kMinutesPerDay) / bucket_minutes;
    sum[b] += std::abs(s.predicted[i] - s.actual[i]) / s.actual[i];
    ++count[b];
  }
  std::vector<std::optional<double>> out(n);
  for (std::size_t b = 0; b < n; ++b) {
    if (count[b] > 0) out[b] = sum[b] / static_cast<double>(count[b]);
  }
  return out;
}

std::vector<double> mare_by_percentile(const ScoredMinutes& s) {
  constexpr std::size_t kGroups = 100;
  if (s.size() < kGroups) throw Error("percentile breakdown needs at least 100 scored minutes");
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, {}, [&](std::size_t i) { return s.actual[i]; });
  const std::size_t base = s.size() / kGroups;
  const std::size_t extra = s.size() % kGroups;
  std::vector<double> out(kGroups);
  std::size_t pos = 0;
  for (std::size_t g = 0; g < kGroups; ++g) {
    const std::size_t len = base + (g < extra ? 1 : 0);
    double sum = 0.0;
    for (std::size_t k = pos; k < pos + len; ++k) {
      const std::size_t i = order[k];
      sum += std::abs(s.predicted[i] - s.actual[i]) / s.actual[i];
    }
    out[g] = sum / static_cast<double>(len);
    pos += len;
  }
  return out;
}

double mare(const WeekGrid& predicted, const PartialWeekGrid& actual) {
  return mare(ScoredMinutes::from(predicted, actual));
}

double rmse(const WeekGrid& predicted, const PartialWeekGrid& actual) {
  return rmse(ScoredMinutes::from(predicted, actual));
}

std::array<double, kBinCount> relative_error_bins(const WeekGrid& predicted, const PartialWeekGrid& actual) {
  return relative_error_bins(ScoredMinutes::from(predicted, actual));
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json bins_json = nlohmann::json::object();
  for (std::size_t b = 0; b < kBinCount; ++b) bins_json[kBinLabels[b]] = bins[b];
  return {
      {"link_id", link_id},
      {"method", method},
      {"fold", fold},
      {"scored_minutes", scored},
      {"mare", mare},
      {"rmse_s", rmse},
      {"bins_percent", bins_json},
      {"mare_by_hour", optional_array(mare_by_hour)},
      {"mare_by_percentile", mare_by_percentile},
  };
}

EvalReport make_report(std::string link_id, std::string method, std::size_t fold, const ScoredMinutes& s) {
  EvalReport r;
  r.link_id = std::move(link_id);
  r.method = std::move(method);
  r.fold = fold;
  r.scored = s.size();
  r.mare = eval::mare(s);
  r.rmse = eval::rmse(s);
  r.bins = relative_error_bins(s);
  r.mare_by_hour = mare_by_time_of_day(s, 60);
  if (s.size() >= 100) r.mare_by_percentile = mare_by_percentile(s);
  return r;
}

}  // namespace warp::eval
