#include "warp/ingest.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include "warp/csv.hpp"

namespace warp::ingest {

namespace {

constexpr const char* kRequired[] = {"link_id", "timestamp", "travel_time_s"};

std::optional<double> positive(std::optional<double> v) {
  return v && *v > 0.0 ? v : std::nullopt;
}

std::optional<double> non_negative(std::optional<double> v) {
  return v && *v >= 0.0 ? v : std::nullopt;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

ParseResult parse_csv(std::istream& in) {
  ParseResult result;
  std::string line;
  if (!std::getline(in, line)) throw Error("csv: empty input, header row missing");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::map<std::string, std::size_t> columns;
  const auto header = csv::split_line(line);
  for (std::size_t i = 0; i < header.size(); ++i) columns.emplace(trim(header[i]), i);

  std::string missing;
  for (const char* name : kRequired) {
    if (!columns.contains(name)) missing += (missing.empty() ? "" : ", ") + std::string(name);
  }
  if (!missing.empty()) throw Error("csv: missing required columns: " + missing);

  auto index_of = [&](const char* name) -> std::optional<std::size_t> {
    const auto it = columns.find(name);
    return it == columns.end() ? std::nullopt : std::optional(it->second);
  };
  const std::size_t c_link = *index_of("link_id");
  const std::size_t c_time = *index_of("timestamp");
  const std::size_t c_tt = *index_of("travel_time_s");
  const auto c_profile = index_of("profile_tt_s");
  const auto c_flow = index_of("flow_vph");
  const auto c_headway = index_of("headway_m");
  result.has_profile_column = c_profile.has_value();

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split_line(line);
    auto field = [&](std::optional<std::size_t> c) -> std::string_view {
      return c && *c < fields.size() ? std::string_view(fields[*c]) : std::string_view{};
    };
    LinkRecordRow row;
    row.link_id = trim(std::string(field(c_link)));
    if (row.link_id.empty()) {
      result.issues.push_back({line_no, "empty link_id"});
      continue;
    }
    const auto ts = parse_time(trim(std::string(field(c_time))));
    if (!ts) {
      result.issues.push_back({line_no, "unparseable timestamp '" + std::string(field(c_time)) + "'"});
      continue;
    }
    row.timestamp = *ts;
    row.travel_time = positive(csv::parse_number(field(c_tt)));
    row.published_profile = positive(csv::parse_number(field(c_profile)));
    row.flow = non_negative(csv::parse_number(field(c_flow)));
    row.headway = non_negative(csv::parse_number(field(c_headway)));
    result.rows.push_back(std::move(row));
  }
  return result;
}

TimeWindow infer_window(std::span<const LinkRecordRow> rows, std::optional<std::size_t> weeks) {
  if (rows.empty()) throw Error("cannot infer a time window from zero rows");
  const auto [lo, hi] = std::ranges::minmax_element(rows, {}, &LinkRecordRow::timestamp);
  MinuteTime start = week_floor(lo->timestamp);
  if (start < lo->timestamp) start += std::chrono::minutes(kMinutesPerWeek);
  const auto last_exclusive = hi->timestamp + std::chrono::minutes(1);
  if (last_exclusive <= start) throw Error("data span contains no whole week");
  std::size_t available = static_cast<std::size_t>((last_exclusive - start).count()) / kMinutesPerWeek;
  if (available == 0) throw Error("data span contains no whole week");
  if (weeks) {
    if (*weeks > available) {
      throw Error("requested " + std::to_string(*weeks) + " weeks but data holds " + std::to_string(available));
    }
    available = *weeks;
  }
  return {start, start + std::chrono::minutes(available * kMinutesPerWeek)};
}

FilterResult filter_links(std::span<const LinkRecordRow> rows, const TimeWindow& window,
                          const FilterOptions& options) {
  if (!(options.max_missing_fraction >= 0.0 && options.max_missing_fraction <= 1.0)) {
    throw Error("max_missing_fraction must be in [0, 1]");
  }
  if (!is_week_aligned(window.start) || window.end <= window.start || window.minutes() % kMinutesPerWeek != 0) {
    throw Error("not week-aligned");
  }
  FilterResult result;
  if (rows.empty()) {
    result.warnings.push_back("no rows to filter");
    return result;
  }

  struct Accum {
    std::vector<std::optional<double>> travel;
    std::vector<std::optional<double>> profile;
    std::vector<bool> seen;
    std::size_t duplicates = 0;
  };
  const std::size_t n = window.minutes();
  std::map<std::string, Accum> links;
  bool any_profile = false;
  for (const auto& row : rows) {
    auto& acc = links[row.link_id];
    if (acc.seen.empty()) {
      acc.travel.resize(n);
      acc.profile.resize(n);
      acc.seen.resize(n, false);
    }
    if (row.timestamp < window.start || row.timestamp >= window.end) continue;
    const auto i = static_cast<std::size_t>((row.timestamp - window.start).count());
    if (acc.seen[i]) {
      ++acc.duplicates;
      continue;
    }
    acc.seen[i] = true;
    acc.travel[i] = row.travel_time;
    acc.profile[i] = row.published_profile;
    any_profile = any_profile || row.published_profile.has_value();
  }

  const double bar = 1.0 - options.max_missing_fraction;
  for (auto& [link_id, acc] : links) {
    const auto present = static_cast<std::size_t>(std::ranges::count_if(acc.travel, [](const auto& v) { return v.has_value(); }));
    const double coverage = static_cast<double>(present) / static_cast<double>(n);
    if (acc.duplicates > 0) {
      result.warnings.push_back(link_id + ": " + std::to_string(acc.duplicates) + " duplicate minutes ignored");
    }
    if (options.excluded_links.contains(link_id)) {
      result.rejections.push_back({link_id, coverage, "excluded"});
      continue;
    }
    // Small tolerance so that e.g. exactly 90% passes a 10% cut despite rounding.
    if (present == 0 || coverage + 1e-12 < bar) {
      result.rejections.push_back({link_id, coverage, "coverage below " + csv::format_number(bar)});
      continue;
    }
    LinkDataset ds;
    ds.link_id = link_id;
    ds.coverage = coverage;
    ds.travel_time = interpolate_gaps(MinuteSeries(window.start, std::move(acc.travel)), options.max_gap);
    ds.published_profile = MinuteSeries(window.start, std::move(acc.profile));
    ds.has_profile = any_profile;
    result.datasets.push_back(std::move(ds));
  }
  return result;
}

TrainingWindow build_training_window(const LinkDataset& dataset, std::size_t fold, std::size_t train_weeks) {
  if (train_weeks < 1) throw Error("train_weeks must be >= 1");
  const std::size_t available = dataset.travel_time.size() / kMinutesPerWeek;
  const std::size_t required = train_weeks + fold + 1;
  if (!is_week_aligned(dataset.travel_time.start())) throw Error("not week-aligned");
  if (required > available) {
    throw Error("insufficient data: fold " + std::to_string(fold) + " needs " + std::to_string(required) +
                " weeks, dataset has " + std::to_string(available));
  }
  TrainingWindow w;
  w.train_offset = fold * kMinutesPerWeek;
  w.target_offset = (fold + train_weeks) * kMinutesPerWeek;
  w.training = dataset.travel_time.slice(w.train_offset, train_weeks * kMinutesPerWeek);
  const auto target = dataset.travel_time.slice(w.target_offset, kMinutesPerWeek);
  w.target = PartialWeekGrid(std::vector<std::optional<double>>(target.values().begin(), target.values().end()));
  w.target_start = target.start();
  return w;
}

std::vector<double> fill_by_week_profile(const MinuteSeries& series) {
  if (series.empty() || series.size() % kMinutesPerWeek != 0) throw Error("not week-aligned");
  if (series.present_count() == 0) throw Error("no anchor values");
  std::vector<double> sum(kMinutesPerWeek, 0.0);
  std::vector<std::size_t> count(kMinutesPerWeek, 0);
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i]) {
      sum[i % kMinutesPerWeek] += *series[i];
      ++count[i % kMinutesPerWeek];
    }
  }
  std::vector<std::optional<double>> filled(series.values().begin(), series.values().end());
  for (std::size_t i = 0; i < filled.size(); ++i) {
    const std::size_t m = i % kMinutesPerWeek;
    if (!filled[i] && count[m] > 0) filled[i] = sum[m] / static_cast<double>(count[m]);
  }
  auto interpolated = interpolate_gaps(MinuteSeries(series.start(), std::move(filled)), series.size());
  std::vector<std::optional<double>> values(interpolated.values().begin(), interpolated.values().end());
  // Hold the nearest value flat across leading/trailing runs.
  const auto first = std::ranges::find_if(values, [](const auto& v) { return v.has_value(); });
  for (auto it = values.begin(); it != first; ++it) *it = *first;
  const auto last = std::ranges::find_if(values.rbegin(), values.rend(), [](const auto& v) { return v.has_value(); });
  for (auto it = values.rbegin(); it != last; ++it) *it = *last;
  std::vector<double> out(values.size());
  std::ranges::transform(values, out.begin(), [](const auto& v) { return *v; });
  return out;
}

void write_rejections_csv(std::ostream& out, std::span<const Rejection> rejections) {
  out << "link_id,coverage,reason\n";
  for (const auto& r : rejections) out << r.link_id << ',' << csv::format_number(r.coverage) << ',' << r.reason << '\n';
}

void write_dataset_csv(std::ostream& out, const LinkDataset& dataset, bool with_header) {
  if (with_header) out << "link_id,timestamp,travel_time_s,profile_tt_s,flow_vph,headway_m\n";
  for (std::size_t i = 0; i < dataset.travel_time.size(); ++i) {
    out << dataset.link_id << ',' << format_time(dataset.travel_time.time_at(i)) << ','
        << csv::format_optional(dataset.travel_time[i]) << ','
        << csv::format_optional(dataset.published_profile[i]) << ",,\n";
  }
}

}  // namespace warp::ingest
