#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "warp/series.hpp"

namespace warp::ingest {

/// One CSV row: `link_id,timestamp,travel_time_s,profile_tt_s,flow_vph,headway_m`.
struct LinkRecordRow {
  std::string link_id;
  MinuteTime timestamp;
  std::optional<double> travel_time;
  std::optional<double> published_profile;
  std::optional<double> flow;
  std::optional<double> headway;
};

struct ParseIssue {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string message;
};

struct ParseResult {
  std::vector<LinkRecordRow> rows;
  std::vector<ParseIssue> issues;
  bool has_profile_column = false;
};

/// Requires the `link_id`, `timestamp` and `travel_time_s` columns (any order);
/// `profile_tt_s`, `flow_vph` and `headway_m` are optional. Malformed numbers,
/// non-positive travel times and negative flow/headway become missing; rows
/// with an empty link_id or bad timestamp are skipped and reported.
ParseResult parse_csv(std::istream& in);

struct LinkDataset {
  std::string link_id;
  MinuteSeries travel_time;
  MinuteSeries published_profile;
  double coverage = 0.0;  // raw present fraction before interpolation
  bool has_profile = false;
};

struct Rejection {
  std::string link_id;
  double coverage = 0.0;
  std::string reason;
};

/// Half-open [start, end).
struct TimeWindow {
  MinuteTime start;
  MinuteTime end;
  std::size_t minutes() const { return static_cast<std::size_t>((end - start).count()); }
};

struct FilterOptions {
  double max_missing_fraction = 0.10;
  std::size_t max_gap = 10;  // minutes; longer gaps stay missing
  std::set<std::string> excluded_links;
};

struct FilterResult {
  std::vector<LinkDataset> datasets;  // sorted by link_id
  std::vector<Rejection> rejections;  // sorted by link_id
  std::vector<std::string> warnings;
};

/// Largest week-aligned window inside the rows' time span, optionally capped to `weeks`.
TimeWindow infer_window(std::span<const LinkRecordRow> rows, std::optional<std::size_t> weeks = std::nullopt);

FilterResult filter_links(std::span<const LinkRecordRow> rows, const TimeWindow& window,
                          const FilterOptions& options = {});

struct TrainingWindow {
  MinuteSeries training;   // train_weeks whole weeks
  PartialWeekGrid target;  // realized travel times of the following week
  std::size_t train_offset = 0;
  std::size_t target_offset = 0;
  MinuteTime target_start;
};

/// Fold f trains on weeks [f, f + train_weeks) and targets week f + train_weeks.
TrainingWindow build_training_window(const LinkDataset& dataset, std::size_t fold, std::size_t train_weeks);

/// Dense copy of a week-aligned series: each missing minute takes the mean of
/// the same minute-of-week in the other weeks; minutes missing in every week
/// are linearly interpolated (held flat at the ends).
std::vector<double> fill_by_week_profile(const MinuteSeries& series);

void write_rejections_csv(std::ostream& out, std::span<const Rejection> rejections);
/// Same column layout parse_csv reads.
void write_dataset_csv(std::ostream& out, const LinkDataset& dataset, bool with_header);

}  // namespace warp::ingest
