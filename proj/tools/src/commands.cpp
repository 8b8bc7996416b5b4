#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "io.hpp"
#include "warp/csv.hpp"
#include "warp/eval.hpp"
#include "warp/ingest.hpp"
#include "warp/profiler.hpp"
#include "warp/synth.hpp"
#include "warp/wavelet.hpp"

namespace warp::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

struct Settings {
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::string output;
  std::string profiles;

  std::size_t synth_weeks = 12;
  std::size_t links = 1;
  double incident_rate = 2.0;
  double noise_sd = 1.5;

  std::size_t window_weeks = 0;  // 0 = every whole week in the data
  double max_missing = 0.10;
  std::size_t max_gap = 10;
  std::vector<std::string> exclude;

  profiler::ForecastConfig forecast;
  std::vector<std::string> methods{"warp", "ss", "ewma"};
  std::size_t power_stride = 0;
  std::size_t tod_bucket = 60;
};

// -- option groups --------------------------------------------------------------

// Reads `key=value` lines (keys are long option names) into the selected
// subcommand. Keys that only other subcommands know are skipped.
class FlatConfig : public CLI::ConfigBase {
 public:
  FlatConfig(std::string section, std::set<std::string> own, std::set<std::string> known)
      : section_(std::move(section)), own_(std::move(own)), known_(std::move(known)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::vector<CLI::ConfigItem> kept;
    for (auto& item : CLI::ConfigBase::from_config(input)) {
      if (!item.parents.empty()) throw CLI::ConfigError("config: sections are not supported (" + item.fullname() + ")");
      if (!known_.contains(item.name)) throw CLI::ConfigError("config: unknown key '" + item.name + "'");
      if (!own_.contains(item.name)) continue;
      item.parents = {section_};
      kept.push_back(std::move(item));
    }
    return kept;
  }

 private:
  std::string section_;
  std::set<std::string> own_;
  std::set<std::string> known_;
};

std::set<std::string> long_names(const CLI::App& app) {
  std::set<std::string> out;
  for (const CLI::Option* opt : app.get_options()) {
    for (const auto& n : opt->get_lnames()) out.insert(n);
  }
  return out;
}

void add_common(CLI::App* sub, Settings& s) {
  sub->fallthrough();
  sub->add_option("--jobs", s.jobs, "Concurrent per-link jobs")->check(CLI::Range(1, 256));
  sub->add_option("--seed", s.seed, "Seed for all randomness");
  sub->add_option("-o,--output", s.output, "Output directory")->required();
}

void add_data(CLI::App* sub, Settings& s) {
  sub->add_option("-i,--input", s.inputs, "Input CSV file(s)")->required()->check(CLI::ExistingFile);
  sub->add_option("--weeks", s.window_weeks, "Whole weeks to use from the first Monday (0 = all)");
  sub->add_option("--max-missing", s.max_missing, "Reject links missing more than this fraction")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--max-gap", s.max_gap, "Interpolate gaps up to this many minutes")->check(CLI::Range(1, 1000000));
  sub->add_option("--exclude", s.exclude, "Link ids to drop")->delimiter(',');
}

void add_wavelet(CLI::App* sub, Settings& s) {
  auto& w = s.forecast.wavelet;
  sub->add_option("--alpha", w.alpha, "Spike threshold multiplier on the IQR")->check(CLI::NonNegativeNumber);
  sub->add_option("--beta", w.beta, "Morse beta")->check(CLI::PositiveNumber);
  sub->add_option("--gamma", w.gamma, "Morse gamma")->check(CLI::PositiveNumber);
  sub->add_option("--scales", w.n_scales, "Number of wavelet scales")->check(CLI::Range(2, 100000));
  sub->add_option("--period-min", w.period_min, "Shortest scale period, minutes")->check(CLI::PositiveNumber);
  sub->add_option("--period-max", w.period_max, "Longest scale period, minutes")->check(CLI::PositiveNumber);
  sub->add_option("--spike-floor", w.spike_floor, "Spikes at or below this many seconds are dropped")
      ->check(CLI::NonNegativeNumber);
}

void add_forecast(CLI::App* sub, Settings& s) {
  auto& f = s.forecast;
  sub->add_option("--lambda", f.spectral.lambda, "Spectral EWMA weight of the newest week")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--keep-period-min", f.spectral.keep_period_min, "Shortest kept period, minutes")
      ->check(CLI::PositiveNumber);
  sub->add_option("--keep-period-max", f.spectral.keep_period_max, "Longest kept period, minutes")
      ->check(CLI::PositiveNumber);
  sub->add_option("--stl-seasonal-window", f.seasonal.seasonal_window, "STL seasonal window, cycles")
      ->check(CLI::Range(3, 100001));
  sub->add_option("--stl-inner", f.seasonal.inner_iters, "STL inner iterations")->check(CLI::Range(1, 100));
  sub->add_option("--stl-outer", f.seasonal.outer_iters, "STL robustness iterations")->check(CLI::Range(0, 100));
  sub->add_option("--train-weeks", f.train_weeks, "Training weeks per fold")->check(CLI::Range(2, 520));
  sub->add_option("--folds", f.folds, "Rolling folds")->check(CLI::Range(1, 520));
  sub->add_option("--alpha-mem", f.alpha_mem, "EWMA baseline memory")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--method", s.methods, "Comma-separated: warp, ss, ewma, published")
      ->delimiter(',')
      ->check(CLI::IsMember({"warp", "ss", "ewma", "published"}));
}

// -- manifest --------------------------------------------------------------------

std::map<std::string, std::string> resolved_config(const CLI::App& sub) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      if (r.size() == 1 && opt->get_expected_max() <= 1) {
        value = r.front();
      } else {
        value = "[";
        for (std::size_t i = 0; i < r.size(); ++i) value += (i ? "," : "") + r[i];
        value += "]";
      }
    } else {
      value = opt->get_default_str();
    }
    if (!value.empty() && value != "[]" && value != "{}") out[name] = value;
  }
  return out;
}

void write_manifest(const fs::path& dir, const CLI::App& sub, const std::vector<fs::path>& inputs,
                    std::vector<std::string> outputs) {
  const auto config = resolved_config(sub);
  write_atomic(dir / "run.conf", [&](std::ostream& o) {
    o << "# warp " << sub.get_name() << "\n";
    for (const auto& [k, v] : config) o << k << '=' << v << '\n';
  });
  outputs.push_back("run.conf");
  std::ranges::sort(outputs);

  nlohmann::json j;
  j["tool"] = "warp";
  j["version"] = kVersion;
  j["command"] = sub.get_name();
  j["config"] = config;
  auto in = nlohmann::json::array();
  for (const auto& p : inputs) {
    in.push_back({{"path", p.generic_string()}, {"bytes", fs::file_size(p)}, {"sha256", sha256_file(p)}});
  }
  j["inputs"] = in;
  j["outputs"] = outputs;
  write_atomic(dir / "manifest.json", [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

// -- shared data loading -------------------------------------------------------------

std::vector<ingest::LinkRecordRow> read_rows(const Settings& s, std::ostream& err, bool& has_profile) {
  std::vector<ingest::LinkRecordRow> rows;
  has_profile = false;
  for (const auto& path : s.inputs) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    auto parsed = ingest::parse_csv(in);
    has_profile = has_profile || parsed.has_profile_column;
    constexpr std::size_t kShown = 5;
    for (std::size_t i = 0; i < std::min(kShown, parsed.issues.size()); ++i) {
      err << "warning: " << path << ":" << parsed.issues[i].line << ": " << parsed.issues[i].message << '\n';
    }
    if (parsed.issues.size() > kShown) {
      err << "warning: " << path << ": " << parsed.issues.size() - kShown << " more rows skipped\n";
    }
    rows.insert(rows.end(), std::make_move_iterator(parsed.rows.begin()), std::make_move_iterator(parsed.rows.end()));
  }
  return rows;
}

ingest::FilterResult load_links(const Settings& s, std::ostream& err) {
  bool has_profile = false;
  const auto rows = read_rows(s, err, has_profile);
  const auto window = ingest::infer_window(
      rows, s.window_weeks > 0 ? std::optional<std::size_t>(s.window_weeks) : std::nullopt);
  ingest::FilterOptions options;
  options.max_missing_fraction = s.max_missing;
  options.max_gap = s.max_gap;
  options.excluded_links.insert(s.exclude.begin(), s.exclude.end());
  auto result = ingest::filter_links(rows, window, options);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  return result;
}

std::vector<fs::path> input_paths(const Settings& s) {
  return {s.inputs.begin(), s.inputs.end()};
}

// -- subcommands ---------------------------------------------------------------------

void run_synth(const CLI::App& sub, const Settings& s, std::ostream& out) {
  std::vector<synth::SynthDataset> sets(s.links);
  std::vector<std::string> ids(s.links);
  for (std::size_t k = 0; k < s.links; ++k) {
    std::ostringstream id;
    id << "link-" << (k + 1 < 10 ? "0" : "") << k + 1;
    ids[k] = id.str();
  }
  parallel_for(s.links, s.jobs, [&](std::size_t k) {
    auto spec = synth::SynthSpec::defaults();
    spec.weeks = s.synth_weeks;
    spec.incident_rate = s.incident_rate;
    spec.noise_sd = s.noise_sd;
    std::seed_seq seq{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    spec.seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    sets[k] = synth::generate(spec);
  });
  const fs::path dir = s.output;
  write_atomic(dir / "observations.csv", [&](std::ostream& o) {
    for (std::size_t k = 0; k < s.links; ++k) synth::write_observations_csv(o, ids[k], sets[k], k == 0);
  });
  write_atomic(dir / "ground_truth.csv", [&](std::ostream& o) {
    for (std::size_t k = 0; k < s.links; ++k) synth::write_ground_truth_csv(o, ids[k], sets[k], k == 0);
  });
  write_manifest(dir, sub, {}, {"ground_truth.csv", "observations.csv"});
  out << "synth: " << s.links << " link(s), " << s.synth_weeks << " weeks -> " << dir.generic_string() << '\n';
}

void run_ingest(const CLI::App& sub, const Settings& s, std::ostream& out, std::ostream& err) {
  const auto result = load_links(s, err);
  const fs::path dir = s.output;
  std::vector<std::string> outputs{"rejections.csv"};
  parallel_for(result.datasets.size(), s.jobs, [&](std::size_t k) {
    const auto& ds = result.datasets[k];
    write_atomic(dir / (safe_name(ds.link_id) + ".csv"),
                 [&](std::ostream& o) { ingest::write_dataset_csv(o, ds, true); });
  });
  for (const auto& ds : result.datasets) outputs.push_back(safe_name(ds.link_id) + ".csv");
  write_atomic(dir / "rejections.csv", [&](std::ostream& o) { ingest::write_rejections_csv(o, result.rejections); });
  write_manifest(dir, sub, input_paths(s), outputs);
  out << "ingest: kept " << result.datasets.size() << ", rejected " << result.rejections.size() << '\n';
}

void run_decompose(const CLI::App& sub, const Settings& s, std::ostream& out, std::ostream& err) {
  const auto result = load_links(s, err);
  if (result.datasets.empty()) throw Error("no link passed the coverage filter");
  const fs::path dir = s.output;
  parallel_for(result.datasets.size(), s.jobs, [&](std::size_t k) {
    const auto& ds = result.datasets[k];
    const auto dense = MinuteSeries::from_dense(ds.travel_time.start(), ingest::fill_by_week_profile(ds.travel_time));
    const auto parts = wavelet::decompose(dense, s.forecast.wavelet);
    const fs::path link_dir = dir / safe_name(ds.link_id);
    write_atomic(link_dir / "decomposition.csv", [&](std::ostream& o) {
      o << "link_id,timestamp,travel_time_s,background_s,spikes_s,indicator\n";
      for (std::size_t i = 0; i < dense.size(); ++i) {
        o << ds.link_id << ',' << format_time(dense.time_at(i)) << ',' << csv::format_optional(ds.travel_time[i])
          << ',' << csv::format_number(*parts.background[i]) << ',' << csv::format_number(*parts.spikes[i]) << ','
          << static_cast<int>(parts.indicator[i]) << '\n';
      }
    });
    if (s.power_stride > 0) {
      const auto scaleogram = wavelet::cwt(dense, s.forecast.wavelet);
      write_atomic(link_dir / "power.csv",
                   [&](std::ostream& o) { wavelet::write_power_csv(o, scaleogram, s.power_stride); });
    }
  });
  std::vector<std::string> outputs;
  for (const auto& ds : result.datasets) {
    outputs.push_back(safe_name(ds.link_id) + "/decomposition.csv");
    if (s.power_stride > 0) outputs.push_back(safe_name(ds.link_id) + "/power.csv");
  }
  write_manifest(dir, sub, input_paths(s), outputs);
  out << "decompose: " << result.datasets.size() << " link(s)\n";
}

std::vector<profiler::Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<profiler::Method> out;
  for (const auto& n : names) {
    const auto m = profiler::parse_method(n);
    if (!m) throw Error("method: unknown value '" + n + "'");
    if (std::ranges::find(out, *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw Error("method: at least one method is required");
  return out;
}

std::string profile_file(profiler::Method m, std::size_t fold) {
  return std::string(profiler::method_name(m)) + "_fold" + std::to_string(fold) + ".csv";
}

void run_profile(const CLI::App& sub, const Settings& s, std::ostream& out, std::ostream& err) {
  const auto methods = parse_methods(s.methods);
  s.forecast.validate();
  const auto result = load_links(s, err);
  if (result.datasets.empty()) throw Error("no link passed the coverage filter");
  const fs::path dir = s.output;
  parallel_for(result.datasets.size(), s.jobs, [&](std::size_t k) {
    const auto& ds = result.datasets[k];
    for (const auto method : methods) {
      for (const auto& f : profiler::rolling_forecast(ds, method, s.forecast)) {
        write_atomic(dir / safe_name(ds.link_id) / profile_file(method, f.fold),
                     [&](std::ostream& o) { profiler::write_profile_csv(o, f); });
      }
    }
  });
  std::vector<std::string> outputs;
  for (const auto& ds : result.datasets) {
    for (const auto method : methods) {
      for (std::size_t fold = 0; fold < s.forecast.folds; ++fold) {
        outputs.push_back(safe_name(ds.link_id) + "/" + profile_file(method, fold));
      }
    }
  }
  write_manifest(dir, sub, input_paths(s), outputs);
  out << "profile: " << result.datasets.size() << " link(s) x " << methods.size() << " method(s) x "
      << s.forecast.folds << " fold(s)\n";
}

struct ProfileFile {
  fs::path path;
  std::string method;
  std::size_t fold = 0;
};

struct LoadedProfile {
  std::string link_id;
  MinuteTime week_start;
  WeekGrid combined;
};

LoadedProfile read_profile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": empty profile");
  const auto header = csv::split_line(line);
  auto column = [&](const char* name) {
    const auto it = std::ranges::find(header, name);
    if (it == header.end()) throw Error(path.string() + ": missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_link = column("link_id"), c_week = column("week_start"), c_minute = column("minute_of_week"),
                    c_value = column("combined_s");
  LoadedProfile p;
  std::vector<bool> seen(kMinutesPerWeek, false);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = csv::split_line(line);
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (f.size() < header.size()) throw Error(where + ": short row");
    const auto minute = csv::parse_number(f[c_minute]);
    const auto value = csv::parse_number(f[c_value]);
    const auto week = parse_time(f[c_week]);
    if (!minute || *minute < 0 || *minute >= static_cast<double>(kMinutesPerWeek) || !value || !week) {
      throw Error(where + ": malformed row");
    }
    const auto m = static_cast<std::size_t>(*minute);
    if (p.link_id.empty()) {
      p.link_id = f[c_link];
      p.week_start = *week;
    }
    p.combined[m] = *value;
    seen[m] = true;
  }
  if (std::ranges::count(seen, false) > 0) throw Error(path.string() + ": profile does not cover the whole week");
  return p;
}

std::vector<ProfileFile> find_profiles(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error("profiles: not a directory: " + root.string());
  static const std::regex kName(R"(([a-z]+)_fold([0-9]+)\.csv)");
  std::vector<ProfileFile> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, kName)) continue;
    files.push_back({entry.path(), m[1].str(), static_cast<std::size_t>(std::stoul(m[2].str()))});
  }
  std::ranges::sort(files, {}, [](const ProfileFile& f) { return f.path.generic_string(); });
  if (files.empty()) throw Error("profiles: no <method>_fold<k>.csv files under " + root.string());
  return files;
}

void run_evaluate(const CLI::App& sub, const Settings& s, std::ostream& out, std::ostream& err) {
  if (kMinutesPerDay % s.tod_bucket != 0) throw Error("tod-bucket must divide 1440");
  const auto files = find_profiles(s.profiles);
  const auto data = load_links(s, err);
  std::map<std::string, const ingest::LinkDataset*> by_link;
  for (const auto& ds : data.datasets) by_link[ds.link_id] = &ds;

  struct Scored {
    std::string link_id;
    eval::ScoredMinutes minutes;
  };
  std::vector<Scored> scored(files.size());
  std::vector<eval::EvalReport> reports(files.size());
  parallel_for(files.size(), s.jobs, [&](std::size_t k) {
    const auto profile = read_profile(files[k].path);
    const auto it = by_link.find(profile.link_id);
    if (it == by_link.end()) throw Error(files[k].path.string() + ": link " + profile.link_id + " not in the data");
    const auto& series = it->second->travel_time;
    if (profile.week_start < series.start() ||
        profile.week_start + std::chrono::minutes(kMinutesPerWeek) > series.time_at(series.size())) {
      throw Error(files[k].path.string() + ": target week " + format_time(profile.week_start) + " outside the data");
    }
    const auto offset = static_cast<std::size_t>((profile.week_start - series.start()).count());
    const auto week = series.slice(offset, kMinutesPerWeek);
    PartialWeekGrid actual(std::vector<std::optional<double>>(week.values().begin(), week.values().end()));
    scored[k] = {profile.link_id, eval::ScoredMinutes::from(profile.combined, actual)};
    reports[k] = eval::make_report(profile.link_id, files[k].method, files[k].fold, scored[k].minutes);
  });

  const fs::path dir = s.output;
  std::vector<std::string> outputs;
  for (std::size_t k = 0; k < files.size(); ++k) {
    const auto rel = "reports/" + safe_name(reports[k].link_id) + "/" + files[k].method + "_fold" +
                     std::to_string(files[k].fold) + ".json";
    write_atomic(dir / rel, [&](std::ostream& o) { o << reports[k].to_json().dump(2) << '\n'; });
    outputs.push_back(rel);
  }

  // Pool folds per (link, method) and everything per method.
  const std::string kAll = "all";
  std::map<std::string, std::map<std::string, eval::ScoredMinutes>> pooled;  // link -> method -> minutes
  std::set<std::string> methods;
  for (std::size_t k = 0; k < files.size(); ++k) {
    pooled[scored[k].link_id][files[k].method].append(scored[k].minutes);
    pooled[kAll][files[k].method].append(scored[k].minutes);
    methods.insert(files[k].method);
  }
  std::vector<std::string> rows;
  for (const auto& [link, _] : pooled) {
    if (link != kAll) rows.push_back(link);
  }
  rows.push_back(kAll);
  auto pooled_for = [&](const std::string& link, const std::string& method) -> const eval::ScoredMinutes* {
    const auto& m = pooled[link];
    const auto it = m.find(method);
    return it == m.end() || it->second.size() == 0 ? nullptr : &it->second;
  };

  write_atomic(dir / "bins.csv", [&](std::ostream& o) {
    o << "link_id,method,scored";
    for (const char* label : eval::kBinLabels) o << ',' << label;
    o << '\n';
    for (const auto& link : rows) {
      for (const auto& method : methods) {
        const auto* sm = pooled_for(link, method);
        if (!sm) continue;
        o << link << ',' << method << ',' << sm->size();
        for (double b : eval::relative_error_bins(*sm)) o << ',' << csv::format_number(b);
        o << '\n';
      }
    }
  });
  write_atomic(dir / "link_mare.csv", [&](std::ostream& o) {
    o << "link_id";
    for (const auto& method : methods) o << ',' << method;
    o << '\n';
    for (const auto& link : rows) {
      o << link;
      for (const auto& method : methods) {
        const auto* sm = pooled_for(link, method);
        o << ',' << (sm ? csv::format_number(eval::mare(*sm)) : "");
      }
      o << '\n';
    }
  });
  write_atomic(dir / "group_metrics.csv", [&](std::ostream& o) {
    o << "group,method,links,mare,rmse_s\n";
    for (const auto& method : methods) {
      double mare_sum = 0.0, rmse_sum = 0.0;
      std::size_t n = 0;
      for (const auto& link : rows) {
        if (link == kAll) continue;
        if (const auto* sm = pooled_for(link, method)) {
          mare_sum += eval::mare(*sm);
          rmse_sum += eval::rmse(*sm);
          ++n;
        }
      }
      if (n == 0) continue;
      o << kAll << ',' << method << ',' << n << ',' << csv::format_number(mare_sum / static_cast<double>(n)) << ','
        << csv::format_number(rmse_sum / static_cast<double>(n)) << '\n';
    }
  });
  write_atomic(dir / "time_of_day.csv", [&](std::ostream& o) {
    o << "link_id,minute_of_day";
    for (const auto& method : methods) o << ',' << method;
    o << '\n';
    for (const auto& link : rows) {
      std::vector<std::vector<std::optional<double>>> cols;
      for (const auto& method : methods) {
        const auto* sm = pooled_for(link, method);
        cols.push_back(sm ? eval::mare_by_time_of_day(*sm, s.tod_bucket)
                          : std::vector<std::optional<double>>(kMinutesPerDay / s.tod_bucket));
      }
      for (std::size_t b = 0; b < kMinutesPerDay / s.tod_bucket; ++b) {
        o << link << ',' << b * s.tod_bucket;
        for (const auto& c : cols) o << ',' << csv::format_optional(c[b]);
        o << '\n';
      }
    }
  });
  write_atomic(dir / "percentile.csv", [&](std::ostream& o) {
    o << "link_id,percentile";
    for (const auto& method : methods) o << ',' << method;
    o << '\n';
    for (const auto& link : rows) {
      std::vector<std::vector<double>> cols;
      for (const auto& method : methods) {
        const auto* sm = pooled_for(link, method);
        cols.push_back(sm && sm->size() >= 100 ? eval::mare_by_percentile(*sm) : std::vector<double>{});
      }
      for (std::size_t p = 0; p < 100; ++p) {
        o << link << ',' << p + 1;
        for (const auto& c : cols) o << ',' << (c.empty() ? "" : csv::format_number(c[p]));
        o << '\n';
      }
    }
  });
  for (const char* name : {"bins.csv", "group_metrics.csv", "link_mare.csv", "percentile.csv", "time_of_day.csv"}) {
    outputs.push_back(name);
  }

  auto inputs = input_paths(s);
  for (const auto& f : files) inputs.push_back(f.path);
  write_manifest(dir, sub, inputs, outputs);
  out << "evaluate: " << files.size() << " profile(s)\n";
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"WARP travel-time profiling", "warp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.option_defaults()->always_capture_default();

  Settings s;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic link dataset with ground truth");
  add_common(synth_cmd, s);
  synth_cmd->add_option("--weeks", s.synth_weeks, "Weeks to generate")->check(CLI::Range(9, 520));
  synth_cmd->add_option("--links", s.links, "Number of links")->check(CLI::Range(1, 10000));
  synth_cmd->add_option("--incident-rate", s.incident_rate, "Incidents per week")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--noise-sd", s.noise_sd, "Gaussian noise, seconds")->check(CLI::NonNegativeNumber);

  auto* ingest_cmd = app.add_subcommand("ingest", "Validate, filter and gap-fill link CSV data");
  add_common(ingest_cmd, s);
  add_data(ingest_cmd, s);

  auto* decompose_cmd = app.add_subcommand("decompose", "Split each link into background and spikes");
  add_common(decompose_cmd, s);
  add_data(decompose_cmd, s);
  add_wavelet(decompose_cmd, s);
  decompose_cmd->add_option("--power-stride", s.power_stride, "Also export scaleogram power every N minutes (0 = off)");

  auto* profile_cmd = app.add_subcommand("profile", "Rolling weekly profiles per link and method");
  add_common(profile_cmd, s);
  add_data(profile_cmd, s);
  add_wavelet(profile_cmd, s);
  add_forecast(profile_cmd, s);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score profiles against realized travel times");
  add_common(evaluate_cmd, s);
  add_data(evaluate_cmd, s);
  evaluate_cmd->add_option("--profiles", s.profiles, "Directory written by `warp profile`")->required();
  evaluate_cmd->add_option("--tod-bucket", s.tod_bucket, "Time-of-day bucket, minutes")->check(CLI::Range(1, 1440));

  app.set_config("--config", "", "Flat key=value file; keys are long option names, flags win over the file");
  std::set<std::string> known;
  for (const CLI::App* sub : app.get_subcommands({})) known.merge(long_names(*sub));
  known.erase("help");
  std::set<std::string> own;
  std::string section;
  for (const auto& a : args) {
    if (const CLI::App* sub = app.get_subcommand_no_throw(a)) {
      section = a;
      own = long_names(*sub);
      break;
    }
  }
  app.config_formatter(std::make_shared<FlatConfig>(section, own, known));

  std::vector<const char*> argv{"warp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    if (sub == synth_cmd) run_synth(*sub, s, out);
    if (sub == ingest_cmd) run_ingest(*sub, s, out, err);
    if (sub == decompose_cmd) run_decompose(*sub, s, out, err);
    if (sub == profile_cmd) run_profile(*sub, s, out, err);
    if (sub == evaluate_cmd) run_evaluate(*sub, s, out, err);
  } catch (const std::exception& e) {
    err << "warp " << sub->get_name() << ": error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace warp::cli
