// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
// Usage: warp_acceptance <work-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "warp/eval.hpp"
#include "warp/ingest.hpp"
#include "warp/profiler.hpp"
#include "warp/spectral.hpp"
#include "warp/stats.hpp"
#include "warp/stl.hpp"
#include "warp/synth.hpp"
#include "warp/wavelet.hpp"

namespace fs = std::filesystem;
using namespace warp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double relative_l2(std::span<const double> got, std::span<const double> want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num / den);
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

MinuteTime monday() { return make_time(2016, 3, 7); }

Outcome ac1() {
  const std::size_t n = 12 * kMinutesPerWeek;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    x[i] = 200.0 + 10.0 * std::cos(two_pi * t / 10080.0) + 30.0 * std::cos(two_pi * t / 1440.0 - 2.0) +
           20.0 * std::sin(two_pi * t / 720.0 + 1.0) + 8.0 * std::cos(two_pi * t / 480.0) +
           5.0 * std::cos(two_pi * t / 240.0 + 0.5);
  }
  const wavelet::WaveletParams params;
  const auto t0 = Clock::now();
  const auto sc = wavelet::cwt(std::span<const double>(x), params);
  const auto rec = wavelet::icwt(sc.coefficients, sc.grid, sc.series_mean);
  const double secs = seconds_since(t0);
  const double err = relative_l2(rec, x);
  return {err <= 0.05 && secs <= 60.0 && sc.grid.size() == 140,
          fmt("round trip rel L2 %.4g (<= 0.05), %zu samples x %zu scales in %.1f s (<= 60)", err, n,
              sc.grid.size(), secs)};
}

Outcome ac2() {
  auto spec = synth::SynthSpec::defaults();
  spec.seed = 0;
  const auto data = synth::generate(spec);
  const auto x = data.observed.dense();
  wavelet::WaveletParams params;
  const auto sc = wavelet::cwt(std::span<const double>(x), params);
  const auto rec = wavelet::icwt(sc.coefficients, sc.grid, sc.series_mean);
  double scale = 0.0;
  for (double v : rec) scale = std::max(scale, std::abs(v));

  double worst_additivity = 0.0;
  bool monotone = true;
  double previous = std::numeric_limits<double>::infinity();
  std::string energies;
  double last_ratio = 0.0;
  const double total = energy(x);
  for (double alpha : {0.0, 0.5, 1.0, 2.0, 5.0, 1e6}) {
    params.alpha = alpha;
    const auto dec = wavelet::decompose(data.observed, params);
    const auto bg = dec.background.dense();
    const auto sp = dec.spikes.dense();
    for (std::size_t i = 0; i < x.size(); ++i) {
      worst_additivity = std::max(worst_additivity, std::abs(bg[i] + sp[i] - rec[i]) / scale);
    }
    const double e = energy(sp);
    if (e > previous) monotone = false;
    previous = e;
    last_ratio = e / total;
    energies += fmt("%s%.3g", energies.empty() ? "" : ",", e);
  }
  return {worst_additivity <= 1e-6 && monotone && last_ratio <= 1e-9,
          fmt("additivity %.2g (<= 1e-6), spike energy over alpha {0,.5,1,2,5,1e6} = [%s] %s, alpha 1e6 share %.2g "
              "(<= 1e-9)",
              worst_additivity, energies.c_str(), monotone ? "non-increasing" : "NOT monotone", last_ratio)};
}

Outcome ac3() {
  double tpr_sum = 0.0, fpr_sum = 0.0;
  const int seeds = 5;
  for (int seed = 0; seed < seeds; ++seed) {
    auto spec = synth::SynthSpec::defaults();
    spec.seed = static_cast<std::uint64_t>(seed);
    const auto data = synth::generate(spec);
    wavelet::WaveletParams params;
    params.alpha = 1.0;
    const auto dec = wavelet::decompose(data.observed, params);
    std::size_t pos = 0, hit = 0, neg = 0, false_pos = 0;
    for (std::size_t i = 0; i < data.observed.size(); ++i) {
      const double incident = *data.true_incidents[i];
      const double recurrent = *data.true_recurrent[i];
      if (incident > params.spike_floor) {
        ++pos;
        hit += dec.indicator[i];
      } else if (incident == 0.0 && recurrent == 0.0) {
        ++neg;
        false_pos += dec.indicator[i];
      }
    }
    tpr_sum += static_cast<double>(hit) / static_cast<double>(pos);
    fpr_sum += static_cast<double>(false_pos) / static_cast<double>(neg);
  }
  const double tpr = tpr_sum / seeds, fpr = fpr_sum / seeds;
  return {tpr >= 0.70 && fpr <= 0.02,
          fmt("incident minutes flagged %.3f (>= 0.70), false-positive minutes %.4f (<= 0.02), 5 seeds", tpr, fpr)};
}

Outcome ac4() {
  double worst_sum = 0.0;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto check_sum = [&](std::span<const double> x, const seasonal::StlResult& r) {
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < x.size(); ++i) {
      worst_sum = std::max(worst_sum, std::abs(r.seasonal[i] + r.trend[i] + r.remainder[i] - x[i]) / scale);
    }
  };

  const std::size_t period = 24, n = 20 * period;
  std::vector<double> x(n), season(n), ramp(n);
  for (std::size_t i = 0; i < n; ++i) {
    season[i] = 10.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / period);
    ramp[i] = 5.0 + 0.05 * static_cast<double>(i);
    x[i] = season[i] + ramp[i] + 0.5 * noise(rng);
  }
  const auto r = seasonal::stl(x, seasonal::StlParams::for_period(period));
  check_sum(x, r);
  const double c_season = stats::pearson(r.seasonal, season);
  const double c_trend = stats::pearson(r.trend, ramp);

  auto spec = synth::SynthSpec::defaults();
  spec.weeks = 9;
  spec.seed = 4;
  const auto data = synth::generate(spec);
  const auto week3 = data.observed.slice(0, 3 * kMinutesPerWeek).dense();
  for (std::size_t outer : {0u, 1u, 3u}) {
    auto p = seasonal::StlParams::for_period(kMinutesPerDay);
    p.outer_iters = outer;
    check_sum(week3, seasonal::stl(week3, p));
  }
  auto weekly = seasonal::StlParams::for_period(kMinutesPerWeek);
  const auto all = data.observed.dense();
  check_sum(all, seasonal::stl(all, weekly));

  const bool exact = worst_sum <= 1e-12;
  return {exact && c_season >= 0.99 && c_trend >= 0.99,
          fmt("max |s + t + r - x| / max|x| = %.2g over 5 calls, corr(seasonal) %.4f, corr(trend) %.4f (>= 0.99)",
              worst_sum, c_season, c_trend)};
}

Outcome ac5() {
  auto spec = synth::SynthSpec::defaults();
  spec.seed = 5;
  const auto data = synth::generate(spec);
  const auto weeks = split_weeks(data.observed);
  const spectral::SpectralParams params;

  const std::vector<WeekGrid> same(8, weeks[0]);
  const auto fixed = spectral::spectral_ewma_predict(same, params);
  const auto band = spectral::to_week(spectral::fft_band_limit(weeks[0], params.keep_period_min, params.keep_period_max));
  double fixed_err = 0.0;
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) fixed_err = std::max(fixed_err, std::abs(fixed[m] - band[m]));

  auto latest = params;
  latest.lambda = 1.0;
  const std::vector<WeekGrid> train(weeks.begin(), weeks.begin() + 8);
  const auto pred = spectral::spectral_ewma_predict(train, latest);
  const auto last =
      spectral::to_week(spectral::fft_band_limit(train.back(), params.keep_period_min, params.keep_period_max));
  double latest_err = 0.0;
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) latest_err = std::max(latest_err, std::abs(pred[m] - last[m]));

  return {fixed_err <= 1e-9 && latest_err <= 1e-9,
          fmt("identical weeks vs band-limited week max |diff| %.2g (<= 1e-9), lambda 1 vs latest week %.2g", fixed_err,
              latest_err)};
}

struct EndToEnd {
  std::size_t wins = 0;
  double rush_warp = 0.0;
  double rush_ss = 0.0;
  std::size_t reports = 0;
  double worst_bin_sum = 0.0;
  std::string per_link;
};

EndToEnd run_end_to_end() {
  EndToEnd r;
  eval::ScoredMinutes rush_warp, rush_ss;
  const profiler::ForecastConfig config;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto spec = synth::SynthSpec::defaults();
    spec.seed = seed;
    const auto data = synth::generate(spec);
    const ingest::LinkDataset ds{"link-" + std::to_string(seed), data.observed, data.published_profile, 1.0, true};
    auto rush = [&spec](std::size_t m) {
      return std::ranges::any_of(spec.recurrent_spikes, [m](const synth::RecurrentSpike& s) {
        return m >= s.minute_of_week && m < s.minute_of_week + s.duration_min;
      });
    };
    std::map<profiler::Method, double> pooled;
    for (auto method : {profiler::Method::warp, profiler::Method::ss}) {
      eval::ScoredMinutes all;
      for (const auto& f : profiler::rolling_forecast(ds, method, config)) {
        const auto scored = eval::ScoredMinutes::from(f.prediction, f.target);
        const auto report = eval::make_report(ds.link_id, std::string(profiler::method_name(method)), f.fold, scored);
        double sum = 0.0;
        for (double b : report.bins) sum += b;
        r.worst_bin_sum = std::max(r.worst_bin_sum, std::abs(sum - 100.0));
        ++r.reports;
        all.append(scored);
      }
      pooled[method] = eval::mare(all);
      (method == profiler::Method::warp ? rush_warp : rush_ss).append(all.where(rush));
    }
    if (pooled[profiler::Method::warp] < pooled[profiler::Method::ss]) ++r.wins;
    r.per_link += fmt("%s%.4f/%.4f", r.per_link.empty() ? "" : " ", pooled[profiler::Method::warp],
                      pooled[profiler::Method::ss]);
  }
  r.rush_warp = eval::mare(rush_warp);
  r.rush_ss = eval::mare(rush_ss);
  return r;
}

Outcome ac6(const EndToEnd& e) {
  const double ratio = e.rush_warp / e.rush_ss;
  return {e.wins >= 9 && ratio <= 0.70,
          fmt("WARP beats SS pooled MARE on %zu/10 links (>= 9), rush MARE ratio %.3f (<= 0.70); warp/ss per link: %s",
              e.wins, ratio, e.per_link.c_str())};
}

Outcome ac7(const EndToEnd& e, const fs::path& pipeline_reports) {
  const std::vector<double> actual{100, 120, 90, 200, 150, 80, 110, 95, 130, 175};
  const std::vector<double> predicted{110, 102, 90, 140, 157.5, 92, 99, 95, 169, 210};
  const auto s = eval::ScoredMinutes::from(predicted, actual);
  const double m = eval::mare(s);
  const double r = eval::rmse(s);
  const auto bins = eval::relative_error_bins(s);
  const std::array<double, eval::kBinCount> want_bins{10, 10, 10, 20, 20, 20, 10};
  bool fixture = std::abs(m - 27.0 / 200.0) <= 1e-12 && std::abs(r - std::sqrt(5673.0 / 8.0)) <= 1e-9;
  for (std::size_t b = 0; b < eval::kBinCount; ++b) fixture = fixture && std::abs(bins[b] - want_bins[b]) <= 1e-9;

  double worst = e.worst_bin_sum;
  std::size_t reports = e.reports;
  if (fs::is_directory(pipeline_reports)) {
    for (const auto& entry : fs::recursive_directory_iterator(pipeline_reports)) {
      if (entry.path().extension() != ".json") continue;
      std::ifstream in(entry.path());
      const auto j = nlohmann::json::parse(in);
      double sum = 0.0;
      for (const auto& [label, v] : j["bins_percent"].items()) sum += v.get<double>();
      worst = std::max(worst, std::abs(sum - 100.0));
      ++reports;
    }
  }
  return {fixture && worst <= 0.01,
          fmt("10-point fixture mare %.6f rmse %.6f bins %s; %zu reports, max |bins sum - 100| %.2g (<= 0.01)", m, r,
              fixture ? "match" : "DIFFER", reports, worst)};
}

Outcome ac8() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> value(60, 900);
  std::vector<WeekGrid> weeks(8);
  for (auto& w : weeks) {
    for (std::size_t m = 0; m < kMinutesPerWeek; ++m) w[m] = value(rng);
  }
  const auto ewma = profiler::ewma_profile(weeks, 1.0);
  const bool ewma_exact = ewma == weeks.back();

  // Seven random weeks plus one that makes every per-minute total divisible by 7 + 1.
  std::vector<WeekGrid> train(weeks.begin(), weeks.begin() + 7);
  WeekGrid closing, expected;
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) {
    long total = 0;
    for (const auto& w : train) total += static_cast<long>(w[m]);
    const long target = (total / 8 + 120) * 8;
    closing[m] = static_cast<double>(target - total);
    expected[m] = static_cast<double>(target / 8);
  }
  train.push_back(closing);
  const auto ss = profiler::simple_segmentation(train);
  const bool ss_exact = ss == expected;

  // Odd week count with exactly representable means.
  std::vector<WeekGrid> three(3);
  WeekGrid expected3;
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) {
    const double base = value(rng);
    three[0][m] = base - 1.0;
    three[1][m] = base;
    three[2][m] = base + 1.0;
    expected3[m] = base;
  }
  const bool ss3_exact = profiler::simple_segmentation(three) == expected3;

  return {ewma_exact && ss_exact && ss3_exact,
          fmt("ewma(alpha_mem 1) == last week: %s; ss == per-minute mean (8 and 3 integer weeks): %s/%s",
              ewma_exact ? "exact" : "DIFFERS", ss_exact ? "exact" : "DIFFERS", ss3_exact ? "exact" : "DIFFERS")};
}

struct PipelineRun {
  bool ok = false;
  double seconds = 0.0;
  std::string error;
};

PipelineRun run_pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  PipelineRun r;
  const auto t0 = Clock::now();
  const auto data = (dir / "data").string();
  const auto obs = (dir / "data" / "observations.csv").string();
  const std::vector<std::vector<std::string>> steps{
      {"synth", "--weeks", "12", "--links", "1", "--seed", "2016", "-o", data},
      {"profile", "-i", obs, "-o", (dir / "profiles").string(), "--method", "warp,ss,ewma,published", "--train-weeks",
       "8", "--folds", "4"},
      {"evaluate", "-i", obs, "--profiles", (dir / "profiles").string(), "-o", (dir / "eval").string()},
  };
  for (const auto& step : steps) {
    std::ostringstream out, err;
    if (cli::run_command(step, out, err) != 0) {
      r.error = step.front() + ": " + err.str();
      return r;
    }
  }
  r.seconds = seconds_since(t0);
  r.ok = true;
  return r;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    // Run records embed absolute paths of their run directory.
    if (name == "manifest.json" || name == "run.conf") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    files[fs::relative(entry.path(), root).generic_string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return files;
}

Outcome ac9(const fs::path& work, const PipelineRun& first) {
  if (!first.ok) return {false, "first pipeline run failed: " + first.error};
  const auto second = run_pipeline(work / "run_b");
  if (!second.ok) return {false, "second pipeline run failed: " + second.error};
  const auto a = snapshot(work / "run_a");
  const auto b = snapshot(work / "run_b");
  std::size_t profiles = 0, reports = 0;
  for (const auto& [name, _] : a) {
    if (name.starts_with("profiles/")) ++profiles;
    if (name.starts_with("eval/reports/")) ++reports;
  }
  std::string first_diff;
  if (a.size() != b.size()) first_diff = "file sets differ";
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    if (first_diff.empty() && (it == b.end() || it->second != bytes)) first_diff = name;
  }
  return {first_diff.empty() && profiles == 16 && reports == 16,
          fmt("%zu files (%zu profiles, %zu reports) compared across two runs: %s", a.size(), profiles, reports,
              first_diff.empty() ? "byte-identical" : ("differ at " + first_diff).c_str())};
}

Outcome ac10(const PipelineRun& run) {
  if (!run.ok) return {false, "pipeline failed: " + run.error};
  return {run.seconds <= 300.0,
          fmt("synth + profile (warp, ss, ewma, published; 4 folds) + evaluate on 1 link x 12 weeks in %.1f s (<= 300)",
              run.seconds)};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "warp_acceptance";
  fs::create_directories(work);

  int failures = 0;
  auto report = [&failures](const char* id, const std::function<Outcome()>& check) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  };

  PipelineRun first;
  EndToEnd e2e;
  report("AC1", ac1);
  report("AC2", ac2);
  report("AC3", ac3);
  report("AC4", ac4);
  report("AC5", ac5);
  report("AC6", [&] {
    e2e = run_end_to_end();
    return ac6(e2e);
  });
  // AC10 times the first CLI pipeline run, whose reports AC7 also checks.
  report("AC7", [&] {
    first = run_pipeline(work / "run_a");
    return ac7(e2e, work / "run_a" / "eval" / "reports");
  });
  report("AC8", ac8);
  report("AC9", [&] { return ac9(work, first); });
  report("AC10", [&] { return ac10(first); });

  std::printf("%d of 10 acceptance criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
