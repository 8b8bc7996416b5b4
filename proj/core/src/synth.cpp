#include "warp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "warp/csv.hpp"
#include "warp/fft.hpp"

namespace warp::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kWeekendStart = 5 * kMinutesPerDay;  // Saturday 00:00
constexpr double kWeekendRamp = 180.0;                    // minutes, centred on midnight

double harmonic_sum(const std::vector<Harmonic>& harmonics, double t) {
  double h = 0.0;
  for (const auto& hm : harmonics) h += hm.amplitude_s * std::cos(kTwoPi * t / hm.period_min - hm.phase_rad);
  return h;
}

// 1 on weekdays, `attenuation` at weekends, raised-cosine ramps around
// Saturday 00:00 and Monday 00:00 so the background has no jumps.
double weekday_factor(std::size_t minute, double attenuation) {
  const double m = static_cast<double>(minute % kMinutesPerWeek);
  const double half = kWeekendRamp / 2.0;
  auto ramp = [&](double x) {  // 0 -> 1 across [-half, half]
    if (x <= -half) return 0.0;
    if (x >= half) return 1.0;
    return 0.5 - 0.5 * std::cos(std::numbers::pi * (x + half) / kWeekendRamp);
  };
  const double week = static_cast<double>(kMinutesPerWeek);
  const double sat = static_cast<double>(kWeekendStart);
  // Weight of "weekend": rises around Saturday 00:00, falls around Monday 00:00 (= 0 and week).
  double weekend = ramp(m - sat);
  if (m < half) weekend = 1.0 - ramp(m);
  if (m > week - half) weekend = 1.0 - ramp(m - week);
  return 1.0 + (attenuation - 1.0) * weekend;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

}  // namespace

SynthSpec SynthSpec::defaults() {
  SynthSpec s;
  // Daily cycle peaking early afternoon plus a half-day harmonic peaking at 08:00
  // and 20:00: night trough, morning and evening peaks, midday plateau.
  s.daily_harmonics = {
      {1440.0, 30.0, kTwoPi * 765.0 / 1440.0},
      {720.0, 22.0, kTwoPi * 480.0 / 720.0},
  };
  for (std::size_t day = 0; day < 5; ++day) {
    s.recurrent_spikes.push_back({day * kMinutesPerDay + 450, 90, 90.0, 0.9});   // 07:30
    s.recurrent_spikes.push_back({day * kMinutesPerDay + 1005, 105, 70.0, 0.8});  // 16:45
  }
  return s;
}

void SynthSpec::validate() const {
  if (weeks < 9) throw Error("synth.weeks must be >= 9");
  if (!(free_flow > 0.0)) throw Error("synth.free_flow must be > 0");
  if (!(weekend_attenuation >= 0.0 && weekend_attenuation <= 1.0)) {
    throw Error("synth.weekend_attenuation must be in [0, 1]");
  }
  for (const auto& h : daily_harmonics) {
    if (!(h.period_min > 0.0)) throw Error("synth.daily_harmonics.period_min must be > 0");
    if (!std::isfinite(h.amplitude_s) || !std::isfinite(h.phase_rad)) {
      throw Error("synth.daily_harmonics must be finite");
    }
  }
  for (const auto& r : recurrent_spikes) {
    if (r.minute_of_week >= kMinutesPerWeek) throw Error("synth.recurrent_spikes.minute_of_week out of range");
    if (r.duration_min < 1) throw Error("synth.recurrent_spikes.duration_min must be >= 1");
    if (!(r.amplitude_s >= 0.0)) throw Error("synth.recurrent_spikes.amplitude_s must be >= 0");
    if (!(r.probability >= 0.0 && r.probability <= 1.0)) {
      throw Error("synth.recurrent_spikes.probability must be in [0, 1]");
    }
  }
  if (!(incident_rate >= 0.0)) throw Error("synth.incident_rate must be >= 0");
  if (!std::isfinite(incident_log_mu)) throw Error("synth.incident_log_mu must be finite");
  if (!(incident_log_sigma >= 0.0)) throw Error("synth.incident_log_sigma must be >= 0");
  if (incident_min_duration < 1 || incident_min_duration > incident_max_duration) {
    throw Error("synth.incident_min_duration must be >= 1 and <= synth.incident_max_duration");
  }
  if (!(noise_sd >= 0.0)) throw Error("synth.noise_sd must be >= 0");
  if (!is_week_aligned(start)) throw Error("synth.start must be a Monday 00:00");
}

double half_sine(std::size_t t, std::size_t duration) {
  if (t >= duration) return 0.0;
  return std::sin(std::numbers::pi * (static_cast<double>(t) + 0.5) / static_cast<double>(duration));
}

SynthDataset generate(const SynthSpec& spec) {
  spec.validate();
  const std::size_t n = spec.weeks * kMinutesPerWeek;

  // Background: free flow plus the attenuated harmonic excess over its weekly minimum.
  std::vector<double> shape(kMinutesPerWeek);
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) shape[m] = harmonic_sum(spec.daily_harmonics, double(m));
  const double floor_value = *std::ranges::min_element(shape);
  std::vector<double> background(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = harmonic_sum(spec.daily_harmonics, static_cast<double>(i)) - floor_value;
    background[i] = spec.free_flow + weekday_factor(i, spec.weekend_attenuation) * std::max(h, 0.0);
  }

  std::vector<double> recurrent(n, 0.0);
  auto rec_rng = stream(spec.seed, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t w = 0; w < spec.weeks; ++w) {
    for (const auto& r : spec.recurrent_spikes) {
      if (unit(rec_rng) >= r.probability) continue;
      const std::size_t begin = w * kMinutesPerWeek + r.minute_of_week;
      for (std::size_t t = 0; t < r.duration_min && begin + t < n; ++t) {
        recurrent[begin + t] += r.amplitude_s * half_sine(t, r.duration_min);
      }
    }
  }

  std::vector<double> incidents(n, 0.0);
  std::vector<Incident> events;
  auto inc_rng = stream(spec.seed, 2);
  std::poisson_distribution<int> count_dist(spec.incident_rate * static_cast<double>(spec.weeks));
  const int count = spec.incident_rate > 0.0 ? count_dist(inc_rng) : 0;
  std::uniform_int_distribution<std::size_t> start_dist(0, n - 1);
  std::uniform_int_distribution<std::size_t> dur_dist(spec.incident_min_duration, spec.incident_max_duration);
  std::lognormal_distribution<double> amp_dist(spec.incident_log_mu, spec.incident_log_sigma);
  for (int k = 0; k < count; ++k) {
    Incident ev{start_dist(inc_rng), dur_dist(inc_rng), amp_dist(inc_rng)};
    for (std::size_t t = 0; t < ev.duration_min && ev.start + t < n; ++t) {
      incidents[ev.start + t] += ev.amplitude_s * half_sine(t, ev.duration_min);
    }
    events.push_back(ev);
  }
  std::ranges::sort(events, {}, &Incident::start);

  std::vector<double> noise(n, 0.0);
  if (spec.noise_sd > 0.0) {
    auto noise_rng = stream(spec.seed, 3);
    std::normal_distribution<double> gauss(0.0, spec.noise_sd);
    for (double& v : noise) v = gauss(noise_rng);
  }

  std::vector<double> observed(n);
  for (std::size_t i = 0; i < n; ++i) observed[i] = background[i] + recurrent[i] + incidents[i] + noise[i];

  std::vector<double> published(n);
  std::copy_n(background.begin(), kMinutesPerWeek, published.begin());
  constexpr double kPublishedWeight = 0.3;
  for (std::size_t i = kMinutesPerWeek; i < n; ++i) {
    published[i] = kPublishedWeight * observed[i - kMinutesPerWeek] +
                   (1.0 - kPublishedWeight) * published[i - kMinutesPerWeek];
  }

  SynthDataset out;
  out.observed = MinuteSeries::from_dense(spec.start, observed);
  out.true_background = MinuteSeries::from_dense(spec.start, background);
  out.true_recurrent = MinuteSeries::from_dense(spec.start, recurrent);
  out.true_incidents = MinuteSeries::from_dense(spec.start, incidents);
  out.noise = std::move(noise);
  out.published_profile = MinuteSeries::from_dense(spec.start, published);
  out.incidents = std::move(events);
  out.spec = spec;
  return out;
}

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  if (x.size() < 2) throw Error("autocorrelation needs at least two samples");
  max_lag = std::min(max_lag, x.size() - 1);
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  std::vector<double> padded(fft::next_power_of_two(2 * x.size()), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) padded[i] = x[i] - m;
  auto spectrum = fft::forward(padded);
  for (auto& c : spectrum) c = std::norm(c);
  const auto acov = fft::inverse_real(spectrum);
  std::vector<double> acf(max_lag + 1, 0.0);
  if (acov[0] == 0.0) return acf;
  for (std::size_t k = 0; k <= max_lag; ++k) acf[k] = acov[k] / acov[0];
  return acf;
}

void write_observations_csv(std::ostream& out, const std::string& link_id, const SynthDataset& data,
                            bool with_header) {
  if (with_header) out << "link_id,timestamp,travel_time_s,profile_tt_s,flow_vph,headway_m\n";
  for (std::size_t i = 0; i < data.observed.size(); ++i) {
    out << link_id << ',' << format_time(data.observed.time_at(i)) << ','
        << csv::format_optional(data.observed[i]) << ',' << csv::format_optional(data.published_profile[i])
        << ",3000,30\n";
  }
}

void write_ground_truth_csv(std::ostream& out, const std::string& link_id, const SynthDataset& data,
                            bool with_header) {
  if (with_header) out << "link_id,timestamp,background_s,recurrent_s,incident_s,noise_s,observed_s\n";
  for (std::size_t i = 0; i < data.observed.size(); ++i) {
    out << link_id << ',' << format_time(data.observed.time_at(i)) << ','
        << csv::format_optional(data.true_background[i]) << ',' << csv::format_optional(data.true_recurrent[i])
        << ',' << csv::format_optional(data.true_incidents[i]) << ',' << csv::format_number(data.noise[i]) << ','
        << csv::format_optional(data.observed[i]) << '\n';
  }
}

}  // namespace warp::synth
