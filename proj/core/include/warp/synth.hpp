#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "warp/series.hpp"

namespace warp::synth {

struct Harmonic {
  double period_min = 1440.0;
  double amplitude_s = 0.0;
  double phase_rad = 0.0;  // cos(2*pi*t/period - phase), t = minutes since Monday 00:00
};

/// Congestion bump that recurs weekly at a fixed minute-of-week.
struct RecurrentSpike {
  std::size_t minute_of_week = 0;
  std::size_t duration_min = 60;
  double amplitude_s = 0.0;
  double probability = 1.0;  // chance it occurs in any given week
};

struct SynthSpec {
  std::size_t weeks = 12;
  double free_flow = 180.0;
  std::vector<Harmonic> daily_harmonics;
  double weekend_attenuation = 0.4;
  std::vector<RecurrentSpike> recurrent_spikes;
  double incident_rate = 2.0;              // events per week, Poisson
  double incident_log_mu = 5.48;           // mean of ln(amplitude / 1 s)
  double incident_log_sigma = 0.5;         // sd of ln(amplitude / 1 s)
  std::size_t incident_min_duration = 30;  // minutes
  std::size_t incident_max_duration = 120;
  double noise_sd = 1.5;
  std::uint64_t seed = 0;
  MinuteTime start = make_time(2016, 3, 7);

  /// Free flow 180 s; AM/PM peaks from 1440 and 720 minute harmonics; weekday
  /// morning and evening rush spikes; two incidents a week.
  static SynthSpec defaults();
  /// Throws Error naming the first offending field.
  void validate() const;
};

struct Incident {
  std::size_t start = 0;  // sample index
  std::size_t duration_min = 0;
  double amplitude_s = 0.0;
};

struct SynthDataset {
  MinuteSeries observed;
  MinuteSeries true_background;
  MinuteSeries true_recurrent;
  MinuteSeries true_incidents;
  std::vector<double> noise;
  /// Stand-in for an operator-published profile: per minute-of-week EWMA (0.3)
  /// of earlier observed weeks; the first week uses the true background.
  MinuteSeries published_profile;
  std::vector<Incident> incidents;
  SynthSpec spec;
};

/// Deterministic given spec.seed.
SynthDataset generate(const SynthSpec& spec);

/// Half-sine bump value at offset `t` (0-based) inside a bump of `duration` minutes.
double half_sine(std::size_t t, std::size_t duration);

/// Sample autocorrelation for lags 0..max_lag (FFT based).
std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);

/// Rows in the ingest CSV layout (`link_id,timestamp,travel_time_s,profile_tt_s,flow_vph,headway_m`).
void write_observations_csv(std::ostream& out, const std::string& link_id, const SynthDataset& data,
                            bool with_header);
/// `link_id,timestamp,background_s,recurrent_s,incident_s,noise_s,observed_s`.
void write_ground_truth_csv(std::ostream& out, const std::string& link_id, const SynthDataset& data,
                            bool with_header);

}  // namespace warp::synth
