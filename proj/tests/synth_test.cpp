#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "test_support.hpp"
#include "warp/csv.hpp"
#include "warp/synth.hpp"

namespace warp::synth {
namespace {

std::size_t argmax_in(const std::vector<double>& acf, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(std::max_element(acf.begin() + lo, acf.begin() + hi + 1) - acf.begin());
}

TEST(Generate, NoiselessSmoothIsBackground) {
  SynthSpec spec = SynthSpec::defaults();
  spec.noise_sd = 0.0;
  spec.recurrent_spikes.clear();
  spec.incident_rate = 0.0;
  const auto d = generate(spec);
  EXPECT_EQ(d.observed.dense(), d.true_background.dense());
  EXPECT_TRUE(d.incidents.empty());
}

TEST(Generate, DeterministicForSeed) {
  SynthSpec spec = SynthSpec::defaults();
  spec.seed = 77;
  const auto a = generate(spec);
  const auto b = generate(spec);
  EXPECT_EQ(a.observed.dense(), b.observed.dense());
  EXPECT_EQ(a.published_profile.dense(), b.published_profile.dense());
  spec.seed = 78;
  EXPECT_NE(generate(spec).observed.dense(), a.observed.dense());
}

TEST(Generate, IncidentCountWithinPoissonBounds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SynthSpec spec = SynthSpec::defaults();
    spec.seed = seed;
    const auto n = generate(spec).incidents.size();
    EXPECT_GE(n, 8u) << seed;
    EXPECT_LE(n, 44u) << seed;
  }
}

TEST(Generate, PropertyComponentsAddUp) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SynthSpec spec = SynthSpec::defaults();
    spec.seed = seed;
    const auto d = generate(spec);
    for (std::size_t i = 0; i < d.observed.size(); ++i) {
      ASSERT_EQ(*d.observed[i], *d.true_background[i] + *d.true_recurrent[i] + *d.true_incidents[i] + d.noise[i]);
    }
  }
}

TEST(Generate, BackgroundBoundedByFreeFlow) {
  const auto d = generate(SynthSpec::defaults());
  const auto bg = d.true_background.dense();
  EXPECT_NEAR(*std::min_element(bg.begin(), bg.end()), 180.0, 1e-9);
  for (const auto& ev : d.incidents) {
    EXPECT_GE(ev.duration_min, 30u);
    EXPECT_LE(ev.duration_min, 120u);
  }
}

TEST(Generate, DoubleSeasonalityInAutocorrelation) {
  const auto d = generate(SynthSpec::defaults());
  const auto acf = autocorrelation(d.observed.dense(), 11000);
  EXPECT_NEAR(static_cast<double>(argmax_in(acf, 1140, 1740)), 1440.0, 15.0);
  EXPECT_NEAR(static_cast<double>(argmax_in(acf, 9000, 11000)), 10080.0, 15.0);
}

TEST(Autocorrelation, MatchesDirectSum) {
  const auto x = testing::gaussian_noise(300, 1.0, 6);
  const auto acf = autocorrelation(x, 10);
  double m = 0;
  for (double v : x) m += v;
  m /= x.size();
  double c0 = 0;
  for (double v : x) c0 += (v - m) * (v - m);
  for (std::size_t k = 0; k <= 10; ++k) {
    double ck = 0;
    for (std::size_t i = 0; i + k < x.size(); ++i) ck += (x[i] - m) * (x[i + k] - m);
    EXPECT_NEAR(acf[k], ck / c0, 1e-12);
  }
}

TEST(HalfSine, ShapeAndSupport) {
  EXPECT_NEAR(half_sine(0, 2), std::sin(std::numbers::pi / 4), 1e-15);
  EXPECT_EQ(half_sine(60, 60), 0.0);
  EXPECT_NEAR(half_sine(29, 60), half_sine(30, 60), 1e-15);
}

TEST(SynthSpecTest, ValidationNamesField) {
  auto expect_field = [](SynthSpec s, const std::string& field) {
    try {
      s.validate();
      FAIL() << field;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  };
  SynthSpec s = SynthSpec::defaults();
  s.weeks = 8;
  expect_field(s, "weeks");
  s = SynthSpec::defaults();
  s.free_flow = 0;
  expect_field(s, "free_flow");
  s = SynthSpec::defaults();
  s.noise_sd = -1;
  expect_field(s, "noise_sd");
  s = SynthSpec::defaults();
  s.recurrent_spikes[0].probability = 2;
  expect_field(s, "probability");
  s = SynthSpec::defaults();
  s.start = testing::monday() + std::chrono::minutes(5);
  expect_field(s, "start");
}

TEST(SynthCsv, ObservationsAndGroundTruth) {
  SynthSpec spec = SynthSpec::defaults();
  spec.weeks = 9;
  const auto d = generate(spec);
  std::ostringstream obs, truth;
  write_observations_csv(obs, "L1", d, true);
  write_ground_truth_csv(truth, "L1", d, true);
  std::istringstream obs_in(obs.str()), truth_in(truth.str());
  std::string line;
  std::getline(obs_in, line);
  EXPECT_EQ(line, "link_id,timestamp,travel_time_s,profile_tt_s,flow_vph,headway_m");
  std::getline(truth_in, line);
  EXPECT_EQ(line, "link_id,timestamp,background_s,recurrent_s,incident_s,noise_s,observed_s");
  std::size_t rows = 0;
  while (std::getline(truth_in, line)) {
    const auto f = csv::split_line(line);
    ASSERT_EQ(f.size(), 7u);
    if (rows == 0) EXPECT_EQ(f[1], "2016-03-07T00:00");
    const double sum = *csv::parse_number(f[2]) + *csv::parse_number(f[3]) + *csv::parse_number(f[4]) +
                       *csv::parse_number(f[5]);
    ASSERT_NEAR(sum, *csv::parse_number(f[6]), 1e-9);
    ++rows;
  }
  EXPECT_EQ(rows, 9 * kMinutesPerWeek);
}

}  // namespace
}  // namespace warp::synth
