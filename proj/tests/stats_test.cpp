#include <gtest/gtest.h>

#include <cmath>

#include "warp/series.hpp"
#include "warp/stats.hpp"

namespace warp::stats {
namespace {

TEST(Stats, MeanAndPopulationStddev) {
  const std::vector<double> x{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(mean(x), 5.0);
  EXPECT_DOUBLE_EQ(stddev(x), 2.0);
  EXPECT_THROW(mean(std::vector<double>{}), Error);
}

TEST(Stats, QuantileType7) {
  const std::vector<double> x{4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(x, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile(x, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(median(std::vector<double>{5, 1, 3}), 3.0);
  EXPECT_DOUBLE_EQ(quantile(std::vector<double>{7}, 0.3), 7.0);
}

TEST(Stats, Pearson) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{2, 4, 6, 8, 10};
  const std::vector<double> c{5, 4, 3, 2, 1};
  EXPECT_NEAR(pearson(a, b), 1.0, 1e-12);
  EXPECT_NEAR(pearson(a, c), -1.0, 1e-12);
  EXPECT_THROW(pearson(a, std::vector<double>{1}), Error);
}

TEST(Stats, FitLineRecoversExactLine) {
  std::vector<double> y(50);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2.0 + 3.0 * static_cast<double>(i);
  const auto line = fit_line(y);
  EXPECT_NEAR(line.intercept, 2.0, 1e-9);
  EXPECT_NEAR(line.slope, 3.0, 1e-9);
  EXPECT_NEAR(line.at(100.0), 302.0, 1e-7);
  const auto flat = fit_line(std::vector<double>{4.0});
  EXPECT_DOUBLE_EQ(flat.at(10.0), 4.0);
}

}  // namespace
}  // namespace warp::stats
