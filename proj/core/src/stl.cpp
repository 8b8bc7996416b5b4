#include "warp/stl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "warp/loess.hpp"
#include "warp/series.hpp"

namespace warp::seasonal {

namespace {

std::size_t make_odd(std::size_t v) {
  return v % 2 == 0 ? v + 1 : v;
}

std::size_t default_jump(std::size_t window) {
  return std::max<std::size_t>(1, (window + 9) / 10);
}

// Local fit at 1-based position xs over 1-based samples [nleft, nright] of y,
// where sample j sits at position j. Mirrors the classic STL estimator,
// including the bandwidth widening when the window exceeds the sample count.
struct Smoother {
  std::vector<double> positions;
  std::vector<double> scratch;

  void reserve(std::size_t n) {
    if (positions.size() < n) {
      positions.resize(n);
      std::iota(positions.begin(), positions.end(), 1.0);
      scratch.resize(n);
    }
  }

  std::optional<double> estimate(std::span<const double> y, std::size_t len, int degree, double xs,
                                 std::size_t nleft, std::size_t nright, std::span<const double> robust) {
    const std::size_t n = y.size();
    double h = std::max(xs - static_cast<double>(nleft), static_cast<double>(nright) - xs);
    if (len > n) h += static_cast<double>((len - n) / 2);
    return detail::local_fit(std::span<const double>(positions).first(n), y, robust, nleft - 1, nright - 1, xs,
                             h, degree, scratch);
  }

  // LOESS of y at every position, fitting every `jump`-th point and
  // interpolating linearly in between.
  void smooth(std::span<const double> y, std::size_t len, int degree, std::size_t jump,
              std::span<const double> robust, std::span<double> out) {
    const std::size_t n = y.size();
    reserve(n);
    if (n < 2) {
      out[0] = y[0];
      return;
    }
    const std::size_t step = std::min(jump, n - 1);
    auto fit = [&](std::size_t i, std::size_t nleft, std::size_t nright) {
      const auto v = estimate(y, len, degree, static_cast<double>(i), nleft, nright, robust);
      out[i - 1] = v ? *v : y[i - 1];
    };

    std::size_t nleft = 1;
    std::size_t nright = n;
    if (len >= n) {
      for (std::size_t i = 1; i <= n; i += step) fit(i, 1, n);
    } else if (step == 1) {
      const std::size_t half = (len + 1) / 2;
      nright = len;
      for (std::size_t i = 1; i <= n; ++i) {
        if (i > half && nright != n) {
          ++nleft;
          ++nright;
        }
        fit(i, nleft, nright);
      }
    } else {
      const std::size_t half = (len + 1) / 2;
      for (std::size_t i = 1; i <= n; i += step) {
        if (i < half) {
          nleft = 1;
          nright = len;
        } else if (i >= n - half + 1) {
          nleft = n - len + 1;
          nright = n;
        } else {
          nleft = i - half + 1;
          nright = len + i - half;
        }
        fit(i, nleft, nright);
      }
    }

    if (step != 1) {
      for (std::size_t i = 1; i + step <= n; i += step) {
        const double delta = (out[i + step - 1] - out[i - 1]) / static_cast<double>(step);
        for (std::size_t j = i + 1; j < i + step; ++j) out[j - 1] = out[i - 1] + delta * static_cast<double>(j - i);
      }
      const std::size_t last = ((n - 1) / step) * step + 1;
      if (last != n) {
        if (len >= n) {
          nleft = 1;
          nright = n;
        }
        fit(n, nleft, nright);
        if (last != n - 1) {
          const double delta = (out[n - 1] - out[last - 1]) / static_cast<double>(n - last);
          for (std::size_t j = last + 1; j < n; ++j) out[j - 1] = out[last - 1] + delta * static_cast<double>(j - last);
        }
      }
    }
  }
};

void moving_average(std::span<const double> x, std::size_t len, std::span<double> out) {
  const std::size_t count = x.size() - len + 1;
  double sum = std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(len), 0.0);
  const double inv = 1.0 / static_cast<double>(len);
  out[0] = sum * inv;
  for (std::size_t j = 1; j < count; ++j) {
    sum += x[j + len - 1] - x[j - 1];
    out[j] = sum * inv;
  }
}

class StlRunner {
 public:
  StlRunner(std::span<const double> y, const StlParams& p)
      : y_(y), p_(p), n_(y.size()), np_(p.period), cycle_(n_ + 2 * np_), work_a_(n_ + 2 * np_), work_b_(n_ + 2 * np_) {}

  void inner_pass(bool use_robust, std::span<const double> robust, std::vector<double>& season,
                  std::vector<double>& trend) {
    std::vector<double> detrended(n_), lowpass(n_);
    for (std::size_t it = 0; it < p_.inner_iters; ++it) {
      for (std::size_t i = 0; i < n_; ++i) detrended[i] = y_[i] - trend[i];
      cycle_subseries(detrended, use_robust, robust);
      low_pass(lowpass);
      for (std::size_t i = 0; i < n_; ++i) season[i] = cycle_[np_ + i] - lowpass[i];
      for (std::size_t i = 0; i < n_; ++i) detrended[i] = y_[i] - season[i];
      smoother_.smooth(detrended, p_.trend_window, p_.trend_degree, p_.trend_jump,
                       use_robust ? robust : std::span<const double>{}, trend);
    }
  }

 private:
  // Smooths each cycle-subseries and extends it by one cycle at both ends,
  // filling cycle_ (length n + 2 * period).
  void cycle_subseries(std::span<const double> x, bool use_robust, std::span<const double> robust) {
    for (std::size_t j = 0; j < np_; ++j) {
      const std::size_t k = (n_ - j - 1) / np_ + 1;
      sub_y_.resize(k);
      sub_w_.resize(k);
      sub_out_.resize(k + 2);
      for (std::size_t i = 0; i < k; ++i) {
        sub_y_[i] = x[i * np_ + j];
        if (use_robust) sub_w_[i] = robust[i * np_ + j];
      }
      const std::span<const double> w = use_robust ? std::span<const double>(sub_w_) : std::span<const double>{};
      const std::size_t ns = p_.seasonal_window;
      smoother_.smooth(sub_y_, ns, p_.seasonal_degree, p_.seasonal_jump, w, std::span<double>(sub_out_).subspan(1, k));

      const auto front = smoother_.estimate(sub_y_, ns, p_.seasonal_degree, 0.0, 1, std::min(ns, k), w);
      sub_out_[0] = front ? *front : sub_out_[1];
      const std::size_t nleft = k > ns ? k - ns + 1 : 1;
      const auto back = smoother_.estimate(sub_y_, ns, p_.seasonal_degree, static_cast<double>(k + 1), nleft, k, w);
      sub_out_[k + 1] = back ? *back : sub_out_[k];

      for (std::size_t m = 0; m < k + 2; ++m) cycle_[m * np_ + j] = sub_out_[m];
    }
  }

  // Moving averages of length period, period and 3, then LOESS.
  void low_pass(std::span<double> out) {
    const std::size_t len = n_ + 2 * np_;
    moving_average(std::span<const double>(cycle_).first(len), np_, work_a_);
    moving_average(std::span<const double>(work_a_).first(len - np_ + 1), np_, work_b_);
    moving_average(std::span<const double>(work_b_).first(len - 2 * np_ + 2), 3, work_a_);
    smoother_.smooth(std::span<const double>(work_a_).first(n_), p_.lowpass_window, p_.lowpass_degree,
                     p_.lowpass_jump, {}, out);
  }

  std::span<const double> y_;
  const StlParams& p_;
  std::size_t n_;
  std::size_t np_;
  std::vector<double> cycle_;
  std::vector<double> work_a_;
  std::vector<double> work_b_;
  std::vector<double> sub_y_, sub_w_, sub_out_;
  Smoother smoother_;
};

}  // namespace

StlParams StlParams::for_period(std::size_t period) {
  StlParams p;
  p.period = period;
  return p.resolved();
}

StlParams StlParams::resolved() const {
  if (period < 2) throw Error("stl.period must be >= 2");
  StlParams p = *this;
  p.seasonal_window = make_odd(std::max<std::size_t>(3, p.seasonal_window));
  if (p.trend_window == 0) {
    const double ns = static_cast<double>(p.seasonal_window);
    const double raw = 1.5 * static_cast<double>(period) / (1.0 - 1.5 / ns);
    p.trend_window = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  }
  p.trend_window = make_odd(std::max<std::size_t>(3, p.trend_window));
  if (p.lowpass_window == 0) p.lowpass_window = period;
  p.lowpass_window = make_odd(std::max<std::size_t>(3, p.lowpass_window));
  if (p.seasonal_jump == 0) p.seasonal_jump = default_jump(p.seasonal_window);
  if (p.trend_jump == 0) p.trend_jump = default_jump(p.trend_window);
  if (p.lowpass_jump == 0) p.lowpass_jump = default_jump(p.lowpass_window);
  for (int d : {p.seasonal_degree, p.trend_degree, p.lowpass_degree}) {
    if (d != 0 && d != 1) throw Error("stl degrees must be 0 or 1");
  }
  if (p.inner_iters < 1) throw Error("stl.inner_iters must be >= 1");
  return p;
}

StlResult stl(std::span<const double> series, const StlParams& params) {
  const StlParams p = params.resolved();
  const std::size_t n = series.size();
  if (n < 2 * p.period) {
    throw Error("stl: series length " + std::to_string(n) + " is shorter than two periods (" +
                std::to_string(2 * p.period) + ")");
  }

  StlResult out;
  out.period = p.period;
  out.seasonal.assign(n, 0.0);
  out.trend.assign(n, 0.0);
  out.robustness_weights.assign(n, 1.0);

  StlRunner runner(series, p);
  bool use_robust = false;
  for (std::size_t pass = 0;; ++pass) {
    runner.inner_pass(use_robust, out.robustness_weights, out.seasonal, out.trend);
    if (pass >= p.outer_iters) break;
    std::vector<double> residuals(n);
    for (std::size_t i = 0; i < n; ++i) residuals[i] = series[i] - out.seasonal[i] - out.trend[i];
    out.robustness_weights = bisquare_weights(residuals);
    use_robust = true;
  }

  out.remainder.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.remainder[i] = series[i] - out.seasonal[i] - out.trend[i];
  return out;
}

}  // namespace warp::seasonal
