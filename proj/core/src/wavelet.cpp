#include "warp/wavelet.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "warp/fft.hpp"
#include "warp/stats.hpp"

namespace warp::wavelet {

void WaveletParams::validate() const {
  if (!(beta > 0.0)) throw Error("wavelet.beta must be > 0");
  if (!(gamma > 0.0)) throw Error("wavelet.gamma must be > 0");
  if (n_scales < 2) throw Error("wavelet.n_scales must be >= 2");
  if (!(period_min > 0.0) || !(period_min < period_max)) {
    throw Error("wavelet.period_min must be positive and below wavelet.period_max");
  }
  if (!(alpha >= 0.0)) throw Error("wavelet.alpha must be >= 0");
  if (!(spike_floor >= 0.0)) throw Error("wavelet.spike_floor must be >= 0");
}

double morse_peak_frequency(double beta, double gamma) {
  return std::pow(beta / gamma, 1.0 / gamma);
}

namespace {

double log_morse_amplitude(double beta, double gamma) {
  // a = 2 * (e * gamma / beta)^(beta / gamma) puts the peak value at 2.
  return std::log(2.0) + (beta / gamma) * (1.0 + std::log(gamma / beta));
}

}  // namespace

std::vector<double> morse_wavelet_fourier(std::span<const double> omega, double beta, double gamma) {
  const double log_a = log_morse_amplitude(beta, gamma);
  std::vector<double> out(omega.size(), 0.0);
  for (std::size_t k = 0; k < omega.size(); ++k) {
    const double w = omega[k];
    if (w > 0.0) out[k] = std::exp(log_a + beta * std::log(w) - std::pow(w, gamma));
  }
  return out;
}

double morse_reconstruction_constant(double beta, double gamma) {
  // integral a w^(beta-1) exp(-w^gamma) dw = a * Gamma(beta/gamma) / gamma
  return std::exp(log_morse_amplitude(beta, gamma) + std::lgamma(beta / gamma)) / gamma;
}

ScaleGrid ScaleGrid::make(const WaveletParams& params) {
  params.validate();
  ScaleGrid grid;
  grid.beta = params.beta;
  grid.gamma = params.gamma;
  const std::size_t n = params.n_scales;
  const double log_lo = std::log(params.period_min);
  const double log_hi = std::log(params.period_max);
  grid.log_step = (log_hi - log_lo) / static_cast<double>(n - 1);
  const double peak = morse_peak_frequency(params.beta, params.gamma);
  grid.periods.resize(n);
  grid.scales.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    const double period = std::exp(log_lo + grid.log_step * static_cast<double>(l));
    grid.periods[l] = period;
    grid.scales[l] = period * peak / (2.0 * std::numbers::pi);
  }
  return grid;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error("matrix dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

std::vector<double> Scaleogram::mean_power() const {
  std::vector<double> out(coefficients.rows(), 0.0);
  for (std::size_t l = 0; l < coefficients.rows(); ++l) {
    double acc = 0.0;
    for (const auto& c : coefficients.row(l)) acc += std::norm(c);
    out[l] = coefficients.cols() ? acc / static_cast<double>(coefficients.cols()) : 0.0;
  }
  return out;
}

namespace {

std::size_t reflect_index(std::ptrdiff_t t, std::size_t n) {
  const auto period = static_cast<std::ptrdiff_t>(2 * n);
  std::ptrdiff_t r = t % period;
  if (r < 0) r += period;
  return r < static_cast<std::ptrdiff_t>(n) ? static_cast<std::size_t>(r)
                                            : static_cast<std::size_t>(period - 1 - r);
}

// Holds the spectrum of the reflected, zero-mean series and produces one scale
// row at a time.
class CwtEngine {
 public:
  CwtEngine(std::span<const double> centered, const ScaleGrid& grid)
      : grid_(grid),
        n_(centered.size()),
        m_(fft::next_power_of_two(2 * centered.size())),
        left_pad_((m_ - n_) / 2),
        inverse_(m_, fft::Direction::kInverse) {
    fft::Plan forward(m_, fft::Direction::kForward);
    auto in = forward.input();
    for (std::size_t j = 0; j < m_; ++j) {
      const auto t = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(left_pad_);
      in[j] = {centered[reflect_index(t, n_)], 0.0};
    }
    forward.execute();
    spectrum_.assign(forward.output().begin(), forward.output().end());

    // Positive frequencies only (analytic wavelet); Nyquist and DC excluded.
    half_ = m_ / 2;
    log_omega_.resize(half_);
    omega_pow_.resize(half_);
    for (std::size_t k = 1; k < half_; ++k) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m_);
      log_omega_[k] = std::log(w);
      omega_pow_[k] = std::pow(w, grid_.gamma);
    }
    log_a_ = log_morse_amplitude(grid_.beta, grid_.gamma);
  }

  std::size_t length() const { return n_; }

  void row(std::size_t l, std::span<std::complex<double>> out) {
    const double s = grid_.scales[l];
    const double log_s = std::log(s);
    const double s_pow = std::pow(s, grid_.gamma);
    auto in = inverse_.input();
    std::fill(in.begin(), in.end(), std::complex<double>{});
    for (std::size_t k = 1; k < half_; ++k) {
      const double exponent = log_a_ + grid_.beta * (log_s + log_omega_[k]) - s_pow * omega_pow_[k];
      if (exponent < -700.0) continue;
      in[k] = spectrum_[k] * std::exp(exponent);
    }
    inverse_.execute();
    const double norm = 1.0 / static_cast<double>(m_);
    const auto result = inverse_.output();
    for (std::size_t i = 0; i < n_; ++i) out[i] = result[left_pad_ + i] * norm;
  }

 private:
  const ScaleGrid& grid_;
  std::size_t n_;
  std::size_t m_;
  std::size_t left_pad_;
  std::size_t half_ = 0;
  double log_a_ = 0.0;
  std::vector<std::complex<double>> spectrum_;
  std::vector<double> log_omega_;
  std::vector<double> omega_pow_;
  fft::Plan inverse_;
};

struct Centered {
  std::vector<double> values;
  double mean = 0.0;
};

Centered center(std::span<const double> x) {
  if (x.empty()) throw Error("cwt requires a non-empty series");
  Centered c;
  c.mean = stats::mean(x);
  c.values.resize(x.size());
  std::ranges::transform(x, c.values.begin(), [&](double v) { return v - c.mean; });
  return c;
}

double reconstruction_weight(const ScaleGrid& grid) {
  // x(t) - mean = (2 / C) * sum_l Re W_l(t) * dlog(s)
  return 2.0 * grid.log_step / morse_reconstruction_constant(grid.beta, grid.gamma);
}

// Returns the row threshold and writes the background/spike parts.
double split_row(std::span<const std::complex<double>> row, double alpha, std::vector<double>& moduli,
                 std::span<std::complex<double>> background, std::span<std::complex<double>> spikes) {
  moduli.resize(row.size());
  std::ranges::transform(row, moduli.begin(), [](const auto& c) { return std::abs(c); });
  std::vector<double> scratch(moduli);
  const double q25 = stats::quantile_inplace(scratch, 0.25);
  const double med = stats::quantile_inplace(scratch, 0.5);
  const double q75 = stats::quantile_inplace(scratch, 0.75);
  const double threshold = med + alpha * (q75 - q25);
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double rho = moduli[i];
    if (rho <= threshold) {
      background[i] = row[i];
      spikes[i] = {};
    } else {
      // Scale by positive reals so both parts keep the original phase.
      background[i] = row[i] * (threshold / rho);
      spikes[i] = row[i] * ((rho - threshold) / rho);
    }
  }
  return threshold;
}

}  // namespace

Scaleogram cwt(std::span<const double> series, const WaveletParams& params) {
  params.validate();
  Scaleogram out;
  out.grid = ScaleGrid::make(params);
  const auto centered = center(series);
  out.series_mean = centered.mean;
  out.coefficients = ComplexMatrix(out.grid.size(), series.size());
  CwtEngine engine(centered.values, out.grid);
  for (std::size_t l = 0; l < out.grid.size(); ++l) engine.row(l, out.coefficients.row(l));
  return out;
}

Scaleogram cwt(const MinuteSeries& series, const WaveletParams& params) {
  const auto dense = series.dense();
  return cwt(std::span<const double>(dense), params);
}

CoefficientSplit scale_threshold_split(const Scaleogram& scaleogram, double alpha) {
  if (!(alpha >= 0.0)) throw Error("alpha must be >= 0");
  const auto& w = scaleogram.coefficients;
  CoefficientSplit split{ComplexMatrix(w.rows(), w.cols()), ComplexMatrix(w.rows(), w.cols()), {}};
  split.thresholds.resize(w.rows());
  std::vector<double> moduli;
  for (std::size_t l = 0; l < w.rows(); ++l) {
    split.thresholds[l] = split_row(w.row(l), alpha, moduli, split.background.row(l), split.spikes.row(l));
  }
  return split;
}

std::vector<double> icwt(const ComplexMatrix& coefficients, const ScaleGrid& grid, double series_mean) {
  if (coefficients.rows() != grid.size()) {
    throw Error("icwt: coefficient rows (" + std::to_string(coefficients.rows()) +
                ") do not match scale count (" + std::to_string(grid.size()) + ")");
  }
  const double weight = reconstruction_weight(grid);
  std::vector<double> out(coefficients.cols(), 0.0);
  for (std::size_t l = 0; l < coefficients.rows(); ++l) {
    const auto row = coefficients.row(l);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += row[i].real();
  }
  for (double& v : out) v = v * weight + series_mean;
  return out;
}

Decomposition decompose(const MinuteSeries& series, const WaveletParams& params) {
  params.validate();
  const auto dense = series.dense();
  const auto grid = ScaleGrid::make(params);
  const auto centered = center(dense);
  const std::size_t n = dense.size();

  CwtEngine engine(centered.values, grid);
  std::vector<std::complex<double>> row(n), bg_row(n), sp_row(n);
  std::vector<double> moduli;
  std::vector<double> bg_acc(n, 0.0), sp_acc(n, 0.0);
  for (std::size_t l = 0; l < grid.size(); ++l) {
    engine.row(l, row);
    split_row(row, params.alpha, moduli, bg_row, sp_row);
    for (std::size_t i = 0; i < n; ++i) {
      bg_acc[i] += bg_row[i].real();
      sp_acc[i] += sp_row[i].real();
    }
  }

  const double weight = reconstruction_weight(grid);
  std::vector<double> background(n), spikes(n);
  std::vector<std::uint8_t> indicator(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double b = bg_acc[i] * weight + centered.mean;
    double s = sp_acc[i] * weight;
    if (s <= params.spike_floor) {
      b += s;
      s = 0.0;
    } else {
      indicator[i] = 1;
    }
    background[i] = b;
    spikes[i] = s;
  }
  return {MinuteSeries::from_dense(series.start(), background), MinuteSeries::from_dense(series.start(), spikes),
          std::move(indicator), params};
}

void write_power_csv(std::ostream& out, const Scaleogram& scaleogram, std::size_t time_stride) {
  if (time_stride == 0) time_stride = 1;
  const auto& w = scaleogram.coefficients;
  char buf[64];
  auto put = [&](double v) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, ptr - buf);
  };
  out << "period_min";
  for (std::size_t i = 0; i < w.cols(); i += time_stride) out << ",t" << i;
  out << '\n';
  for (std::size_t l = 0; l < w.rows(); ++l) {
    put(scaleogram.grid.periods[l]);
    for (std::size_t i = 0; i < w.cols(); i += time_stride) {
      out << ',';
      put(std::norm(w(l, i)));
    }
    out << '\n';
  }
}

}  // namespace warp::wavelet
