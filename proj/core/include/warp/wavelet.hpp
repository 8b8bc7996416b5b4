#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "warp/series.hpp"

namespace warp::wavelet {

struct WaveletParams {
  double beta = 3.0;    // Morse decay exponent
  double gamma = 3.0;   // Morse symmetry exponent
  std::size_t n_scales = 140;
  double period_min = 4.0;       // minutes
  double period_max = 40320.0;   // minutes (4 weeks)
  double alpha = 1.0;            // spike aggressiveness
  double spike_floor = 3.0;      // seconds

  void validate() const;
};

// -- Generalized Morse wavelet -------------------------------------------------

/// Frequency of the wavelet's peak, (beta/gamma)^(1/gamma), radians per sample at unit scale.
double morse_peak_frequency(double beta, double gamma);

/// a * w^beta * exp(-w^gamma), with `a` chosen so the peak value is 2. Zero at w = 0.
std::vector<double> morse_wavelet_fourier(std::span<const double> omega, double beta, double gamma);

/// Integral of psi(w)/w over (0, inf): the single-integral reconstruction constant.
double morse_reconstruction_constant(double beta, double gamma);

// -- Scale grid and coefficients ------------------------------------------------

/// Log-spaced scales; row l has equivalent Fourier period periods[l] (minutes, ascending).
struct ScaleGrid {
  std::vector<double> periods;
  std::vector<double> scales;
  double log_step = 0.0;
  double beta = 3.0;
  double gamma = 3.0;

  static ScaleGrid make(const WaveletParams& params);
  std::size_t size() const { return scales.size(); }
};

/// Row-major rows x cols complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::complex<double>& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const std::complex<double>& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<std::complex<double>> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const std::complex<double>> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::complex<double>> data_;
};

struct Scaleogram {
  ComplexMatrix coefficients;  // scales x time
  ScaleGrid grid;
  double series_mean = 0.0;

  double modulus(std::size_t l, std::size_t i) const { return std::abs(coefficients(l, i)); }
  double phase(std::size_t l, std::size_t i) const { return std::arg(coefficients(l, i)); }
  /// Squared modulus.
  double power(std::size_t l, std::size_t i) const { return std::norm(coefficients(l, i)); }
  /// Time-averaged power per scale row.
  std::vector<double> mean_power() const;
};

/// Continuous wavelet transform of the zero-mean series. The series is extended
/// by even reflection to a power of two at least twice its length before the
/// frequency-domain filtering; the padding is dropped from the output.
Scaleogram cwt(std::span<const double> series, const WaveletParams& params);
Scaleogram cwt(const MinuteSeries& series, const WaveletParams& params);

struct CoefficientSplit {
  ComplexMatrix background;
  ComplexMatrix spikes;
  std::vector<double> thresholds;  // per scale row
};

/// Per scale row: T = median(rho) + alpha * IQR(rho). Moduli above T are clipped to T
/// in the background; the excess, with the original phase, goes to the spikes.
CoefficientSplit scale_threshold_split(const Scaleogram& scaleogram, double alpha);

/// Linear reconstruction from analytic-wavelet coefficients, plus `series_mean`.
std::vector<double> icwt(const ComplexMatrix& coefficients, const ScaleGrid& grid, double series_mean);

struct Decomposition {
  MinuteSeries background;
  MinuteSeries spikes;
  std::vector<std::uint8_t> indicator;
  WaveletParams params;
};

/// cwt -> scale_threshold_split -> icwt on both parts, then spike cleanup: spike values
/// at or below the floor move into the background, indicator marks the rest.
/// Rows are processed one at a time, so memory stays O(length) rather than O(scales x length).
Decomposition decompose(const MinuteSeries& series, const WaveletParams& params);

/// Diagnostic export: one row per scale; the first column is the scale period
/// in minutes, the rest are |W|^2 at every `time_stride`-th minute.
void write_power_csv(std::ostream& out, const Scaleogram& scaleogram, std::size_t time_stride = 1);

}  // namespace warp::wavelet
