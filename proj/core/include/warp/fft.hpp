#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace warp::fft {

enum class Direction { kForward, kInverse };

/// Unnormalized complex DFT of a fixed length backed by FFTW. Owns aligned
/// in/out buffers; fill input(), call execute(), read output().
/// Planning uses FFTW_ESTIMATE so results are bit-reproducible run to run.
class Plan {
 public:
  Plan(std::size_t n, Direction direction);
  ~Plan();
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  Plan(Plan&& other) noexcept;
  Plan& operator=(Plan&& other) noexcept;

  std::size_t size() const { return n_; }
  std::span<std::complex<double>> input();
  std::span<const std::complex<double>> output() const;
  void execute();

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  void* in_ = nullptr;
  void* out_ = nullptr;
  void* plan_ = nullptr;
};

/// Full complex spectrum of a real sequence.
std::vector<std::complex<double>> forward(std::span<const double> x);
/// Real part of the normalized inverse transform.
std::vector<double> inverse_real(std::span<const std::complex<double>> spectrum);

std::size_t next_power_of_two(std::size_t n);

}  // namespace warp::fft
