#include "warp/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>
#include <utility>

namespace warp::fft {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Plan::Plan(std::size_t n, Direction direction) : n_(n) {
  in_ = fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1));
  out_ = fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1));
  if (in_ == nullptr || out_ == nullptr) {
    release();
    throw std::bad_alloc();
  }
  const int sign = direction == Direction::kForward ? FFTW_FORWARD : FFTW_BACKWARD;
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), static_cast<fftw_complex*>(in_),
                           static_cast<fftw_complex*>(out_), sign, FFTW_ESTIMATE);
}

Plan::~Plan() {
  release();
}

Plan::Plan(Plan&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      in_(std::exchange(other.in_, nullptr)),
      out_(std::exchange(other.out_, nullptr)),
      plan_(std::exchange(other.plan_, nullptr)) {}

Plan& Plan::operator=(Plan&& other) noexcept {
  if (this != &other) {
    release();
    n_ = std::exchange(other.n_, 0);
    in_ = std::exchange(other.in_, nullptr);
    out_ = std::exchange(other.out_, nullptr);
    plan_ = std::exchange(other.plan_, nullptr);
  }
  return *this;
}

void Plan::release() noexcept {
  if (plan_ != nullptr) {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
  plan_ = in_ = out_ = nullptr;
}

std::span<std::complex<double>> Plan::input() {
  return {reinterpret_cast<std::complex<double>*>(in_), n_};
}

std::span<const std::complex<double>> Plan::output() const {
  return {reinterpret_cast<const std::complex<double>*>(out_), n_};
}

void Plan::execute() {
  fftw_execute(static_cast<fftw_plan>(plan_));
}

std::vector<std::complex<double>> forward(std::span<const double> x) {
  Plan plan(x.size(), Direction::kForward);
  std::ranges::transform(x, plan.input().begin(), [](double v) { return std::complex<double>(v, 0.0); });
  plan.execute();
  return {plan.output().begin(), plan.output().end()};
}

std::vector<double> inverse_real(std::span<const std::complex<double>> spectrum) {
  Plan plan(spectrum.size(), Direction::kInverse);
  std::ranges::copy(spectrum, plan.input().begin());
  plan.execute();
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  std::vector<double> out(spectrum.size());
  std::ranges::transform(plan.output(), out.begin(), [scale](const auto& c) { return c.real() * scale; });
  return out;
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace warp::fft
