#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace symdet {

/// Complex 2-D DFT of fixed size backed by FFTW. Plans are created once with
/// FFTW_ESTIMATE so the chosen algorithm, and therefore every output bit, is
/// reproducible across runs. `forward`/`inverse` are safe to call from
/// several threads on distinct buffers.
class Fft2d {
 public:
  using Complex = std::complex<double>;

  Fft2d(int width, int height);
  ~Fft2d();
  Fft2d(Fft2d&&) noexcept;
  Fft2d& operator=(Fft2d&&) noexcept;
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(width_) * height_; }

  /// Unnormalized forward transform of a real row-major array.
  std::vector<Complex> forward(std::span<const double> real) const;
  void forward(std::span<const Complex> in, std::span<Complex> out) const;

  /// Inverse transform including the 1/(W*H) factor.
  void inverse(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  struct Plans;
  int width_ = 0;
  int height_ = 0;
  std::unique_ptr<Plans> plans_;
};

}  // namespace symdet
