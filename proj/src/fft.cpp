#include "symdet/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "symdet/error.hpp"

namespace symdet {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

using Buffer = std::unique_ptr<fftw_complex, FftwFree>;

Buffer allocate(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) fail(ErrorKind::invalid_argument, "fftw_malloc failed");
  return Buffer(p);
}

// The new-array execute interface requires the same alignment as the
// planning buffers; std::vector storage is not guaranteed to satisfy it, so
// data is staged through aligned scratch buffers.
void run(fftw_plan plan, std::size_t n, const Fft2d::Complex* in, Fft2d::Complex* out) {
  Buffer src = allocate(n);
  Buffer dst = allocate(n);
  std::memcpy(src.get(), in, sizeof(fftw_complex) * n);
  fftw_execute_dft(plan, src.get(), dst.get());
  std::memcpy(static_cast<void*>(out), dst.get(), sizeof(fftw_complex) * n);
}

}  // namespace

struct Fft2d::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
  }
};

Fft2d::Fft2d(int width, int height) : width_(width), height_(height) {
  require(width >= 1 && height >= 1, "FFT dimensions must be positive");
  plans_ = std::make_unique<Plans>();
  Buffer a = allocate(size());
  Buffer b = allocate(size());
  std::lock_guard lock(planner_mutex());
  // Row-major: height rows of width samples.
  plans_->forward = fftw_plan_dft_2d(height, width, a.get(), b.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->backward =
      fftw_plan_dft_2d(height, width, a.get(), b.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (plans_->forward == nullptr || plans_->backward == nullptr)
    fail(ErrorKind::invalid_argument, "FFTW plan creation failed");
}

Fft2d::~Fft2d() = default;
Fft2d::Fft2d(Fft2d&&) noexcept = default;
Fft2d& Fft2d::operator=(Fft2d&&) noexcept = default;

std::vector<Fft2d::Complex> Fft2d::forward(std::span<const double> real) const {
  require(real.size() == size(), "FFT input size mismatch");
  std::vector<Complex> in(real.begin(), real.end());
  std::vector<Complex> out(size());
  forward(in, out);
  return out;
}

void Fft2d::forward(std::span<const Complex> in, std::span<Complex> out) const {
  require(in.size() == size() && out.size() == size(), "FFT buffer size mismatch");
  run(plans_->forward, size(), in.data(), out.data());
}

void Fft2d::inverse(std::span<const Complex> in, std::span<Complex> out) const {
  require(in.size() == size() && out.size() == size(), "FFT buffer size mismatch");
  run(plans_->backward, size(), in.data(), out.data());
  const double scale = 1.0 / static_cast<double>(size());
  for (Complex& c : out) c *= scale;
}

}  // namespace symdet
