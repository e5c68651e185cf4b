#include "nch/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <utility>

#include "nch/error.hpp"

namespace nch {

namespace {

// The FFTW planner is not reentrant; plan creation and destruction are
// serialized. Executing an existing plan is thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FourierTransform::FourierTransform(const Grid& grid) : grid_(grid) {
  const auto dims = grid.dims();
  real_ = static_cast<double*>(fftw_malloc(sizeof(double) * grid.size()));
  spec_ = static_cast<Complex*>(fftw_malloc(sizeof(Complex) * grid.half_size()));
  if (real_ == nullptr || spec_ == nullptr) {
    release();
    throw std::bad_alloc();
  }
  {
    std::lock_guard lock(planner_mutex());
    auto* cspec = reinterpret_cast<fftw_complex*>(spec_);
    forward_plan_ = fftw_plan_dft_r2c(grid.dim(), dims.data(), real_, cspec, FFTW_ESTIMATE);
    backward_plan_ = fftw_plan_dft_c2r(grid.dim(), dims.data(), cspec, real_, FFTW_ESTIMATE);
  }
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) {
    release();
    throw Error("fft", ExitCode::runtime, "FFTW failed to create a plan");
  }
}

FourierTransform::~FourierTransform() { release(); }

FourierTransform::FourierTransform(FourierTransform&& other) noexcept
    : grid_(other.grid_),
      real_(std::exchange(other.real_, nullptr)),
      spec_(std::exchange(other.spec_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

FourierTransform& FourierTransform::operator=(FourierTransform&& other) noexcept {
  if (this != &other) {
    release();
    grid_ = other.grid_;
    real_ = std::exchange(other.real_, nullptr);
    spec_ = std::exchange(other.spec_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void FourierTransform::release() noexcept {
  {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  }
  forward_plan_ = backward_plan_ = nullptr;
  if (real_ != nullptr) fftw_free(real_);
  if (spec_ != nullptr) fftw_free(spec_);
  real_ = nullptr;
  spec_ = nullptr;
}

void FourierTransform::forward(std::span<const double> in, std::span<Complex> out) {
  if (in.size() != grid_.size() || out.size() != grid_.half_size()) {
    throw ShapeError("FourierTransform::forward: buffer size mismatch");
  }
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::copy(spec_, spec_ + out.size(), out.begin());
}

void FourierTransform::backward(std::span<const Complex> in, std::span<double> out) {
  if (in.size() != grid_.half_size() || out.size() != grid_.size()) {
    throw ShapeError("FourierTransform::backward: buffer size mismatch");
  }
  std::copy(in.begin(), in.end(), spec_);
  fftw_execute(static_cast<fftw_plan>(backward_plan_));
  std::copy(real_, real_ + out.size(), out.begin());
}

void full_dft(const Grid& grid, std::span<const Complex> in, std::span<Complex> out, bool inverse) {
  if (in.size() != grid.size() || out.size() != grid.size()) {
    throw ShapeError("full_dft: buffer size mismatch");
  }
  const auto dims = grid.dims();
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * grid.size()));
  if (buf == nullptr) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(grid.dim(), dims.data(), buf, buf, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                         FFTW_ESTIMATE);
  }
  std::copy(in.begin(), in.end(), reinterpret_cast<Complex*>(buf));
  fftw_execute(plan);
  std::copy(reinterpret_cast<Complex*>(buf), reinterpret_cast<Complex*>(buf) + grid.size(),
            out.begin());
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
}

}  // namespace nch
