#pragma once

#include <span>

#include "nch/field.hpp"

namespace nch {

/// Real-to-complex / complex-to-real FFT pair for one grid (FFTW backend).
///
/// Transforms are unnormalized and use storage-origin phases:
/// forward(u)[k] = sum_j u_j exp(-2 pi i k.j / N), backward is the matching
/// unscaled inverse, so backward(forward(u)) = N^d u. Plans are built with
/// FFTW_ESTIMATE so results do not depend on timing measurements.
class FourierTransform {
 public:
  explicit FourierTransform(const Grid& grid);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;
  FourierTransform(FourierTransform&& other) noexcept;
  FourierTransform& operator=(FourierTransform&& other) noexcept;

  const Grid& grid() const noexcept { return grid_; }

  void forward(std::span<const double> in, std::span<Complex> out);
  /// `in` is left untouched (the transform runs on an internal copy).
  void backward(std::span<const Complex> in, std::span<double> out);

 private:
  void release() noexcept;

  Grid grid_;
  double* real_ = nullptr;
  Complex* spec_ = nullptr;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Full complex DFT over all N^d modes (unnormalized, storage-origin phase).
/// Used off the hot path where a full spectrum is required.
void full_dft(const Grid& grid, std::span<const Complex> in, std::span<Complex> out, bool inverse);

}  // namespace nch
