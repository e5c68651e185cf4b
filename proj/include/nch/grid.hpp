#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nch {

/// Periodic tensor-product collocation grid on prod_i (-X_i, X_i).
///
/// Node j on axis i sits at x = -X_i + j*h_i, j = 0..N_i-1. Values are stored
/// row-major with axis 0 slowest. Internally every grid is viewed as a 3D
/// block with leading unit axes, so loops can be written once for d = 1,2,3.
class Grid {
 public:
  static constexpr int max_dim = 3;

  Grid() = default;
  Grid(int dim, std::array<std::size_t, max_dim> n,
       std::array<double, max_dim> half_width);

  /// Same N and X on every axis.
  static Grid uniform(int dim, std::size_t n, double half_width);

  int dim() const noexcept { return dim_; }
  std::size_t n(int axis) const { return n_[axis]; }
  double half_width(int axis) const { return half_width_[axis]; }
  double spacing(int axis) const { return 2.0 * half_width_[axis] / static_cast<double>(n_[axis]); }
  double coordinate(int axis, std::size_t j) const {
    return -half_width_[axis] + static_cast<double>(j) * spacing(axis);
  }

  /// Number of physical nodes, prod N_i.
  std::size_t size() const noexcept { return size_; }
  /// h^d as a product of per-axis spacings.
  double cell_volume() const;
  /// |Omega| = prod 2 X_i.
  double volume() const;

  /// Physical shape padded to three axes with leading ones.
  std::array<std::size_t, 3> shape3() const;
  /// Half-spectrum shape of a real-to-complex transform (last axis N/2+1).
  std::array<std::size_t, 3> half_shape3() const;
  std::size_t half_size() const;

  /// Position of a physical axis within shape3().
  int padded_axis(int axis) const { return 3 - dim_ + axis; }

  /// Signed integer wavenumber of FFT-ordered index j on an axis of length n,
  /// in -n/2+1 .. n/2.
  static long wavenumber(std::size_t j, std::size_t n) {
    return j <= n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
  }
  /// Angular wavenumber k*pi/X_i.
  double angular(int axis, long k) const;

  std::vector<int> dims() const;

  bool operator==(const Grid& other) const noexcept {
    return dim_ == other.dim_ && n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  int dim_ = 0;
  std::array<std::size_t, max_dim> n_{1, 1, 1};
  std::array<double, max_dim> half_width_{1.0, 1.0, 1.0};
  std::size_t size_ = 0;
};

/// Throws ShapeError unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace nch
