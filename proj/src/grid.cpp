#include "nch/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nch/error.hpp"

namespace nch {

Grid::Grid(int dim, std::array<std::size_t, max_dim> n, std::array<double, max_dim> half_width)
    : dim_(dim), n_(n), half_width_(half_width) {
  if (dim < 1 || dim > max_dim) {
    throw ValidationError("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }
  size_ = 1;
  for (int a = 0; a < max_dim; ++a) {
    if (a >= dim) {
      n_[a] = 1;
      half_width_[a] = 1.0;
      continue;
    }
    if (n_[a] < 4 || n_[a] % 2 != 0) {
      throw ValidationError("grid axis " + std::to_string(a) +
                            ": point count must be even and >= 4, got " + std::to_string(n_[a]));
    }
    if (!(half_width_[a] > 0.0) || !std::isfinite(half_width_[a])) {
      throw ValidationError("grid axis " + std::to_string(a) + ": half width must be positive");
    }
    size_ *= n_[a];
  }
}

Grid Grid::uniform(int dim, std::size_t n, double half_width) {
  return Grid(dim, {n, n, n}, {half_width, half_width, half_width});
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= spacing(a);
  return v;
}

double Grid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= 2.0 * half_width_[a];
  return v;
}

std::array<std::size_t, 3> Grid::shape3() const {
  std::array<std::size_t, 3> s{1, 1, 1};
  for (int a = 0; a < dim_; ++a) s[padded_axis(a)] = n_[a];
  return s;
}

std::array<std::size_t, 3> Grid::half_shape3() const {
  auto s = shape3();
  s[2] = s[2] / 2 + 1;
  return s;
}

std::size_t Grid::half_size() const {
  const auto s = half_shape3();
  return s[0] * s[1] * s[2];
}

double Grid::angular(int axis, long k) const {
  return static_cast<double>(k) * std::numbers::pi / half_width_[axis];
}

std::vector<int> Grid::dims() const {
  std::vector<int> d;
  for (int a = 0; a < dim_; ++a) d.push_back(static_cast<int>(n_[a]));
  return d;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw ShapeError(std::string(what) + ": grids differ");
}

}  // namespace nch
