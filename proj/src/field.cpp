#include "nch/field.hpp"

#include <algorithm>
#include <cmath>

#include "nch/error.hpp"

namespace nch {

namespace {

std::size_t reduce(long k, std::size_t n) {
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((k % m) + m) % m);
}

}  // namespace

Field::Field(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw ShapeError("field values do not match grid size");
}

Field Field::from_function(const Grid& grid,
                           const std::function<double(const std::array<double, 3>&)>& fn) {
  Field f(grid);
  const auto s = grid.shape3();
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::size_t idx = 0;
  for (std::size_t i = 0; i < s[0]; ++i) {
    for (std::size_t j = 0; j < s[1]; ++j) {
      for (std::size_t k = 0; k < s[2]; ++k, ++idx) {
        const std::array<std::size_t, 3> p{i, j, k};
        for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(a, p[grid.padded_axis(a)]);
        f.values_[idx] = fn(x);
      }
    }
  }
  return f;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

SpectralField::SpectralField(const Grid& grid) : grid_(grid), coeffs_(grid.size()) {}

std::size_t SpectralField::offset(const ModeIndex& k) const {
  const auto s = grid_.shape3();
  std::array<std::size_t, 3> p{0, 0, 0};
  for (int a = 0; a < grid_.dim(); ++a) {
    const int q = grid_.padded_axis(a);
    p[q] = reduce(k[a], s[q]);
  }
  return (p[0] * s[1] + p[1]) * s[2] + p[2];
}

ModeIndex SpectralField::mode(std::size_t off) const {
  const auto s = grid_.shape3();
  const std::array<std::size_t, 3> p{off / (s[1] * s[2]), (off / s[2]) % s[1], off % s[2]};
  ModeIndex k{0, 0, 0};
  for (int a = 0; a < grid_.dim(); ++a) {
    const int q = grid_.padded_axis(a);
    k[a] = Grid::wavenumber(p[q], s[q]);
  }
  return k;
}

Complex& SpectralField::at(const ModeIndex& k) { return coeffs_[offset(k)]; }
const Complex& SpectralField::at(const ModeIndex& k) const { return coeffs_[offset(k)]; }

double SpectralField::symmetry_defect() const {
  double defect = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    ModeIndex k = mode(i);
    for (auto& v : k) v = -v;
    defect = std::max(defect, std::abs(coeffs_[i] - std::conj(at(k))));
  }
  return defect;
}

Symbol::Symbol(const Grid& grid, double fill) : grid_(grid), values_(grid.half_size(), fill) {}

Symbol Symbol::from_modes(const Grid& grid, const std::function<double(const ModeIndex&)>& fn) {
  Symbol s(grid);
  for (std::size_t i = 0; i < s.values_.size(); ++i) s.values_[i] = fn(half_mode(grid, i));
  return s;
}

ModeIndex Symbol::mode(std::size_t half_offset) const { return half_mode(grid_, half_offset); }

double Symbol::at(const ModeIndex& k) const {
  const auto full = grid_.shape3();
  const auto half = grid_.half_shape3();
  // Fold onto the stored half: s(k) = s(-k).
  ModeIndex m = k;
  const int last = grid_.dim() - 1;
  const std::size_t n_last = full[2];
  long kl = static_cast<long>(reduce(m[last], n_last));
  if (static_cast<std::size_t>(kl) > n_last / 2) {
    for (int a = 0; a < grid_.dim(); ++a) m[a] = -m[a];
  }
  std::array<std::size_t, 3> p{0, 0, 0};
  for (int a = 0; a < grid_.dim(); ++a) {
    const int q = grid_.padded_axis(a);
    p[q] = reduce(m[a], full[q]);
  }
  return values_[(p[0] * half[1] + p[1]) * half[2] + p[2]];
}

double Symbol::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ModeIndex half_mode(const Grid& grid, std::size_t off) {
  const auto full = grid.shape3();
  const auto half = grid.half_shape3();
  const std::array<std::size_t, 3> p{off / (half[1] * half[2]), (off / half[2]) % half[1],
                                     off % half[2]};
  ModeIndex k{0, 0, 0};
  for (int a = 0; a < grid.dim(); ++a) {
    const int q = grid.padded_axis(a);
    k[a] = q == 2 ? static_cast<long>(p[q]) : Grid::wavenumber(p[q], full[q]);
  }
  return k;
}

}  // namespace nch
