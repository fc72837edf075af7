#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "coe/types.hpp"

namespace coe {

/// Periodic truncation [-X, X) of the real line with n (power of two) points.
struct Grid
{
  double half_width = 1.0;
  std::size_t n = 2;

  Grid() = default;
  Grid(double half_width, std::size_t n);

  double spacing() const { return 2.0 * half_width / static_cast<double>(n); }
  double x(std::size_t i) const { return -half_width + spacing() * static_cast<double>(i); }
  /// Wavenumber of DFT bin `bin` (standard FFT order): pi k / X with
  /// k = bin for bin < n/2 and k = bin - n otherwise.
  double xi(std::size_t bin) const;
  bool is_nyquist(std::size_t bin) const { return bin == n / 2; }
  bool operator==(const Grid& other) const = default;
};

/// E-valued samples on a Grid: values is n x dim, one row per grid point.
struct Field
{
  Grid grid;
  CMatrix values;

  Field() = default;
  Field(Grid g, std::size_t dim);
  Field(Grid g, CMatrix v);

  static Field zeros(const Grid& g, std::size_t dim) { return Field(g, dim); }
  /// Same profile in every component.
  static Field from_function(const Grid& g, std::size_t dim, const std::function<Complex(double)>& f);

  std::size_t dim() const { return static_cast<std::size_t>(values.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(Complex s);
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Complex s, Field a) { return a *= s; }
};

/// Samples u(t_i, x) on a uniform time grid t_i = t0 + i dt.
struct SpaceTimeField
{
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<Field> slices;

  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

/// DFT of every component (unnormalized, FFT bin order).
CMatrix to_spectrum(const Field& field);
Field from_spectrum(const Grid& grid, const CMatrix& spectrum);

/// Applies a scalar multiplier m(xi) to every component.
Field apply_multiplier(const Field& field, const std::function<Complex(double)>& symbol);

/// Spectral k-th derivative; the Nyquist bin is dropped for odd k.
Field spectral_derivative(const Field& field, int k);

/// Applies a dim x dim operator pointwise: (A u)(x_i) = A u_i.
Field apply_pointwise(const Field& field, const std::function<CVector(const CVector&)>& op);

/// CSV with header x,re_0,im_0,re_1,im_1,... and 17 significant digits.
void write_field_csv(std::ostream& out, const Field& field);

/// CSV with header t,x,re_0,im_0,... one row per (t, x) sample.
void write_spacetime_csv(std::ostream& out, const SpaceTimeField& field);
void write_snapshots_csv(std::ostream& out, const std::vector<double>& times, const std::vector<Field>& fields);

} // namespace coe
