#include "coe/field.hpp"

#include <cmath>
#include <ostream>

#include "coe/errors.hpp"
#include "coe/fft.hpp"
#include "coe/format.hpp"

namespace coe {

Grid::Grid(double half_width_, std::size_t n_) : half_width(half_width_), n(n_)
{
  if (!(half_width > 0.0)) {
    throw InvalidArgument("grid half width must be positive");
  }
  if (n < 2 || (n & (n - 1)) != 0) {
    throw InvalidArgument("grid point count must be a power of two >= 2");
  }
}

double Grid::xi(std::size_t bin) const
{
  const auto nn = static_cast<long long>(n);
  const auto b = static_cast<long long>(bin);
  const long long k = b < nn / 2 ? b : b - nn;
  return kPi * static_cast<double>(k) / half_width;
}

Field::Field(Grid g, std::size_t dim) : grid(g), values(CMatrix::Zero(static_cast<Eigen::Index>(g.n), static_cast<Eigen::Index>(dim)))
{
}

Field::Field(Grid g, CMatrix v) : grid(g), values(std::move(v))
{
  if (static_cast<std::size_t>(values.rows()) != grid.n) {
    throw InvalidArgument("field rows do not match the grid size");
  }
}

Field Field::from_function(const Grid& g, std::size_t dim, const std::function<Complex(double)>& f)
{
  Field out(g, dim);
  for (std::size_t i = 0; i < g.n; ++i) {
    const Complex value = f(g.x(i));
    out.values.row(static_cast<Eigen::Index>(i)).setConstant(value);
  }
  return out;
}

namespace {

void check_compatible(const Field& a, const Field& b)
{
  if (!(a.grid == b.grid) || a.values.cols() != b.values.cols()) {
    throw InvalidArgument("fields live on different grids or have different dimensions");
  }
}

} // namespace

Field& Field::operator+=(const Field& other)
{
  check_compatible(*this, other);
  values += other.values;
  return *this;
}

Field& Field::operator-=(const Field& other)
{
  check_compatible(*this, other);
  values -= other.values;
  return *this;
}

Field& Field::operator*=(Complex s)
{
  values *= s;
  return *this;
}

CMatrix to_spectrum(const Field& field)
{
  return fft::forward_columns(field.values);
}

Field from_spectrum(const Grid& grid, const CMatrix& spectrum)
{
  return Field(grid, fft::inverse_columns(spectrum));
}

Field apply_multiplier(const Field& field, const std::function<Complex(double)>& symbol)
{
  CMatrix spec = to_spectrum(field);
  for (std::size_t bin = 0; bin < field.grid.n; ++bin) {
    spec.row(static_cast<Eigen::Index>(bin)) *= symbol(field.grid.xi(bin));
  }
  return from_spectrum(field.grid, spec);
}

Field spectral_derivative(const Field& field, int k)
{
  if (k < 0) {
    throw InvalidArgument("derivative order must be non-negative");
  }
  if (k == 0) {
    return field;
  }
  CMatrix spec = to_spectrum(field);
  for (std::size_t bin = 0; bin < field.grid.n; ++bin) {
    Complex factor{1.0, 0.0};
    if (k % 2 == 1 && field.grid.is_nyquist(bin)) {
      factor = 0.0;
    } else {
      const Complex ixi{0.0, field.grid.xi(bin)};
      for (int j = 0; j < k; ++j) {
        factor *= ixi;
      }
    }
    spec.row(static_cast<Eigen::Index>(bin)) *= factor;
  }
  return from_spectrum(field.grid, spec);
}

Field apply_pointwise(const Field& field, const std::function<CVector(const CVector&)>& op)
{
  Field out = field;
  for (Eigen::Index i = 0; i < field.values.rows(); ++i) {
    const CVector row = field.values.row(i).transpose();
    out.values.row(i) = op(row).transpose();
  }
  return out;
}

void write_field_csv(std::ostream& out, const Field& field)
{
  out << "x";
  for (std::size_t d = 0; d < field.dim(); ++d) {
    out << ",re_" << d << ",im_" << d;
  }
  out << '\n';
  for (std::size_t i = 0; i < field.size(); ++i) {
    out << format_double(field.grid.x(i));
    for (std::size_t d = 0; d < field.dim(); ++d) {
      const Complex v = field.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
      out << ',' << format_double(v.real()) << ',' << format_double(v.imag());
    }
    out << '\n';
  }
}

void write_snapshots_csv(std::ostream& out, const std::vector<double>& times, const std::vector<Field>& fields)
{
  if (times.size() != fields.size()) {
    throw InvalidArgument("snapshot times and fields differ in length");
  }
  out << "t,x";
  const std::size_t dim = fields.empty() ? 0 : fields.front().dim();
  for (std::size_t d = 0; d < dim; ++d) {
    out << ",re_" << d << ",im_" << d;
  }
  out << '\n';
  for (std::size_t s = 0; s < fields.size(); ++s) {
    const Field& slice = fields[s];
    const std::string t = format_double(times[s]);
    for (std::size_t i = 0; i < slice.size(); ++i) {
      out << t << ',' << format_double(slice.grid.x(i));
      for (std::size_t d = 0; d < slice.dim(); ++d) {
        const Complex v = slice.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
        out << ',' << format_double(v.real()) << ',' << format_double(v.imag());
      }
      out << '\n';
    }
  }
}

void write_spacetime_csv(std::ostream& out, const SpaceTimeField& field)
{
  std::vector<double> times;
  for (std::size_t s = 0; s < field.slices.size(); ++s) {
    times.push_back(field.time(s));
  }
  write_snapshots_csv(out, times, field.slices);
}

} // namespace coe
