#include "mfg/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "mfg/parallel.hpp"

namespace mfg {

TorusGrid::TorusGrid(int dim_, int n_) : dim(dim_), n(n_) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("TorusGrid: dim must be 1 or 2");
  if (n < 4) throw std::invalid_argument("TorusGrid: need n >= 4 cells per axis");
}

double TorusGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= h();
  return v;
}

std::ptrdiff_t TorusGrid::cells() const {
  std::ptrdiff_t c = 1;
  for (int a = 0; a < dim; ++a) c *= n;
  return c;
}

std::ptrdiff_t TorusGrid::shift(std::ptrdiff_t c, int axis, int by) const {
  if (dim == 1) return wrap(int(c) + by);
  int ix = int(c % n), iy = int(c / n);
  if (axis == 0) ix = wrap(ix + by);
  else iy = wrap(iy + by);
  return ix + std::ptrdiff_t(n) * iy;
}

Point TorusGrid::cell_center(std::ptrdiff_t c) const {
  if (dim == 1) return {(double(c) + 0.5) * h(), 0.0};
  return {(double(c % n) + 0.5) * h(), (double(c / n) + 0.5) * h()};
}

Point TorusGrid::face_center(int axis, std::ptrdiff_t c) const {
  Point p = cell_center(c);
  p[axis] += 0.5 * h();
  if (p[axis] >= 1.0) p[axis] -= 1.0;
  return p;
}

Field::Field(FieldKind k, const TorusGrid& g, double fill) : kind(k), grid(g) {
  std::size_t len = 0;
  switch (k) {
    case FieldKind::CellScalar:
    case FieldKind::NodeScalar: len = std::size_t(g.cells()); break;
    case FieldKind::FaceVector: len = std::size_t(g.faces()); break;
  }
  v.assign(len, fill);
}

void require_same(const Field& a, const Field& b) {
  if (a.kind != b.kind || !(a.grid == b.grid))
    throw std::invalid_argument("Field: kind/grid mismatch");
}

Field& Field::operator+=(const Field& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& x : v) x *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field discrete_gradient(const Field& phi) {
  if (phi.kind != FieldKind::CellScalar)
    throw std::invalid_argument("discrete_gradient: expects a cell scalar");
  const TorusGrid& g = phi.grid;
  Field out = Field::face_vector(g);
  const std::ptrdiff_t nc = g.cells();
  const double inv_h = 1.0 / g.h();
  for (int a = 0; a < g.dim; ++a) {
    double* o = out.v.data() + a * nc;
    par_for(nc, [&, a, o](std::ptrdiff_t c) {
      o[c] = (phi[g.shift(c, a, 1)] - phi[c]) * inv_h;
    });
  }
  return out;
}

Field discrete_divergence(const Field& w) {
  if (w.kind != FieldKind::FaceVector)
    throw std::invalid_argument("discrete_divergence: expects a face vector");
  const TorusGrid& g = w.grid;
  Field out = Field::cell_scalar(g);
  const std::ptrdiff_t nc = g.cells();
  const double inv_h = 1.0 / g.h();
  for (int a = 0; a < g.dim; ++a) {
    const double* wa = w.v.data() + a * nc;
    par_for(nc, [&, a, wa](std::ptrdiff_t c) {
      out[c] += (wa[c] - wa[g.shift(c, a, -1)]) * inv_h;
    });
  }
  return out;
}

double integrate(const Field& cell) {
  if (cell.kind != FieldKind::CellScalar)
    throw std::invalid_argument("integrate: expects a cell scalar");
  double s = 0.0;
  for (double x : cell.v) s += x;
  return s * cell.grid.cell_volume();
}

Field mean_zero(const Field& cell) {
  Field out = cell;
  const double mean = integrate(cell);
  for (double& x : out.v) x -= mean;
  return out;
}

double sobolev_h1_seminorm(const Field& cell) {
  Field gm = discrete_gradient(cell);
  double s = 0.0;
  for (double x : gm.v) s += x * x;
  return std::sqrt(s * cell.grid.cell_volume());
}

double sobolev_h1_norm(const Field& cell) {
  const double semi = sobolev_h1_seminorm(cell);
  const double l2 = l2_norm(cell);
  return std::sqrt(semi * semi + l2 * l2);
}

double inner(const Field& a, const Field& b) {
  require_same(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
  return s * a.grid.cell_volume();
}

double l2_norm(const Field& a) {
  double s = 0.0;
  for (double x : a.v) s += x * x;
  return std::sqrt(s * a.grid.cell_volume());
}

double l1_norm(const Field& a) {
  double s = 0.0;
  for (double x : a.v) s += std::fabs(x);
  return s * a.grid.cell_volume();
}

double linf_norm(const Field& a) {
  double s = 0.0;
  for (double x : a.v) s = std::max(s, std::fabs(x));
  return s;
}

}  // namespace mfg
