#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace mfg {

using Point = std::array<double, 2>;

// Uniform periodic grid on the unit torus, d in {1,2}.
// Scalars live on cell centers, vector fields on faces: component `a`
// of a face field at cell index c is the value on the face between
// cell c and its +a neighbor.
struct TorusGrid {
  int dim = 1;
  int n = 0;

  TorusGrid() = default;
  TorusGrid(int dim_, int n_);

  double h() const { return 1.0 / n; }
  double cell_volume() const;
  std::ptrdiff_t cells() const;
  std::ptrdiff_t faces() const { return dim * cells(); }

  int wrap(int i) const {
    i %= n;
    return i < 0 ? i + n : i;
  }
  std::ptrdiff_t index(int ix, int iy = 0) const {
    return dim == 1 ? wrap(ix) : wrap(ix) + std::ptrdiff_t(n) * wrap(iy);
  }
  // Cell reached from c by `by` steps along `axis`, periodic.
  std::ptrdiff_t shift(std::ptrdiff_t c, int axis, int by) const;

  Point cell_center(std::ptrdiff_t c) const;
  Point face_center(int axis, std::ptrdiff_t c) const;

  bool operator==(const TorusGrid&) const = default;
};

enum class FieldKind { CellScalar, FaceVector, NodeScalar };

struct Field {
  FieldKind kind = FieldKind::CellScalar;
  TorusGrid grid;
  std::vector<double> v;

  Field() = default;
  Field(FieldKind k, const TorusGrid& g, double fill = 0.0);

  static Field cell_scalar(const TorusGrid& g, double fill = 0.0) {
    return Field(FieldKind::CellScalar, g, fill);
  }
  static Field face_vector(const TorusGrid& g, double fill = 0.0) {
    return Field(FieldKind::FaceVector, g, fill);
  }
  static Field node_scalar(const TorusGrid& g, double fill = 0.0) {
    return Field(FieldKind::NodeScalar, g, fill);
  }

  std::ptrdiff_t size() const { return std::ptrdiff_t(v.size()); }
  double& operator[](std::ptrdiff_t i) { return v[i]; }
  double operator[](std::ptrdiff_t i) const { return v[i]; }

  // Face component accessors (FaceVector only).
  double& at_face(int axis, std::ptrdiff_t c) { return v[axis * grid.cells() + c]; }
  double at_face(int axis, std::ptrdiff_t c) const { return v[axis * grid.cells() + c]; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

// Throws std::invalid_argument unless both fields share kind and grid.
void require_same(const Field& a, const Field& b);

// Forward difference per axis; exact negative adjoint of discrete_divergence
// under the h^d-weighted cell inner product.
Field discrete_gradient(const Field& phi);
Field discrete_divergence(const Field& w);

double integrate(const Field& cell);
Field mean_zero(const Field& cell);
double sobolev_h1_seminorm(const Field& cell);
double sobolev_h1_norm(const Field& cell);

// h^d-weighted inner product and norms (cell or face fields).
double inner(const Field& a, const Field& b);
double l2_norm(const Field& a);
double l1_norm(const Field& a);
double linf_norm(const Field& a);

}  // namespace mfg
