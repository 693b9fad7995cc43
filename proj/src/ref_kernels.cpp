#include "mfg/ref_kernels.hpp"

#include <stdexcept>

namespace mfg::ref {

Field gradient(const Field& phi) {
  if (phi.kind != FieldKind::CellScalar) throw std::invalid_argument("ref::gradient: cell scalar");
  const TorusGrid& g = phi.grid;
  const int n = g.n;
  Field out = Field::face_vector(g);
  if (g.dim == 1) {
    for (int i = 0; i < n; ++i) out.v[i] = (phi.v[(i + 1) % n] - phi.v[i]) * n;
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::ptrdiff_t c = i + std::ptrdiff_t(n) * j;
        out.at_face(0, c) = (phi.v[(i + 1) % n + std::ptrdiff_t(n) * j] - phi.v[c]) * n;
        out.at_face(1, c) = (phi.v[i + std::ptrdiff_t(n) * ((j + 1) % n)] - phi.v[c]) * n;
      }
  }
  return out;
}

Field divergence(const Field& w) {
  if (w.kind != FieldKind::FaceVector) throw std::invalid_argument("ref::divergence: face vector");
  const TorusGrid& g = w.grid;
  const int n = g.n;
  Field out = Field::cell_scalar(g);
  if (g.dim == 1) {
    for (int i = 0; i < n; ++i) out.v[i] = (w.v[i] - w.v[(i + n - 1) % n]) * n;
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::ptrdiff_t c = i + std::ptrdiff_t(n) * j;
        const std::ptrdiff_t cl = (i + n - 1) % n + std::ptrdiff_t(n) * j;
        const std::ptrdiff_t cd = i + std::ptrdiff_t(n) * ((j + n - 1) % n);
        out.v[c] = (w.at_face(0, c) - w.at_face(0, cl)) * n + (w.at_face(1, c) - w.at_face(1, cd)) * n;
      }
  }
  return out;
}

double integrate(const Field& cell) {
  double s = 0.0;
  for (double x : cell.v) s += x;
  return s * cell.grid.cell_volume();
}

}  // namespace mfg::ref
