#pragma once

#include "mfg/grid.hpp"

// Plain serial stencils written index-by-index. They are the reference
// the parallel kernels are tested and benchmarked against.
namespace mfg::ref {

Field gradient(const Field& phi);
Field divergence(const Field& w);
double integrate(const Field& cell);

}  // namespace mfg::ref
