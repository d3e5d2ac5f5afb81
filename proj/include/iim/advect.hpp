#pragma once

#include "iim/bc.hpp"
#include "iim/operators.hpp"

namespace iim {

// Upwind PPM approximation of u.grad(u) at the velocity faces. Ghost layers
// must be filled. Reduces exactly to zero for uniform velocity.
FacePair advect(const StaggeredState& state, const GridSpec& grid);

} // namespace iim
