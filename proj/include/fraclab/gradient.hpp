#pragma once

#include "fraclab/grid.hpp"

namespace fraclab {

/// Discrete gradient: central differences at interior-interior nodes,
/// one-sided differences against the zero boundary value at the two nodes
/// adjacent to ∂Ω.
ScalarField gradient(const ScalarField& u);

}  // namespace fraclab
