#pragma once

#include "slabsym/linearization.hpp"

#include <vector>

namespace slabsym {

struct MonotoneSolve {
  ScalarField w;
  bool m_matrix = true;  // every row passed the sign test
  int upwinded = 0;      // first-order terms switched to one-sided differences
};

/// Solves L(w) = rhs on interior nodes with w = boundary_data on boundary
/// nodes, using a positive-type stencil: the mixed derivative is taken along
/// the diagonal matching sign(A^12), and first-order terms are upwinded when
/// the centred form would give a negative neighbour weight. When
/// A^11, A^22 >= |A^12| and C <= 0 the system matrix is an M-matrix.
MonotoneSolve solve_monotone_dirichlet(const EllipticOperatorField& op, const ScalarField& boundary_data,
                                       const std::vector<double>& rhs = {});

/// Discrete harmonic extension of the boundary values of g.
ScalarField harmonic_extension(const ScalarField& g);

}  // namespace slabsym
