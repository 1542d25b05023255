#pragma once

#include "slabsym/boundary_conditions.hpp"
#include "slabsym/grid.hpp"
#include "slabsym/prescribed_h.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace slabsym {

enum class Damping { none, backtracking };

struct SolverSettings {
  double newton_tol = 1e-10;
  int max_iterations = 40;
  Damping damping = Damping::backtracking;
  int continuation_steps = 1;  // solve at H amplitudes 1/steps, 2/steps, ..., 1
  // pure-flux problems with height-independent H: fix the mean height and
  // solve for a constant shift of the equation
  std::optional<double> mean_height;
  std::optional<ScalarField> initial;

  // axisymmetric shooting
  double bracket_lo = 0.05;  // lower contact radius bracket
  double bracket_hi = 5.0;
  double ode_tol = 1e-12;
  int profile_samples = 513;

  void validate() const;
};

struct SolveDiagnostics {
  bool converged = false;
  int iterations = 0;
  int continuation_stages = 1;
  std::vector<double> residual_history;  // max-norm of all rows, per iterate
  double interior_residual = 0.0;        // |mc(u) - n H| over interior nodes
  double boundary_residual = 0.0;        // boundary-condition rows
  double ellipticity_k = 0.0;            // certified constant of the last Newton system
  double compatibility_shift = 0.0;      // only with mean_height

  nlohmann::json to_json() const;
};

/// Newton solve of  mc(u) = n H(x, u, grad u)  with u = g at the boundary foot
/// points (quadratic extrapolation along the inward normal).
/// The initial iterate is the discrete harmonic extension of g.
ScalarField solve_graph_dirichlet(std::shared_ptr<const DomainGrid> grid, const PrescribedH& profile,
                                  const std::function<double(const Vec2&)>& g, const SolverSettings& settings,
                                  SolveDiagnostics* diag = nullptr);

/// Newton solve with ContactAngle (gamma1 on the graph's boundary),
/// CurvatureFlux (plate 1) or RadialFlux data imposed at the boundary foot
/// points through local quadratic fits.
ScalarField solve_graph_flux(std::shared_ptr<const DomainGrid> grid, const PrescribedH& profile,
                             const BoundaryConditionSpec& bc, const SolverSettings& settings,
                             SolveDiagnostics* diag = nullptr);

/// Residual rows of the flux condition at every boundary node (aligned with
/// grid->boundary_nodes()).
std::vector<double> boundary_flux_residual(const ScalarField& u, const BoundaryConditionSpec& bc);

/// Curvature of the region boundary at the foot point of each boundary node
/// (aligned with grid->boundary_nodes()).
std::vector<double> boundary_curvature_at_feet(const DomainGrid& grid);

/// "x,y,u,tag" rows for every active node.
void write_field_csv(const ScalarField& u, const std::string& path);

}  // namespace slabsym
