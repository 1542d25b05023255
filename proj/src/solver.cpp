#include "slabsym/solver.hpp"

#include "slabsym/errors.hpp"
#include "slabsym/linearization.hpp"
#include "slabsym/mean_curvature.hpp"
#include "slabsym/monotone.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace slabsym {

namespace {

constexpr double kDim = 2.0;

enum class RowKind { dirichlet, contact_angle, flux };

struct BoundaryRow {
  RowKind kind = RowKind::dirichlet;
  FitStencil fit;
  Vec2 eta = Vec2::Zero();
  double target = 0.0;  // g, cos(gamma) or prescribed du/deta
};

struct Problem {
  std::shared_ptr<const DomainGrid> grid;
  std::vector<BoundaryRow> rows;  // aligned with boundary_nodes()
  bool shift = false;             // mean-height normalisation active
  double mean_height = 0.0;
};

double boundary_row_value(const BoundaryRow& r, const ScalarField& u) {
  switch (r.kind) {
    case RowKind::dirichlet:
      return r.fit.eval_value(u) - r.target;
    case RowKind::contact_angle: {
      const Vec2 p = r.fit.eval_gradient(u);
      return p.dot(r.eta) / std::sqrt(1.0 + p.squaredNorm()) - r.target;
    }
    case RowKind::flux:
      return r.fit.eval_gradient(u).dot(r.eta) - r.target;
  }
  return 0.0;
}

struct Residual {
  Eigen::VectorXd F;
  double interior = 0.0;
  double boundary = 0.0;
};

// Unknowns: active nodes, then the shift when present. Rows: interior nodes
// (in active order), boundary nodes, then the normalisation row.
Residual residual(const Problem& pb, const PrescribedH& profile, const ScalarField& u, double shift) {
  const DomainGrid& g = *pb.grid;
  const int N = g.active_count();
  Residual r;
  r.F = Eigen::VectorXd::Zero(N + (pb.shift ? 1 : 0));
  for (int k : g.interior_nodes()) {
    const NodeDifferentials d = differentials(u, k);
    const HValue hv = profile.eval(g.position(k), u.values[k], d.gradient);
    r.F[k] = mc_from_derivatives(d.gradient, d.hessian) - kDim * hv.H - shift;
    r.interior = std::max(r.interior, std::abs(r.F[k]));
  }
  const auto& bnodes = g.boundary_nodes();
  for (std::size_t m = 0; m < bnodes.size(); ++m) {
    r.F[bnodes[m]] = boundary_row_value(pb.rows[m], u);
    r.boundary = std::max(r.boundary, std::abs(r.F[bnodes[m]]));
  }
  if (pb.shift) {
    double mean = 0.0;
    for (double v : u.values) mean += v;
    r.F[N] = mean / N - pb.mean_height;
  }
  return r;
}

Eigen::SparseMatrix<double> jacobian(const Problem& pb, const PrescribedH& profile, const ScalarField& u,
                                     double* k_out) {
  const DomainGrid& g = *pb.grid;
  const int N = g.active_count();
  const int M = N + (pb.shift ? 1 : 0);
  const double h = g.spacing();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(N) * 10);
  const EllipticOperatorField op = newton_operator(u, profile);
  if (k_out) *k_out = op.k;
  const auto& interior = g.interior_nodes();
  for (std::size_t m = 0; m < interior.size(); ++m) {
    const int k = interior[m];
    const NodeCoefficients& c = op.nodes[m];
    const double a11 = c.A(0, 0), a22 = c.A(1, 1), a12 = 0.5 * (c.A(0, 1) + c.A(1, 0));
    auto add = [&](int di, int dj, double w) { trip.emplace_back(k, g.neighbor(k, di, dj), w); };
    add(1, 0, a11 / (h * h) + c.B.x() / (2 * h));
    add(-1, 0, a11 / (h * h) - c.B.x() / (2 * h));
    add(0, 1, a22 / (h * h) + c.B.y() / (2 * h));
    add(0, -1, a22 / (h * h) - c.B.y() / (2 * h));
    add(1, 1, a12 / (2 * h * h));
    add(-1, -1, a12 / (2 * h * h));
    add(1, -1, -a12 / (2 * h * h));
    add(-1, 1, -a12 / (2 * h * h));
    trip.emplace_back(k, k, -2 * a11 / (h * h) - 2 * a22 / (h * h) + c.C);
    if (pb.shift) trip.emplace_back(k, N, -1.0);
  }
  const auto& bnodes = g.boundary_nodes();
  for (std::size_t m = 0; m < bnodes.size(); ++m) {
    const int b = bnodes[m];
    const BoundaryRow& r = pb.rows[m];
    if (r.kind == RowKind::dirichlet) {
      for (std::size_t q = 0; q < r.fit.nodes.size(); ++q) trip.emplace_back(b, r.fit.nodes[q], r.fit.value[q]);
      continue;
    }
    Vec2 dir = r.eta;
    if (r.kind == RowKind::contact_angle) {
      const Vec2 p = r.fit.eval_gradient(u);
      const double W2 = 1.0 + p.squaredNorm();
      const double W = std::sqrt(W2);
      dir = r.eta / W - p.dot(r.eta) * p / (W2 * W);
    }
    for (std::size_t q = 0; q < r.fit.nodes.size(); ++q) trip.emplace_back(b, r.fit.nodes[q], dir.dot(r.fit.gradient[q]));
  }
  if (pb.shift)
    for (int k = 0; k < N; ++k) trip.emplace_back(N, k, 1.0 / N);
  Eigen::SparseMatrix<double> J(M, M);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

double safe_norm(const Problem& pb, const PrescribedH& profile, const ScalarField& u, double shift) {
  try {
    const Residual r = residual(pb, profile, u, shift);
    const double v = r.F.lpNorm<Eigen::Infinity>();
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  } catch (const RangeError&) {
    return std::numeric_limits<double>::infinity();
  }
}

ScalarField newton(const Problem& pb, const PrescribedH& full_profile, ScalarField u, const SolverSettings& s,
                   SolveDiagnostics& diag) {
  const int N = pb.grid->active_count();
  double shift = 0.0;
  const int stages = std::max(1, s.continuation_steps);
  diag.continuation_stages = stages;
  diag.residual_history.clear();
  diag.iterations = 0;
  for (int stage = 1; stage <= stages; ++stage) {
    const PrescribedH profile = stages == 1 ? full_profile : full_profile.scaled(double(stage) / stages);
    Residual r = residual(pb, profile, u, shift);
    double norm = r.F.lpNorm<Eigen::Infinity>();
    diag.residual_history.push_back(norm);
    int it = 0;
    while (norm > s.newton_tol) {
      if (it >= s.max_iterations || !std::isfinite(norm))
        throw NonConvergence("newton: no convergence after " + std::to_string(it) + " iterations (residual " +
                                 std::to_string(norm) + ")",
                             diag.residual_history);
      const Eigen::SparseMatrix<double> J = jacobian(pb, profile, u, &diag.ellipticity_k);
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(J);
      if (lu.info() != Eigen::Success)
        throw NonConvergence("newton: singular Jacobian", diag.residual_history);
      const Eigen::VectorXd delta = lu.solve(-r.F);
      double t = 1.0;
      ScalarField trial = u;
      double trial_shift = shift;
      double trial_norm = 0.0;
      for (;;) {
        for (int k = 0; k < N; ++k) trial.values[k] = u.values[k] + t * delta[k];
        if (pb.shift) trial_shift = shift + t * delta[N];
        trial_norm = safe_norm(pb, profile, trial, trial_shift);
        if (s.damping == Damping::none || trial_norm <= (1.0 - 1e-4 * t) * norm || t < 1.0 / 1024) break;
        t *= 0.5;
      }
      if (!std::isfinite(trial_norm))
        throw NonConvergence("newton: iterate left the domain of H", diag.residual_history);
      u = std::move(trial);
      shift = trial_shift;
      r = residual(pb, profile, u, shift);
      norm = r.F.lpNorm<Eigen::Infinity>();
      diag.residual_history.push_back(norm);
      ++it;
      ++diag.iterations;
    }
    diag.interior_residual = r.interior;
    diag.boundary_residual = r.boundary;
  }
  diag.converged = true;
  diag.compatibility_shift = shift;
  return u;
}

double h0_at(const std::vector<Vec2>& poly, const std::vector<double>& kappa, const Vec2& x) {
  const std::size_t n = poly.size();
  double best = std::numeric_limits<double>::infinity();
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const Vec2 e = b - a;
    const double t = std::clamp((x - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    const double d = (a + t * e - x).squaredNorm();
    if (d < best) {
      best = d;
      value = (1 - t) * kappa[i] + t * kappa[(i + 1) % n];
    }
  }
  return value;
}

// u at the foot by quadratic extrapolation along the inward normal from the
// node and two fitted values further in.
FitStencil dirichlet_stencil(const DomainGrid& g, int b, const BoundaryFoot& foot) {
  const double h = g.spacing();
  const Vec2 xb = g.position(b);
  const double lam = (xb - foot.point).norm() / h;
  FitStencil st;
  st.at = foot.point;
  st.nodes = {b};
  st.value = {(1 + lam) * (2 + lam) / 2};
  if (lam < 1e-12) {
    st.value = {1.0};
    return st;
  }
  const double weight[2] = {-lam * (lam + 2), lam * (lam + 1) / 2};
  for (int s = 1; s <= 2; ++s) {
    const Vec2 q = xb + s * h * foot.inward_normal;
    const int k = g.nearest_active(q);
    if (k < 0) throw RankDeficient("dirichlet row: no active node along the inward normal");
    const FitStencil f = make_fit(g, k, q);
    for (std::size_t r = 0; r < f.nodes.size(); ++r) {
      st.nodes.push_back(f.nodes[r]);
      st.value.push_back(weight[s - 1] * f.value[r]);
    }
  }
  return st;
}

Problem make_problem(std::shared_ptr<const DomainGrid> grid, const BoundaryConditionSpec& bc) {
  Problem pb;
  pb.grid = grid;
  const DomainGrid& g = *grid;
  const auto& bnodes = g.boundary_nodes();
  pb.rows.resize(bnodes.size());
  std::vector<double> H0;
  if (std::holds_alternative<CurvatureFlux>(bc)) H0 = boundary_curvature_at_feet(g);
  for (std::size_t m = 0; m < bnodes.size(); ++m) {
    const int b = bnodes[m];
    BoundaryRow& row = pb.rows[m];
    const BoundaryFoot& foot = g.foot(b);
    row.eta = foot.inward_normal;
    const bool dirichlet = std::holds_alternative<Dirichlet>(bc) || std::holds_alternative<FixedBoundary>(bc);
    row.fit = dirichlet ? dirichlet_stencil(g, b, foot) : make_fit(g, b, foot.point);
    if (const auto* d = std::get_if<Dirichlet>(&bc)) {
      row.kind = RowKind::dirichlet;
      row.target = d->g(foot.point);
    } else if (const auto* f = std::get_if<FixedBoundary>(&bc)) {
      row.kind = RowKind::dirichlet;
      row.target = f->height;
    } else if (const auto* c = std::get_if<ContactAngle>(&bc)) {
      row.kind = RowKind::contact_angle;
      row.target = std::cos(c->gamma1);
    } else if (const auto* cf = std::get_if<CurvatureFlux>(&bc)) {
      row.kind = RowKind::flux;
      row.target = cf->h[0](H0[m]);
    } else if (const auto* rf = std::get_if<RadialFlux>(&bc)) {
      row.kind = RowKind::flux;
      row.target = -rf->c * (foot.point - rf->origin).norm();
    }
  }
  return pb;
}

bool height_independent(const PrescribedH& p) {
  switch (p.kind()) {
    case PrescribedH::Kind::constant:
      return true;
    case PrescribedH::Kind::affine:
      return p.slope() == 0.0;
    default:
      return false;
  }
}

}  // namespace

void SolverSettings::validate() const {
  if (!(newton_tol > 0.0)) throw InvalidInput("solver settings: newton_tol must be positive");
  if (max_iterations < 1) throw InvalidInput("solver settings: max_iterations must be >= 1");
  if (continuation_steps < 1) throw InvalidInput("solver settings: continuation_steps must be >= 1");
  if (!(bracket_lo > 0.0 && bracket_lo < bracket_hi)) throw InvalidInput("solver settings: need 0 < bracket_lo < bracket_hi");
  if (!(ode_tol > 0.0)) throw InvalidInput("solver settings: ode_tol must be positive");
  if (profile_samples < 3) throw InvalidInput("solver settings: profile_samples must be >= 3");
}

nlohmann::json SolveDiagnostics::to_json() const {
  return {{"converged", converged},
          {"iterations", iterations},
          {"continuation_stages", continuation_stages},
          {"residual_history", residual_history},
          {"interior_residual", interior_residual},
          {"boundary_residual", boundary_residual},
          {"ellipticity_k", ellipticity_k},
          {"compatibility_shift", compatibility_shift}};
}

std::vector<double> boundary_curvature_at_feet(const DomainGrid& g) {
  BoundaryCurve curve;
  curve.vertices = g.region().boundary_polyline(1024);
  const std::vector<double> kappa = boundary_mean_curvature(curve);
  std::vector<double> out;
  out.reserve(g.boundary_nodes().size());
  for (int b : g.boundary_nodes()) out.push_back(h0_at(curve.vertices, kappa, g.foot(b).point));
  return out;
}

ScalarField solve_graph_dirichlet(std::shared_ptr<const DomainGrid> grid, const PrescribedH& profile,
                                  const std::function<double(const Vec2&)>& g, const SolverSettings& settings,
                                  SolveDiagnostics* diag) {
  settings.validate();
  if (!grid) throw InvalidInput("dirichlet solve: null grid");
  if (!g) throw InvalidInput("dirichlet solve: boundary data missing");
  const Problem pb = make_problem(grid, Dirichlet{g});
  ScalarField g0 = ScalarField::constant(grid, 0.0);
  const auto& bnodes = grid->boundary_nodes();
  for (std::size_t m = 0; m < bnodes.size(); ++m) {
    g0.values[bnodes[m]] = pb.rows[m].target;
    if (!std::isfinite(pb.rows[m].target)) throw InvalidInput("dirichlet solve: boundary data not finite");
  }
  ScalarField u0 = settings.initial ? *settings.initial : harmonic_extension(g0);
  require_same_grid(u0, g0);
  for (int b : bnodes) u0.values[b] = g0.values[b];
  SolveDiagnostics local;
  ScalarField u = newton(pb, profile, std::move(u0), settings, diag ? *diag : local);
  return u;
}

ScalarField solve_graph_flux(std::shared_ptr<const DomainGrid> grid, const PrescribedH& profile,
                             const BoundaryConditionSpec& bc, const SolverSettings& settings,
                             SolveDiagnostics* diag) {
  settings.validate();
  if (!grid) throw InvalidInput("flux solve: null grid");
  validate(bc);
  if (!(std::holds_alternative<ContactAngle>(bc) || std::holds_alternative<CurvatureFlux>(bc) ||
        std::holds_alternative<RadialFlux>(bc)))
    throw InvalidInput("flux solve: boundary condition must be contact_angle, curvature_flux or radial_flux");
  Problem pb = make_problem(grid, bc);
  if (height_independent(profile)) {
    if (!settings.mean_height)
      throw IncompatibleFlux("flux solve: H does not depend on the height and no mean-height normalisation was given");
    pb.shift = true;
    pb.mean_height = *settings.mean_height;
  }
  double level = settings.mean_height.value_or(0.0);
  if (profile.kind() == PrescribedH::Kind::affine && profile.slope() != 0.0) level = -profile.H0() / profile.slope();
  ScalarField u0 = settings.initial ? *settings.initial : ScalarField::constant(grid, level);
  if (u0.grid != grid) throw GridMismatch("flux solve: initial iterate on another grid");
  SolveDiagnostics local;
  return newton(pb, profile, std::move(u0), settings, diag ? *diag : local);
}

std::vector<double> boundary_flux_residual(const ScalarField& u, const BoundaryConditionSpec& bc) {
  const Problem pb = make_problem(u.grid, bc);
  const auto& bnodes = u.grid->boundary_nodes();
  std::vector<double> out(bnodes.size());
  for (std::size_t m = 0; m < bnodes.size(); ++m) out[m] = boundary_row_value(pb.rows[m], u);
  return out;
}

void write_field_csv(const ScalarField& u, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << "x,y,u,tag\n";
  os.precision(17);
  const DomainGrid& g = *u.grid;
  for (int k = 0; k < g.active_count(); ++k) {
    const Vec2 p = g.position(k);
    os << p.x() << ',' << p.y() << ',' << u.values[k] << ',' << (g.tag_of(k) == NodeTag::interior ? "interior" : "boundary")
       << '\n';
  }
}

}  // namespace slabsym
