#include "slabsym/profile.hpp"

#include "slabsym/errors.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>

namespace slabsym {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 3>;  // x, phi, s as functions of z

struct Meridian {
  const PrescribedH& profile;
  void operator()(const State& y, State& dy, double z) const {
    const double x = y[0], phi = y[1];
    const double sp = std::sin(phi);
    if (!(x > 1e-12)) throw TopologyChange("profile reaches the axis");
    if (!(sp > 1e-9)) throw TopologyChange("profile turns horizontal between the plates");
    dy[0] = std::cos(phi) / sp;
    dy[1] = (2.0 * profile(z) - sp / x) / sp;
    dy[2] = 1.0 / sp;
  }
};

void check_angles(double g1, double g2) {
  for (double g : {g1, g2})
    if (!(g > 0.0 && g < std::numbers::pi)) throw InvalidInput("profile: contact angles must lie in (0, pi)");
}

}  // namespace

void ProfileCurve::validate() const {
  const std::size_t n = s.size();
  if (n < 2 || x.size() != n || z.size() != n || phi.size() != n) throw InvalidInput("profile curve: inconsistent sample arrays");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(x[k] > 0.0)) throw InvalidInput("profile curve: x must stay positive");
    if (k > 0 && !(z[k] > z[k - 1])) throw InvalidInput("profile curve: z must increase along the meridian");
    if (k > 0 && !(s[k] > s[k - 1])) throw InvalidInput("profile curve: arclength must increase");
  }
}

double profile_mismatch(const Slab& slab, const PrescribedH& profile, double gamma1, double gamma2, double r0,
                        double ode_tol) {
  State y{r0, std::numbers::pi - gamma1, 0.0};
  const double d = slab.thickness();
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(ode_tol, ode_tol), Meridian{profile}, y,
                          0.0, d, d / 64);
  return y[1] - gamma2;
}

ProfileCurve solve_axisymmetric_profile(const Slab& slab, const PrescribedH& profile, double gamma1, double gamma2,
                                        const SolverSettings& settings) {
  slab.validate();
  settings.validate();
  check_angles(gamma1, gamma2);
  if (profile.depends_on_gradient()) throw UnsupportedProfile("profile: H must depend on the height only");
  const double d = slab.thickness();
  auto f = [&](double r0) { return profile_mismatch(slab, profile, gamma1, gamma2, r0, settings.ode_tol); };

  // scan for the first sign change, skipping radii whose meridian breaks down
  constexpr int scan = 64;
  const double lo = settings.bracket_lo, hi = settings.bracket_hi;
  double a = 0.0, fa = 0.0, b = 0.0, fb = 0.0;
  bool have_prev = false, found = false, any_ok = false;
  double prev_r = 0.0, prev_f = 0.0;
  for (int k = 0; k <= scan && !found; ++k) {
    const double r = lo * std::pow(hi / lo, double(k) / scan);
    double v;
    try {
      v = f(r);
    } catch (const TopologyChange&) {
      have_prev = false;
      continue;
    }
    any_ok = true;
    if (v == 0.0) {
      a = b = r;
      fa = fb = 0.0;
      found = true;
      break;
    }
    if (have_prev && (prev_f < 0) != (v < 0)) {
      a = prev_r, fa = prev_f, b = r, fb = v;
      found = true;
    }
    prev_r = r, prev_f = v, have_prev = true;
  }
  if (!any_ok) throw TopologyChange("profile: every radius in the bracket leaves the graph-over-z regime");
  if (!found) throw NoSolutionInBracket("profile: upper-angle mismatch has no sign change in the bracket");

  double r0 = a;
  if (a != b) {
    boost::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
    r0 = 0.5 * (root.first + root.second);
  }

  ProfileCurve c;
  const int n = settings.profile_samples;
  State y{r0, std::numbers::pi - gamma1, 0.0};
  std::vector<double> zs(n);
  for (int k = 0; k < n; ++k) zs[k] = d * k / (n - 1);
  ode::integrate_times(ode::make_dense_output(settings.ode_tol, settings.ode_tol, ode::runge_kutta_dopri5<State>()),
                       Meridian{profile}, y, zs.begin(), zs.end(), d / 64, [&](const State& st, double z) {
                         c.z.push_back(z);
                         c.x.push_back(st[0]);
                         c.phi.push_back(st[1]);
                         c.s.push_back(st[2]);
                       });
  c.lower = {c.x.front(), std::numbers::pi - c.phi.front()};
  c.upper = {c.x.back(), c.phi.back()};
  c.shooting_residual = c.phi.back() - gamma2;
  if (!(std::abs(c.shooting_residual) <= 1e-8))
    throw NonConvergence("profile: shooting residual " + std::to_string(c.shooting_residual) + " above 1e-8",
                         {c.shooting_residual});
  c.validate();
  return c;
}

SurfaceMesh revolve_profile(const ProfileCurve& curve, const Slab& slab, int segments, const Vec3& axis_point) {
  curve.validate();
  if (segments < 3) throw InvalidInput("revolve: need at least 3 segments");
  const Vec3 n = slab.axis_normal.normalized();
  const auto [e1, e2] = slab.plate_frame();
  const Vec3 base = axis_point - axis_point.dot(n) * n + slab.offset_lo * n;
  const int rings = static_cast<int>(curve.size());
  return tube_mesh(
      rings, segments,
      [&](int r, int s) {
        const double t = 2.0 * std::numbers::pi * s / segments;
        double z = curve.z[r];
        if (r == 0) z = 0.0;
        if (r == rings - 1) z = slab.thickness();
        return Vec3(base + z * n + curve.x[r] * (std::cos(t) * e1 + std::sin(t) * e2));
      },
      slab, true);
}

void write_profile_csv(const ProfileCurve& curve, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << "s,x,z,phi\n";
  os.precision(17);
  for (std::size_t k = 0; k < curve.size(); ++k)
    os << curve.s[k] << ',' << curve.x[k] << ',' << curve.z[k] << ',' << curve.phi[k] << '\n';
}

}  // namespace slabsym
