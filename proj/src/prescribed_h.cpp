#include "slabsym/prescribed_h.hpp"

#include "slabsym/errors.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <cmath>
#include <limits>

namespace slabsym {

struct PrescribedH::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> s;
  Spline(const std::vector<double>& v, double t0, double step) : s(v.begin(), v.end(), t0, step) {}
};

PrescribedH PrescribedH::constant(double H0) {
  PrescribedH p;
  p.kind_ = Kind::constant;
  p.h0_ = H0;
  return p;
}

PrescribedH PrescribedH::affine(double H0, double slope) {
  PrescribedH p;
  p.kind_ = Kind::affine;
  p.h0_ = H0;
  p.slope_ = slope;
  return p;
}

PrescribedH PrescribedH::tabulated(double u_min, double u_max, std::vector<double> samples) {
  if (!(u_min < u_max)) throw InvalidInput("tabulated H: u_min must be below u_max");
  if (samples.size() < 5) throw InvalidInput("tabulated H: need at least 5 samples");
  PrescribedH p;
  p.kind_ = Kind::tabulated;
  p.u_min_ = u_min;
  p.u_max_ = u_max;
  p.samples_ = std::move(samples);
  const double step = (u_max - u_min) / static_cast<double>(p.samples_.size() - 1);
  p.spline_ = std::make_shared<const Spline>(p.samples_, u_min, step);
  return p;
}

PrescribedH PrescribedH::general(General g) {
  if (!g.H) throw InvalidInput("general H: missing function");
  PrescribedH p;
  p.kind_ = Kind::general;
  p.general_ = std::move(g);
  return p;
}

HValue PrescribedH::eval(const Vec2& x, double u, const Vec2& grad) const {
  HValue out;
  switch (kind_) {
    case Kind::constant:
      out.H = h0_;
      break;
    case Kind::affine:
      out.H = h0_ + slope_ * u;
      out.dH_du = slope_;
      break;
    case Kind::tabulated:
      if (u < u_min_ || u > u_max_) throw RangeError("tabulated H: u outside the tabulated range");
      out.H = spline_->s(u);
      out.dH_du = spline_->s.prime(u);
      break;
    case Kind::general: {
      const Vec2 g = general_.depends_on_gradient ? grad : Vec2::Zero();
      out.H = general_.H(x, u, g);
      out.dH_du = general_.dH_du ? general_.dH_du(x, u, g) : std::numeric_limits<double>::quiet_NaN();
      if (general_.depends_on_gradient && general_.dH_dgrad) out.dH_dgrad = general_.dH_dgrad(x, u, g);
      break;
    }
  }
  out.H *= amplitude_;
  out.dH_du *= amplitude_;
  out.dH_dgrad *= amplitude_;
  return out;
}

PrescribedH PrescribedH::scaled(double lambda) const {
  PrescribedH p = *this;
  p.amplitude_ *= lambda;
  return p;
}

PrescribedH PrescribedH::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant(j.at("H0").get<double>());
    if (kind == "affine") return affine(j.at("H0").get<double>(), j.at("slope").get<double>());
    if (kind == "tabulated")
      return tabulated(j.at("u_min").get<double>(), j.at("u_max").get<double>(),
                       j.at("values").get<std::vector<double>>());
    throw InvalidInput("H profile: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("H profile: ") + e.what());
  }
}

nlohmann::json PrescribedH::to_json() const {
  switch (kind_) {
    case Kind::constant:
      return {{"kind", "constant"}, {"H0", h0_ * amplitude_}};
    case Kind::affine:
      return {{"kind", "affine"}, {"H0", h0_ * amplitude_}, {"slope", slope_ * amplitude_}};
    case Kind::tabulated: {
      std::vector<double> v = samples_;
      for (double& s : v) s *= amplitude_;
      return {{"kind", "tabulated"}, {"u_min", u_min_}, {"u_max", u_max_}, {"values", v}};
    }
    case Kind::general:
      return {{"kind", "general"}};
  }
  return nullptr;
}

}  // namespace slabsym
