#pragma once

#include "slabsym/geometry.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <vector>

namespace slabsym {

struct HValue {
  double H = 0.0;
  double dH_du = 0.0;
  Vec2 dH_dgrad = Vec2::Zero();
};

/// Prescribed mean curvature H(x, u[, grad u]).
class PrescribedH {
 public:
  enum class Kind { constant, affine, tabulated, general };

  using Function = std::function<double(const Vec2& x, double u, const Vec2& grad)>;
  using GradFunction = std::function<Vec2(const Vec2& x, double u, const Vec2& grad)>;

  struct General {
    Function H;
    Function dH_du;          // optional
    GradFunction dH_dgrad;   // optional; required when depends_on_gradient
    bool depends_on_gradient = false;
  };

  static PrescribedH constant(double H0);
  /// H(u) = H0 + slope * u.
  static PrescribedH affine(double H0, double slope);
  /// Uniform samples of H(u) on [u_min, u_max], C^1 cubic B-spline interpolation.
  static PrescribedH tabulated(double u_min, double u_max, std::vector<double> samples);
  static PrescribedH general(General g);

  Kind kind() const { return kind_; }
  bool depends_on_gradient() const { return kind_ == Kind::general && general_.depends_on_gradient; }
  bool has_u_derivative() const { return kind_ != Kind::general || static_cast<bool>(general_.dH_du); }
  bool has_gradient_derivative() const {
    return !depends_on_gradient() || static_cast<bool>(general_.dH_dgrad);
  }

  /// H and dH/du at (x, u). The gradient is ignored unless the profile
  /// depends on it. RangeError outside a tabulated range; dH_du is NaN for a
  /// general profile without a derivative.
  HValue eval(const Vec2& x, double u, const Vec2& grad = Vec2::Zero()) const;

  /// Convenience for profiles that depend on the height only.
  double operator()(double u) const { return eval(Vec2::Zero(), u).H; }

  /// lambda * H, used by continuation in the curvature amplitude.
  PrescribedH scaled(double lambda) const;

  double H0() const { return h0_; }
  double slope() const { return slope_; }

  /// Scenario form: {"kind":"constant","H0":..} / {"kind":"affine","H0":..,"slope":..}
  /// / {"kind":"tabulated","u_min":..,"u_max":..,"values":[..]}.
  static PrescribedH from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  struct Spline;

  Kind kind_ = Kind::constant;
  double h0_ = 0.0;
  double slope_ = 0.0;
  double amplitude_ = 1.0;
  double u_min_ = 0.0, u_max_ = 0.0;
  std::vector<double> samples_;
  std::shared_ptr<const Spline> spline_;
  General general_;
};

}  // namespace slabsym
