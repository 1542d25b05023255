#pragma once

#include "slabsym/linearization.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace slabsym {

enum class Conclusion { holds, violated, not_applicable };

const char* to_string(Conclusion c);

struct TouchingTolerances {
  double L = 0.0;           // slack on L(w) >= 0
  double w = 0.0;           // slack on w <= 0 and w(x0) = 0
  double derivative = 0.0;  // slack on dw/deta(x0) = 0
  double conclusion = 0.0;  // max |w| counted as w == 0

  /// 10 h^2 for the hypotheses and 50 h^2 for the conclusion.
  static TouchingTolerances for_spacing(double h);
};

struct HypothesisStatus {
  std::string name;
  bool holds = true;
  int witness = -1;    // smallest active index violating it
  double value = 0.0;  // worst observed value
};

struct TouchingVerdict {
  std::vector<HypothesisStatus> hypotheses;
  bool hypotheses_hold = true;
  Conclusion conclusion = Conclusion::not_applicable;
  int conclusion_witness = -1;
  double max_abs_w = 0.0;
  std::optional<double> normal_derivative;  // boundary case only
  /// Set when L(w) >= 0, w <= 0 and w(x0) = 0 hold but w is not identically
  /// zero: the observed dw/deta(x0), which should be strictly negative.
  std::optional<double> hopf_derivative;
  TouchingTolerances tol;

  nlohmann::json to_json() const;
};

/// Interior touching: L(w) >= 0 on the interior nodes, w <= 0 there and
/// w(x0) = 0 at an interior node imply w == 0 on the interior nodes.
TouchingVerdict check_interior_touching(const EllipticOperatorField& op, const ScalarField& w, int x0,
                                        const TouchingTolerances& tol);

/// Boundary touching: adds w <= 0 on the boundary nodes and dw/deta(x0) = 0 at
/// a boundary node x0 (one-sided second-order difference along the inward
/// normal), concluding w == 0 on every active node.
TouchingVerdict check_boundary_touching(const EllipticOperatorField& op, const ScalarField& w, int x0,
                                        const TouchingTolerances& tol);

/// (-3 w(x0) + 4 w(x0 + h eta) - w(x0 + 2 h eta)) / 2h at a boundary node.
double inward_normal_derivative(const ScalarField& w, int x0);

}  // namespace slabsym
