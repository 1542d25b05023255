#include "slabsym/touching.hpp"

#include "slabsym/errors.hpp"

#include <algorithm>
#include <cmath>

namespace slabsym {

const char* to_string(Conclusion c) {
  switch (c) {
    case Conclusion::holds:
      return "holds";
    case Conclusion::violated:
      return "violated";
    default:
      return "not_applicable";
  }
}

TouchingTolerances TouchingTolerances::for_spacing(double h) {
  TouchingTolerances t;
  t.L = 10 * h * h;
  t.w = 10 * h * h;
  t.derivative = 10 * h * h;
  t.conclusion = 50 * h * h;
  return t;
}

nlohmann::json TouchingVerdict::to_json() const {
  nlohmann::json j;
  j["hypotheses"] = nlohmann::json::array();
  for (const auto& hs : hypotheses)
    j["hypotheses"].push_back({{"name", hs.name}, {"holds", hs.holds}, {"witness", hs.witness}, {"value", hs.value}});
  j["hypotheses_hold"] = hypotheses_hold;
  j["conclusion"] = to_string(conclusion);
  j["conclusion_witness"] = conclusion_witness;
  j["max_abs_w"] = max_abs_w;
  j["normal_derivative"] = normal_derivative ? nlohmann::json(*normal_derivative) : nlohmann::json(nullptr);
  j["hopf_derivative"] = hopf_derivative ? nlohmann::json(*hopf_derivative) : nlohmann::json(nullptr);
  j["tolerances"] = {{"L", tol.L}, {"w", tol.w}, {"derivative", tol.derivative}, {"conclusion", tol.conclusion}};
  return j;
}

double inward_normal_derivative(const ScalarField& w, int x0) {
  const DomainGrid& g = *w.grid;
  if (g.tag_of(x0) != NodeTag::boundary) throw InvalidInput("normal derivative: node is not a boundary node");
  const Vec2 eta = g.foot(x0).inward_normal;
  const Vec2 p = g.position(x0);
  const double h = g.spacing();
  const double w1 = interpolate(w, p + h * eta);
  const double w2 = interpolate(w, p + 2 * h * eta);
  return (-3 * w.values[x0] + 4 * w1 - w2) / (2 * h);
}

namespace {

void check_inputs(const EllipticOperatorField& op, const ScalarField& w, int x0) {
  if (op.grid != w.grid) throw GridMismatch("touching: operator and field grids differ");
  w.validate();
  if (x0 < 0 || x0 >= w.grid->active_count()) throw InvalidInput("touching: x0 is not an active node");
}

HypothesisStatus check_L(const EllipticOperatorField& op, const ScalarField& w, double tol) {
  HypothesisStatus s{"L(w) >= 0", true, -1, 0.0};
  const auto& interior = w.grid->interior_nodes();
  const auto Lw = op.apply(w);
  double worst = 0.0;
  for (std::size_t m = 0; m < Lw.size(); ++m) {
    worst = std::min(worst, Lw[m]);
    if (Lw[m] < -tol && (s.witness < 0 || interior[m] < s.witness)) s.witness = interior[m];
  }
  s.value = worst;
  s.holds = s.witness < 0;
  return s;
}

HypothesisStatus check_nonpositive(const ScalarField& w, const std::vector<int>& nodes, double tol,
                                   const std::string& name) {
  HypothesisStatus s{name, true, -1, 0.0};
  double worst = -INFINITY;
  for (int k : nodes) {
    worst = std::max(worst, w.values[k]);
    if (w.values[k] > tol && (s.witness < 0 || k < s.witness)) s.witness = k;
  }
  s.value = nodes.empty() ? 0.0 : worst;
  s.holds = s.witness < 0;
  return s;
}

void conclude(TouchingVerdict& v, const ScalarField& w, const std::vector<int>& nodes) {
  v.hypotheses_hold = std::all_of(v.hypotheses.begin(), v.hypotheses.end(), [](const auto& h) { return h.holds; });
  double mx = 0.0;
  int arg = -1;
  for (int k : nodes) {
    const double a = std::abs(w.values[k]);
    if (a > mx) {
      mx = a;
      arg = k;
    }
  }
  v.max_abs_w = mx;
  if (!v.hypotheses_hold) {
    v.conclusion = Conclusion::not_applicable;
    return;
  }
  if (mx <= v.tol.conclusion) {
    v.conclusion = Conclusion::holds;
  } else {
    v.conclusion = Conclusion::violated;
    v.conclusion_witness = arg;
  }
}

}  // namespace

TouchingVerdict check_interior_touching(const EllipticOperatorField& op, const ScalarField& w, int x0,
                                        const TouchingTolerances& tol) {
  check_inputs(op, w, x0);
  if (w.grid->tag_of(x0) != NodeTag::interior) throw InvalidInput("interior touching: x0 is not an interior node");
  TouchingVerdict v;
  v.tol = tol;
  const auto& interior = w.grid->interior_nodes();
  v.hypotheses.push_back(check_L(op, w, tol.L));
  v.hypotheses.push_back(check_nonpositive(w, interior, tol.w, "w <= 0"));
  HypothesisStatus touch{"w(x0) = 0", std::abs(w.values[x0]) <= tol.w, -1, w.values[x0]};
  if (!touch.holds) touch.witness = x0;
  v.hypotheses.push_back(touch);
  conclude(v, w, interior);
  return v;
}

TouchingVerdict check_boundary_touching(const EllipticOperatorField& op, const ScalarField& w, int x0,
                                        const TouchingTolerances& tol) {
  check_inputs(op, w, x0);
  const DomainGrid& g = *w.grid;
  if (g.tag_of(x0) != NodeTag::boundary) throw InvalidInput("boundary touching: x0 is not a boundary node");
  TouchingVerdict v;
  v.tol = tol;
  std::vector<int> all(g.active_count());
  for (int k = 0; k < g.active_count(); ++k) all[k] = k;
  v.hypotheses.push_back(check_L(op, w, tol.L));
  v.hypotheses.push_back(check_nonpositive(w, all, tol.w, "w <= 0"));
  HypothesisStatus touch{"w(x0) = 0", std::abs(w.values[x0]) <= tol.w, -1, w.values[x0]};
  if (!touch.holds) touch.witness = x0;
  v.hypotheses.push_back(touch);
  const double dw = inward_normal_derivative(w, x0);
  v.normal_derivative = dw;
  HypothesisStatus flat{"dw/deta(x0) = 0", std::abs(dw) <= tol.derivative, -1, dw};
  if (!flat.holds) flat.witness = x0;
  v.hypotheses.push_back(flat);
  conclude(v, w, all);
  if (v.hypotheses[0].holds && v.hypotheses[1].holds && v.hypotheses[2].holds && v.max_abs_w > tol.conclusion)
    v.hopf_derivative = dw;
  return v;
}

}  // namespace slabsym
