#include "report_json.hpp"

namespace pdo::cli {

namespace {

json pairs(const std::vector<std::pair<double, double>>& v) {
  json out = json::array();
  for (const auto& [a, b] : v) out.push_back({a, b});
  return out;
}

json point(const Point& p) {
  json out = json::array();
  for (int i = 0; i < p.dim; ++i) out.push_back(p[i]);
  return out;
}

}  // namespace

json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const MultiIndex& a, int dim) {
  json out = json::array();
  for (int i = 0; i < dim; ++i) out.push_back(a[i]);
  return out;
}

json to_json(const SymbolClassSpec& s) {
  json out = {{"order", s.order},         {"rho", s.rho},
              {"delta", s.delta},         {"holder_int", s.holder_int},
              {"holder_frac", s.holder_frac}, {"matrix_dim", s.matrix_dim},
              {"variant", to_string(s.variant)}};
  out["xi_regularity"] = s.xi_regularity == kUnbounded ? json(nullptr) : json(s.xi_regularity);
  return out;
}

json to_json(const DecayFit& f) {
  return {{"exponent", f.exponent}, {"residual", f.residual}, {"annuli", f.annuli}, {"annulus_sup", pairs(f.annulus_sup)}};
}

json to_json(const SeminormReport& r, int dim) {
  json out = {{"symbol", r.symbol}, {"spec", to_json(r.spec)}, {"pass", r.pass}, {"notes", r.notes}};
  out["constants"] = json::array();
  for (const auto& c : r.constants)
    out["constants"].push_back({{"alpha", to_json(c.alpha, dim)},
                                {"beta", to_json(c.beta, dim)},
                                {"claimed_order", c.claimed_order},
                                {"constant", c.constant},
                                {"fit", to_json(c.fit)},
                                {"pass", c.pass}});
  out["holder"] = json::array();
  for (const auto& h : r.holder)
    out["holder"].push_back({{"alpha", to_json(h.alpha, dim)},
                             {"holder_int", h.holder_int},
                             {"holder_frac", h.holder_frac},
                             {"claimed_order", h.claimed_order},
                             {"constant", h.constant},
                             {"fit", to_json(h.fit)},
                             {"refinement_quotients", h.refinement_quotients},
                             {"growth", h.growth},
                             {"pass", h.pass}});
  out["envelopes"] = json::array();
  for (const auto& e : r.envelopes)
    out["envelopes"].push_back({{"alpha", to_json(e.alpha, dim)},
                                {"beta", to_json(e.beta, dim)},
                                {"claimed_order", e.claimed_order},
                                {"envelope", pairs(e.envelope)},
                                {"inner", e.inner},
                                {"outer", e.outer},
                                {"pass", e.pass}});
  return out;
}

json to_json(const OscIntResult& r) {
  const auto& d = r.diagnostics;
  json values = json::array(), extrapolations = json::array();
  for (Complex v : d.values) values.push_back(to_json(v));
  for (Complex v : d.extrapolations) extrapolations.push_back(to_json(v));
  return {{"value", to_json(r.value)},
          {"epsilons", d.epsilons},
          {"values", values},
          {"extrapolations", extrapolations},
          {"order", d.order},
          {"box_sensitivity", d.box_sensitivity},
          {"divergent", d.divergent},
          {"lattice_points", d.lattice_points},
          {"magnitude", d.magnitude}};
}

json to_json(const CompositionResult& r) {
  json quadrature = json::array();
  for (const auto& [node, weight] : r.theta_quadrature) quadrature.push_back({node, weight});
  return {{"k", r.k},
          {"claimed_remainder_order", r.claimed_remainder_order},
          {"fitted_remainder_order", r.fitted_remainder_order},
          {"fit", to_json(r.fit)},
          {"direct_fit", to_json(r.direct_fit)},
          {"remainder_sup", r.remainder_sup},
          {"remainder_gap", r.remainder_gap},
          {"left_scale", r.left_scale},
          {"expansion_terms", r.expansion_terms.size()},
          {"theta_quadrature", quadrature},
          {"order_ok", r.order_ok},
          {"notes", r.notes}};
}

json to_json(const SobolevWindow& w) { return {{"lo", w.lo}, {"hi", w.hi}, {"k_p", w.k_p}}; }

json to_json(const BoundednessReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels) levels.push_back({{"points", l.points}, {"norm", l.norm}, {"iterations", l.iterations}});
  return {{"symbol", r.symbol}, {"s", r.s},         {"order", r.order}, {"window", to_json(r.window)},
          {"in_window", r.in_window}, {"levels", levels}, {"ratio", r.ratio}, {"pass", r.pass},
          {"warnings", r.warnings}};
}

json to_json(const EllipticityReport& r) {
  json violating = json::array();
  for (const auto& p : r.violating_points) violating.push_back({{"x", point(p.x)}, {"xi", point(p.xi)}, {"value", p.value}});
  return {{"symbol", r.symbol},
          {"order", r.order},
          {"C0", r.C0},
          {"R", r.R},
          {"violating_points", violating},
          {"det_min_profile", pairs(r.det_min_profile)},
          {"limit_checked", r.limit_checked},
          {"limit_envelope", pairs(r.limit_envelope)},
          {"limit_decreasing", r.limit_decreasing},
          {"pass", r.pass},
          {"warnings", r.warnings}};
}

json to_json(const CompactnessReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"points", l.points},
                      {"singular_values", l.singular_values.size()},
                      {"sigma_max", l.singular_values.empty() ? 0.0 : l.singular_values.front()}});
  return {{"verdict", to_string(r.verdict)},
          {"tail_exponent", r.tail_exponent},
          {"max_stability", r.max_stability},
          {"compared", r.compared},
          {"plateau", r.plateau},
          {"levels", levels},
          {"notes", r.notes}};
}

json to_json(const TheoremParameters& p) {
  return {{"theta", p.theta},         {"eps_tilde", p.eps_tilde}, {"theta_max", p.theta_max},
          {"eps_max", p.eps_max},     {"window", to_json(p.window)}, {"in_window", p.in_window},
          {"warnings", p.warnings}};
}

json to_json(const FredholmReport& r) {
  json levels = json::array();
  for (const auto& l : r.kernel_levels) {
    auto count = [](const KernelCount& k) {
      return json{{"count", k.count}, {"threshold", k.threshold}, {"sigma_max", k.sigma_max}, {"sigma_min", k.sigma_min}};
    };
    levels.push_back({{"points", l.points}, {"kernel", count(l.kernel)}, {"cokernel", count(l.cokernel)}});
  }
  json out = {{"symbol", r.symbol},
              {"order", r.order},
              {"s", r.s},
              {"parameters", to_json(r.parameters)},
              {"ellipticity", to_json(r.ellipticity)},
              {"R", r.R},
              {"residual_right", to_json(r.residual_right)},
              {"residual_left", to_json(r.residual_left)},
              {"kernel_levels", levels},
              {"kernel_dim", r.kernel_dim},
              {"cokernel_dim", r.cokernel_dim},
              {"threshold_robust", r.threshold_robust},
              {"kernel_at_threshold_range", {r.kernel_at_threshold_range.first, r.kernel_at_threshold_range.second}},
              {"index", r.index},
              {"index_method", r.index_method},
              {"caveat", r.caveat},
              {"fredholm_like", r.fredholm_like},
              {"warnings", r.warnings},
              {"notes", r.notes}};
  out["winding"] = r.winding ? json(*r.winding) : json(nullptr);
  return out;
}

}  // namespace pdo::cli
