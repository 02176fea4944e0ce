#include "cvbs/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cvbs/entangled_states.hpp"
#include "cvbs/errors.hpp"
#include "cvbs/fock.hpp"
#include "cvbs/phase_space.hpp"
#include "cvbs/squeezer.hpp"

namespace cvbs {

namespace {

int pick(int override_value, int fallback) { return override_value >= 0 ? override_value : fallback; }

bool is_quarter_pi(double theta) { return std::abs(theta - kPi / 4) < 1e-12; }

std::vector<ComplexLabel> eta_grid(const SuiteOptions& o) {
  std::vector<ComplexLabel> g;
  for (double e1 : o.eta_components)
    for (double e2 : o.eta_components) g.push_back(ComplexLabel::from_quadratures(e1, e2));
  return g;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// max |A_ij - B_ij| over n1 + n2 <= cutoff - guard for both indices.
double guarded_distance(const OperatorMatrix& a, const OperatorMatrix& b, int guard) {
  const int n = a.cutoff();
  std::vector<int> keep;
  for (int n1 = 0; n1 <= n; ++n1)
    for (int n2 = 0; n2 <= n; ++n2)
      if (n1 + n2 <= n - guard) keep.push_back(n1 * (n + 1) + n2);
  double m = 0.0;
  for (int i : keep)
    for (int j : keep) m = std::max(m, std::abs(a.matrix()(i, j) - b.matrix()(i, j)));
  return m;
}

}  // namespace

Json SuiteOptions::to_json() const {
  return Json{{"theta_grid", theta_grid},
              {"lambda_grid", lambda_grid},
              {"eta_components", eta_components},
              {"theta", theta},
              {"lambda", lambda},
              {"eta", {{"re", eta.eta().real()}, {"im", eta.eta().imag()}, {"eta1", eta.eta1()}, {"eta2", eta.eta2()}}},
              {"cutoff", cutoff},
              {"guard", guard},
              {"grid_radius", grid_radius},
              {"grid_step", grid_step},
              {"seed", seed}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"relations", "unitarity", "variances", "completeness",
                                                 "orthogonality", "all"};
  return names;
}

ExperimentReport eigen_relations_experiment(const SuiteOptions& o) {
  const int cutoff = pick(o.cutoff, 48), guard = pick(o.guard, 8);
  ExperimentReport r;
  r.kind = "eigen_relations";
  r.params = Json{{"theta_grid", o.theta_grid}, {"eta_components", o.eta_components}, {"cutoff", cutoff}, {"guard", guard}};
  double worst = 0.0;
  for (std::size_t t = 0; t < o.theta_grid.size(); ++t) {
    double m = 0.0;
    for (const ComplexLabel& eta : eta_grid(o))
      m = std::max(m, verify_eta_theta_relations(eta, o.theta_grid[t], cutoff, guard).max_residual());
    r.set("theta" + std::to_string(t) + ".max_residual", m);
    worst = std::max(worst, m);
  }
  double eta_worst = 0.0;
  for (const ComplexLabel& eta : eta_grid(o))
    eta_worst = std::max(eta_worst, verify_eta_relations(eta, cutoff, guard).max_residual());
  r.set("max_residual", worst);
  r.set("eta_state.max_residual", eta_worst);
  r.require_at_most("max_residual", 1e-8);
  r.require_at_most("eta_state.max_residual", 1e-8);
  r.evaluate();
  return r;
}

ExperimentReport quarter_pi_reduction_experiment(const SuiteOptions& o) {
  ExperimentReport r;
  r.kind = "quarter_pi_reduction";
  r.params = Json{{"eta_components", o.eta_components}, {"theta_grid", o.theta_grid}};
  double d = 0.0, route = 0.0;
  for (const ComplexLabel& eta : eta_grid(o)) {
    d = std::max(d, coefficient_distance(make_eta_theta_state(eta, kPi / 4), make_eta_state(eta)));
    for (double th : o.theta_grid)
      route = std::max(route, coefficient_distance(make_eta_theta_via_beamsplitter(eta, th), make_eta_theta_state(eta, th)));
  }
  r.set("coefficient_distance", d);
  r.set("beamsplitter_route_distance", route);
  r.require_at_most("coefficient_distance", 1e-14);
  r.require_at_most("beamsplitter_route_distance", 1e-12);
  r.evaluate();
  return r;
}

ExperimentReport non_rotation_experiment(const SuiteOptions& o) {
  const int cutoff = pick(o.cutoff, 40);
  ExperimentReport r;
  r.kind = "non_rotation";
  r.params = Json{{"theta_grid", o.theta_grid}, {"eta_components", o.eta_components}, {"cutoff", cutoff}};
  double min_gap = 1.0;
  int points = 0;
  for (double th : o.theta_grid) {
    if (is_quarter_pi(th)) continue;
    for (const ComplexLabel& eta : eta_grid(o)) {
      if (eta.eta() == Complex(0.0, 0.0)) continue;
      min_gap = std::min(min_gap, verify_not_rotated(eta, th, cutoff));
      ++points;
    }
  }
  r.set("min_fidelity_gap", min_gap);
  r.set("points", points);
  r.require_at_least("min_fidelity_gap", 0.01);
  r.evaluate();
  return r;
}

ExperimentReport unitarity_experiment(const SuiteOptions& o) {
  ExperimentReport r;
  r.kind = "unitarity";
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> lam(0.0, 1.5), th(0.05, kPi / 2 - 0.05);
  std::vector<std::pair<double, double>> points;
  for (double l : o.lambda_grid)
    for (double t : o.theta_grid) points.emplace_back(l, t);
  const std::size_t grid_points = points.size();
  for (int k = 0; k < 8; ++k) {
    const double l = lam(rng);
    points.emplace_back(l, th(rng));
  }
  r.params = Json{{"lambda_grid", o.lambda_grid}, {"theta_grid", o.theta_grid}, {"seed", o.seed},
                  {"random_points", points.size() - grid_points}};
  double ident = 0.0, bog = 0.0, sympl = 0.0, diag = 0.0;
  for (const auto& [l, t] : points) {
    const SqueezeParams p = SqueezeParams::make(l, t);
    ident = std::max(ident, unitarity_check(p));
    const Bogoliubov b = bogoliubov(p);
    bog = std::max({bog, b.inverse_error, b.off_diagonal_error, b.gram_error});
    const MDiagonalization d = diagonalize_M(p);
    diag = std::max({diag, d.reconstruction_error, d.exp_log_error});
    sympl = std::max(sympl, symplectic_deviation(symplectic_of_U(l, t)));
  }
  r.set("commutator_identity_error", ident);
  r.set("bogoliubov_identity_error", bog);
  r.set("diagonalization_error", diag);
  r.set("symplectic_deviation", sympl);
  r.require_at_most("commutator_identity_error", 1e-11);
  r.require_at_most("bogoliubov_identity_error", 1e-11);
  r.require_at_most("diagonalization_error", 1e-11);
  r.require_at_most("symplectic_deviation", 1e-12);
  r.evaluate();
  return r;
}

ExperimentReport variance_experiment(const SuiteOptions& o) {
  const int cutoff = pick(o.cutoff, 48);
  ExperimentReport r;
  r.kind = "variances";
  r.params = Json{{"lambda_grid", o.lambda_grid}, {"theta_grid", o.theta_grid}, {"fock_cutoff", cutoff},
                  {"fock_lambda_max", 0.5}};
  double ps = 0.0, fock = 0.0, quarter = 0.0, slack = 1e300, strict = 1e300;
  for (double l : o.lambda_grid)
    for (double t : o.theta_grid) {
      const SqueezeParams p = SqueezeParams::make(l, t);
      const Variances c = variance_closed_form(p), s = variance_phase_space(p);
      ps = std::max({ps, rel_diff(s.var_x, c.var_x), rel_diff(s.var_p, c.var_p)});
      if (l <= 0.5 + 1e-12) {
        const Variances f = variance_fock(p, cutoff);
        fock = std::max({fock, rel_diff(f.var_x, c.var_x), rel_diff(f.var_p, c.var_p)});
      }
      const double gap = c.var_p - std::exp(2 * l);
      slack = std::min(slack, gap);
      if (is_quarter_pi(t)) {
        quarter = std::max({quarter, std::abs(c.var_x - std::exp(-2 * l)), rel_diff(c.var_p, std::exp(2 * l))});
      } else {
        strict = std::min(strict, gap);
      }
    }
  r.set("phase_space_rel_error", ps);
  r.set("fock_rel_error", fock);
  r.set("min_inequality_slack", slack);
  r.require_at_most("phase_space_rel_error", 1e-12);
  r.require_at_most("fock_rel_error", 1e-6);
  r.require_at_least("min_inequality_slack", -1e-12);
  if (std::any_of(o.theta_grid.begin(), o.theta_grid.end(), is_quarter_pi)) {
    r.set("quarter_pi_error", quarter);
    r.require_at_most("quarter_pi_error", 1e-12);
  }
  if (strict < 1e300) {
    // Equality only at pi/4: every other angle keeps a visible margin.
    r.set("min_slack_off_quarter_pi", strict);
    r.require_at_least("min_slack_off_quarter_pi", 1e-9);
  }
  r.evaluate();
  return r;
}

ExperimentReport squeeze_action_experiment(const SuiteOptions& o) {
  const int cutoff = pick(o.cutoff, 56), guard = pick(o.guard, 10);
  const double lambda = 0.2;
  const ComplexLabel eta(Complex(0.5, 0.0));
  const std::vector<double> thetas = {kPi / 6, kPi / 3};
  ExperimentReport r;
  r.kind = "squeeze_action";
  r.params = Json{{"eta", 0.5}, {"lambda", lambda}, {"thetas", thetas}, {"cutoff", cutoff}, {"guard", guard}};
  double fock = 0.0, expo = 0.0, measure = 0.0;
  for (double t : thetas) {
    const SqueezeActionReport a = squeeze_action_check(eta, SqueezeParams::make(lambda, t), cutoff, guard);
    fock = std::max(fock, a.fock_distance);
    expo = std::max(expo, a.exponent_distance);
    measure = std::max(measure, a.measure_consistency);
  }
  r.set("fock_relative_distance", fock);
  r.set("exponent_distance", expo);
  r.set("measure_consistency", measure);
  r.require_at_most("fock_relative_distance", 1e-6);
  r.require_at_most("exponent_distance", 1e-13);
  r.require_at_most("measure_consistency", 1e-14);
  r.evaluate();
  return r;
}

ExperimentReport factorization_experiment(const SuiteOptions& o) {
  const int cutoff = pick(o.cutoff, 48), guard = pick(o.guard, 10);
  ExperimentReport r;
  r.kind = "factorization";
  r.params = Json{{"lambda", o.lambda}, {"theta", o.theta}, {"cutoff", cutoff}, {"guard", guard}};
  const OperatorMatrix u = build_U_fock(SqueezeParams::make(o.lambda, kPi / 4), cutoff);
  r.set("quarter_pi_distance", guarded_distance(u, two_mode_squeezer_fock(o.lambda, cutoff), guard));
  r.set("unitarity_deviation", guarded_unitarity_deviation(SqueezeParams::make(o.lambda, o.theta), cutoff, guard));
  r.require_at_most("quarter_pi_distance", 1e-8);
  r.require_at_most("unitarity_deviation", 1e-8);
  r.evaluate();
  return r;
}

std::vector<ExperimentReport> completeness_experiments(const SuiteOptions& o) {
  std::vector<ExperimentReport> out;
  for (double t : {kPi / 6, kPi / 4, kPi / 3}) {
    GridSpec g;
    g.radius = o.grid_radius;
    g.spacing = o.grid_step;
    g.theta = t;
    g.cutoff = pick(o.cutoff, 24);
    g.guard = pick(o.guard, g.cutoff - 4);
    out.push_back(completeness_scan(g));
  }
  return out;
}

std::vector<ExperimentReport> orthogonality_experiments(const SuiteOptions&) {
  std::vector<ExperimentReport> out;
  for (double t : {kPi / 6, kPi / 3}) {
    OrthogonalityConfig s;
    s.theta = t;
    out.push_back(orthogonality_scan(s));
  }
  return out;
}

ExperimentReport asymptotics_experiment(const SuiteOptions& o) {
  const int cutoff = pick(o.cutoff, 48);
  const double theta = kPi / 3;
  const std::vector<double> lambdas = {1.0, 2.0, 3.0};
  ExperimentReport r;
  r.kind = "asymptotics";
  r.params = Json{{"theta", theta}, {"lambdas", lambdas}, {"cutoff", cutoff}, {"theta_grid", o.theta_grid}};
  double dist = 0.0;
  for (double l : {0.5, 1.0, 2.0, 3.0})
    for (double t : o.theta_grid)
      dist = std::max(dist, coefficient_distance(bs_output_two_squeezed(l, t), bs_output_closed_form(l, t)));
  r.set("closed_form_distance", dist);
  r.require_at_most("closed_form_distance", 1e-14);
  double prev = -1.0;
  int drops = 0;
  for (double l : lambdas) {
    const GaussianKet a = asymptotic_state(SqueezeParams::make(l, theta));
    const GaussianKet b = bs_output_closed_form(l, theta);
    const double f = fidelity(fock_expand(a, cutoff), fock_expand(b, cutoff));
    // Untruncated value for reference; both kets are normalizable.
    const double exact = std::norm(overlap(a, b)) / (overlap(a, a).real() * overlap(b, b).real());
    const std::string key = "lambda" + std::to_string(static_cast<int>(l));
    r.set(key + ".fidelity", f);
    r.set(key + ".exact_fidelity", exact);
    if (f <= prev) ++drops;
    prev = f;
  }
  r.set("non_increasing_steps", drops);
  r.require_at_least("lambda3.fidelity", std::nextafter(0.999, 1.0));
  r.require_at_most("non_increasing_steps", 0.0);
  r.evaluate();
  return r;
}

std::vector<ExperimentReport> run_suite(const std::string& name, const SuiteOptions& o) {
  std::vector<ExperimentReport> out;
  const bool all = name == "all";
  if (!all && std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
    throw InvalidArgument("unknown suite '" + name + "'");
  auto append = [&](std::vector<ExperimentReport> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (all || name == "relations") {
    out.push_back(eigen_relations_experiment(o));
    out.push_back(quarter_pi_reduction_experiment(o));
    out.push_back(non_rotation_experiment(o));
  }
  if (all || name == "unitarity") {
    out.push_back(unitarity_experiment(o));
    out.push_back(squeeze_action_experiment(o));
    out.push_back(factorization_experiment(o));
  }
  if (all || name == "variances") out.push_back(variance_experiment(o));
  // Large-lambda limit of the squeezed vacuum; not part of the variance identities.
  if (all) out.push_back(asymptotics_experiment(o));
  if (all || name == "completeness") append(completeness_experiments(o));
  if (all || name == "orthogonality") append(orthogonality_experiments(o));
  return out;
}

}  // namespace cvbs
