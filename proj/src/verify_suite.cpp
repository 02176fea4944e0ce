#include "cvbs/verify_suite.hpp"

#include <algorithm>
#include <cmath>

#include "cvbs/entangled_states.hpp"
#include "cvbs/errors.hpp"
#include "cvbs/fock.hpp"
#include "cvbs/format.hpp"
#include "cvbs/gaussian_ket.hpp"

namespace cvbs {

namespace {

constexpr double kGridConvergence = 1e-3;

std::vector<int> subspace_indices(int cutoff, int max_total) {
  std::vector<int> idx;
  for (int n1 = 0; n1 <= cutoff; ++n1)
    for (int n2 = 0; n2 <= cutoff; ++n2)
      if (n1 + n2 <= max_total) idx.push_back(n1 * (cutoff + 1) + n2);
  return idx;
}

// (-1)^{n1+n2} on the subspace, in index order.
Eigen::VectorXd parity_signs(int cutoff, int max_total) {
  std::vector<double> s;
  for (int n1 = 0; n1 <= cutoff; ++n1)
    for (int n2 = 0; n2 <= cutoff; ++n2)
      if (n1 + n2 <= max_total) s.push_back((n1 + n2) % 2 == 0 ? 1.0 : -1.0);
  return Eigen::Map<Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size()));
}

Json label_json(const ComplexLabel& l) {
  return Json{{"re", l.eta().real()}, {"im", l.eta().imag()}, {"eta1", l.eta1()}, {"eta2", l.eta2()}};
}

}  // namespace

int GridSpec::half_width() const {
  if (!(radius > 0.0) || !(spacing > 0.0) || !std::isfinite(radius / spacing))
    throw InvalidArgument("grid radius and spacing must be positive");
  const double q = radius / spacing;
  const double k = std::round(q);
  if (std::abs(q - k) > 1e-9) throw InvalidArgument("grid radius must be an integer multiple of the spacing");
  return static_cast<int>(k);
}

Json GridSpec::to_json() const {
  return Json{{"radius", radius},   {"spacing", spacing},           {"theta", theta},
              {"cutoff", cutoff},   {"guard", guard},               {"max_total", max_total()},
              {"weight_scale", weight_scale}, {"refine", refine}};
}

void validate(const GridSpec& g) {
  require_open_angle(g.theta);
  g.half_width();
  if (g.cutoff < 1 || g.guard < 0 || g.guard >= g.cutoff)
    throw InvalidArgument("grid needs cutoff >= 1 and 0 <= guard < cutoff");
  if (!std::isfinite(g.weight_scale) || g.weight_scale <= 0.0)
    throw InvalidArgument("weight scale must be positive");
}

bool Check::holds(double value) const {
  if (!std::isfinite(value)) return false;
  return kind == Kind::AtMost ? value <= limit : value >= limit;
}

void ExperimentReport::require_at_most(const std::string& metric, double limit) {
  checks.push_back({metric, Check::Kind::AtMost, limit});
}

void ExperimentReport::require_at_least(const std::string& metric, double limit) {
  checks.push_back({metric, Check::Kind::AtLeast, limit});
}

bool ExperimentReport::evaluate() {
  pass = std::all_of(checks.begin(), checks.end(), [&](const Check& c) {
    const auto it = metrics.find(c.metric);
    return it != metrics.end() && c.holds(it->second);
  });
  return pass;
}

Json ExperimentReport::to_json() const {
  Json m = Json::object();
  for (const auto& [k, v] : metrics) m[k] = v;
  Json t = Json::array();
  for (const Check& c : checks)
    t.push_back(Json{{"metric", c.metric},
                     {"bound", c.kind == Check::Kind::AtMost ? "max" : "min"},
                     {"limit", c.limit}});
  return Json{{"kind", kind}, {"params", params}, {"metrics", m}, {"tolerances", t}, {"pass", pass}};
}

ExperimentReport ExperimentReport::from_json(const Json& j) {
  ExperimentReport r;
  try {
    r.kind = j.at("kind").get<std::string>();
    r.params = j.at("params");
    for (const auto& [k, v] : j.at("metrics").items()) r.metrics[k] = v.is_null() ? std::nan("") : v.get<double>();
    for (const Json& t : j.at("tolerances")) {
      const std::string bound = t.at("bound").get<std::string>();
      if (bound != "max" && bound != "min") throw InvalidArgument("unknown tolerance bound '" + bound + "'");
      r.checks.push_back({t.at("metric").get<std::string>(), bound == "max" ? Check::Kind::AtMost : Check::Kind::AtLeast,
                          t.at("limit").get<double>()});
    }
    const bool stored = j.at("pass").get<bool>();
    if (r.evaluate() != stored) throw InvalidArgument("experiment '" + r.kind + "' pass flag disagrees with its metrics");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed experiment report: ") + e.what());
  }
  return r;
}

CompletenessMatrix completeness_matrix(const GridSpec& g, int subdivide) {
  validate(g);
  if (subdivide < 1) throw InvalidArgument("subdivide must be >= 1");
  const int n = g.half_width();
  const std::vector<int> idx = subspace_indices(g.cutoff, g.max_total());
  const Eigen::Index d = static_cast<Eigen::Index>(idx.size());
  const double sub = g.spacing / subdivide;
  const double cell = sub * sub / kPi;

  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd right = Eigen::MatrixXcd::Zero(d, d), left = Eigen::MatrixXcd::Zero(d, d);
  Eigen::VectorXcd v(d);
  // Fixed traversal order keeps the sum bit-reproducible.
  for (int i = -n; i <= n; ++i)
    for (int si = 0; si < subdivide; ++si) {
      const double x = i * g.spacing - 0.5 * g.spacing + (si + 0.5) * sub;
      for (int j = -n; j <= n; ++j)
        for (int sj = 0; sj < subdivide; ++sj) {
          const double y = j * g.spacing - 0.5 * g.spacing + (sj + 0.5) * sub;
          const FockVector psi = fock_expand(make_eta_theta_state(ComplexLabel(Complex(x, y)), g.theta), g.cutoff);
          for (Eigen::Index k = 0; k < d; ++k) v(k) = psi.amplitudes()(idx[k]);
          const Eigen::MatrixXcd outer = v * v.adjoint();
          total += outer;
          if (2 * i * subdivide + 2 * si + 1 - subdivide > 0) right += outer;
          if (2 * i * subdivide + 2 * si + 1 - subdivide < 0) left += outer;
        }
    }
  const Eigen::VectorXd p = parity_signs(g.cutoff, g.max_total());
  CompletenessMatrix out;
  out.unweighted = cell * total;
  out.weighted = (g.weight_scale * std::sin(2.0 * g.theta)) * out.unweighted;
  // eta -> -eta^* maps psi_n to (-1)^{n1+n2} conj(psi_n).
  out.parity_gap = cell * (left - p.asDiagonal() * right.conjugate() * p.asDiagonal());
  return out;
}

double identity_deviation(const Eigen::MatrixXcd& c) {
  return (c - Eigen::MatrixXcd::Identity(c.rows(), c.cols())).cwiseAbs().maxCoeff();
}

ExperimentReport completeness_scan(const GridSpec& g) {
  const CompletenessMatrix c = completeness_matrix(g, 1);
  const Eigen::Index d = c.weighted.rows();
  const double s2 = std::sin(2.0 * g.theta);

  double diag_dev = 0.0, off = 0.0, raw_dev = 0.0, raw_mean = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    diag_dev = std::max(diag_dev, std::abs(c.weighted(i, i) - 1.0));
    raw_dev = std::max(raw_dev, std::abs(c.unweighted(i, i) - 1.0));
    raw_mean += c.unweighted(i, i).real() / static_cast<double>(d);
    for (Eigen::Index j = 0; j < d; ++j)
      if (i != j) off = std::max(off, std::abs(c.weighted(i, j)));
  }
  const Eigen::MatrixXcd herm = 0.5 * (c.weighted + c.weighted.adjoint());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);

  ExperimentReport r;
  r.kind = "completeness";
  r.params = g.to_json();
  r.set("diagonal_deviation", diag_dev);
  r.set("offdiagonal_max", off);
  r.set("deviation", identity_deviation(c.weighted));
  r.set("hermiticity_error", (c.weighted - c.weighted.adjoint()).cwiseAbs().maxCoeff());
  r.set("min_eigenvalue", es.eigenvalues().minCoeff());
  r.set("parity_residual", c.parity_gap.cwiseAbs().maxCoeff());
  r.set("unweighted_diagonal_deviation", raw_dev);
  r.set("unweighted_diagonal_mean", raw_mean);
  r.set("inverse_weight", 1.0 / s2);
  r.set("unweighted_mean_ratio_error", std::abs(raw_mean * s2 - 1.0));
  r.require_at_most("diagonal_deviation", 0.05);
  r.require_at_most("offdiagonal_max", 0.05);
  r.require_at_most("hermiticity_error", 1e-12);
  r.require_at_least("min_eigenvalue", -1e-10);
  r.require_at_most("parity_residual", 1e-12);
  r.require_at_most("unweighted_mean_ratio_error", 0.05);
  // Without sin(2 theta) the diagonal check must fail wherever the weight differs from 1.
  if (std::abs(1.0 / s2 - 1.0) > 0.1) r.require_at_least("unweighted_diagonal_deviation", 0.05);

  if (g.refine) {
    const double coarse = identity_deviation(c.weighted);
    const double fine = identity_deviation(completeness_matrix(g, 2).weighted);
    if (fine > coarse + kGridConvergence)
      throw GridTooCoarse("halving the spacing raised the deviation from " + fmt_double(coarse) + " to " +
                          fmt_double(fine));
    r.set("refined_deviation", fine);
    r.set("refinement_change", std::abs(fine - coarse));
    r.require_at_most("refinement_change", kGridConvergence);
  }
  r.evaluate();
  return r;
}

std::vector<EtaPair> default_orthogonality_pairs() {
  auto P = [](Complex a, Complex b) { return EtaPair{ComplexLabel(a), ComplexLabel(b)}; };
  return {P({0.0, 0.0}, {0.5, 0.0}),  P({0.0, 0.0}, {0.0, 0.5}),   P({0.5, 0.0}, {-0.5, 0.0}),
          P({0.3, 0.2}, {-0.1, 0.4}), P({1.0, 0.0}, {0.0, 0.5}),   P({0.1, 0.0}, {0.0, 0.0})};
}

double normalized_overlap(const EtaPair& pair, double theta, int cutoff, bool* used_fock) {
  const GaussianKet ket = make_eta_theta_state(pair.eta, theta);
  const GaussianKet bra = make_eta_theta_state(pair.eta_prime, theta);
  const FockVector u = fock_expand(ket, cutoff), v = fock_expand(bra, cutoff);
  const double scale = std::sqrt(inner(u, u).real() * inner(v, v).real());
  try {
    const Complex exact = overlap(bra, ket);
    if (used_fock) *used_fock = false;
    return std::abs(exact) / scale;
  } catch (const DivergentOverlap&) {
    if (used_fock) *used_fock = true;
    return std::abs(inner(v, u)) / scale;
  }
}

double orthogonality_identity_ratio(const EtaPair& pair, double theta, int cutoff) {
  require_open_angle(theta);
  const double s2 = std::sin(2.0 * theta), c2 = std::cos(2.0 * theta);
  const FockVector u = fock_expand(make_eta_theta_state(pair.eta, theta), cutoff);
  const FockVector v = fock_expand(make_eta_theta_state(pair.eta_prime, theta), cutoff);
  // O = s2 a1 - c2 a2 - a2^dag has O|eta> = eta s2 |eta> and O^dag|eta'> = eta'^* s2 |eta'>.
  auto O = [&](const FockVector& x) {
    return Eigen::VectorXcd(s2 * apply_ladder(Mode::One, Ladder::Annihilate, x).amplitudes() -
                            c2 * apply_ladder(Mode::Two, Ladder::Annihilate, x).amplitudes() -
                            apply_ladder(Mode::Two, Ladder::Create, x).amplitudes());
  };
  auto Odag = [&](const FockVector& x) {
    return Eigen::VectorXcd(s2 * apply_ladder(Mode::One, Ladder::Create, x).amplitudes() -
                            c2 * apply_ladder(Mode::Two, Ladder::Create, x).amplitudes() -
                            apply_ladder(Mode::Two, Ladder::Annihilate, x).amplitudes());
  };
  const Eigen::VectorXcd r = O(u) - (pair.eta.eta() * s2) * u.amplitudes();
  const Eigen::VectorXcd rp = Odag(v) - (std::conj(pair.eta_prime.eta()) * s2) * v.amplitudes();
  const Complex lhs = s2 * (pair.eta.eta() - pair.eta_prime.eta()) * inner(v, u);
  const double bound = r.norm() * v.norm() + u.norm() * rp.norm();
  return bound > 0.0 ? std::abs(lhs) / bound : std::abs(lhs);
}

namespace {

// (sin2theta/2pi) sum d eta1 d eta2 <eta'|eta>_N <eta|00> / <eta'|00>; the delta kernel gives 1.
double delta_mass_ratio(const ComplexLabel& eta_prime, double theta, int cutoff) {
  const GridSpec g;
  const int n = g.half_width();
  const double h = g.spacing;
  const FockVector v = fock_expand(make_eta_theta_state(eta_prime, theta), cutoff);
  Complex sum = 0.0;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) {
      const FockVector u = fock_expand(make_eta_theta_state(ComplexLabel(Complex(i * h, j * h)), theta), cutoff);
      sum += inner(v, u) * std::conj(u(0, 0));
    }
  // d eta1 d eta2 = 2 d(Re eta) d(Im eta).
  const Complex mass = std::sin(2.0 * theta) / (2.0 * kPi) * 2.0 * h * h * sum;
  return std::abs(mass / std::conj(v(0, 0)));
}

}  // namespace

ExperimentReport orthogonality_scan(const OrthogonalityConfig& cfg) {
  require_open_angle(cfg.theta);
  if (cfg.cutoffs.empty()) throw InvalidArgument("orthogonality scan needs at least one cutoff");
  for (int n : cfg.cutoffs)
    if (n < 1) throw InvalidArgument("cutoffs must be positive");
  ExperimentReport r;
  r.kind = "orthogonality";
  Json pairs = Json::array();
  for (const EtaPair& p : cfg.pairs) {
    if (p.eta.eta() == p.eta_prime.eta()) throw InvalidArgument("orthogonality pairs need eta' != eta");
    pairs.push_back(Json{{"eta", label_json(p.eta)}, {"eta_prime", label_json(p.eta_prime)}});
  }
  r.params = Json{{"theta", cfg.theta}, {"cutoffs", cfg.cutoffs}, {"pairs", pairs}};

  for (std::size_t k = 0; k < cfg.pairs.size(); ++k) {
    const std::string key = "pair" + std::to_string(k);
    double prev = 0.0, ratio = 0.0;
    int rises = 0, fock_route = 0;
    for (std::size_t c = 0; c < cfg.cutoffs.size(); ++c) {
      bool used_fock = false;
      const double o = normalized_overlap(cfg.pairs[k], cfg.theta, cfg.cutoffs[c], &used_fock);
      r.set(key + ".overlap.N" + std::to_string(cfg.cutoffs[c]), o);
      if (c > 0 && o >= prev) ++rises;
      prev = o;
      fock_route += used_fock ? 1 : 0;
      ratio = std::max(ratio, orthogonality_identity_ratio(cfg.pairs[k], cfg.theta, cfg.cutoffs[c]));
    }
    r.set(key + ".non_decreasing_steps", rises);
    r.set(key + ".identity_ratio", ratio);
    r.set(key + ".fock_route", fock_route);
    r.require_at_most(key + ".non_decreasing_steps", 0.0);
    r.require_at_most(key + ".identity_ratio", 1.0 + 1e-12);
  }
  // Trend only: no tolerance on the finite-cutoff delta scaling.
  if (!cfg.pairs.empty())
    for (int n : cfg.cutoffs)
      r.set("delta_mass_ratio.N" + std::to_string(n), delta_mass_ratio(cfg.pairs.front().eta_prime, cfg.theta, n));
  r.evaluate();
  return r;
}

Json SuiteReport::body() const {
  Json ex = Json::array();
  for (const ExperimentReport& e : experiments) ex.push_back(e.to_json());
  return Json{{"suite_version", suite_version}, {"config", config}, {"experiments", ex}, {"overall_pass", overall_pass}};
}

std::string SuiteReport::content_hash() const { return fnv1a_hex(body().dump()); }

std::string SuiteReport::to_json() const {
  Json j = body();
  j["content_hash"] = content_hash();
  return j.dump(2) + "\n";
}

SuiteReport assemble_report(std::vector<ExperimentReport> experiments, Json config) {
  SuiteReport s;
  s.config = std::move(config);
  s.experiments = std::move(experiments);
  s.overall_pass = std::all_of(s.experiments.begin(), s.experiments.end(),
                               [](const ExperimentReport& e) { return e.pass; });
  return s;
}

}  // namespace cvbs
