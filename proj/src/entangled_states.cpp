#include "cvbs/entangled_states.hpp"

#include <algorithm>
#include <cmath>

#include "cvbs/errors.hpp"
#include "json.hpp"

namespace cvbs {

double scattering_deviation(const ScatteringMatrix& sm) {
  const double d[5] = {
      std::abs(std::abs(sm.r_prime) - std::abs(sm.r)),
      std::abs(std::abs(sm.t_prime) - std::abs(sm.t)),
      std::abs(std::norm(sm.r) + std::norm(sm.t) - 1.0),
      std::abs(std::conj(sm.r) * sm.t_prime + sm.r_prime * std::conj(sm.t)),
      std::abs(std::conj(sm.r) * sm.t + sm.r_prime * std::conj(sm.t_prime)),
  };
  return *std::max_element(d, d + 5);
}

bool check_scattering_matrix(const ScatteringMatrix& sm) { return scattering_deviation(sm) <= 1e-12; }

ScatteringMatrix scattering_of_b_operator(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  // B a1 B^-1 = c a1 - s a2, B a2 B^-1 = s a1 + c a2.
  return ScatteringMatrix{c, -s, c, s};
}

GaussianKet tensor(const GaussianKet& mode1, const GaussianKet& mode2) {
  if (mode1.w()(1) != Complex(0.0) || mode1.F()(0, 1) != Complex(0.0) ||
      mode1.F()(1, 1) != Complex(0.0) || mode2.w()(0) != Complex(0.0) ||
      mode2.F()(0, 1) != Complex(0.0) || mode2.F()(0, 0) != Complex(0.0))
    throw InvalidArgument("tensor factors must each act on a single mode");
  Vec2c w(mode1.w()(0), mode2.w()(1));
  Mat2c F = Mat2c::Zero();
  F(0, 0) = mode1.F()(0, 0);
  F(1, 1) = mode2.F()(1, 1);
  return GaussianKet(mode1.c() * mode2.c(), w, F);
}

namespace {

GaussianKet single_mode(Complex c, Complex w, Complex f, Mode mode) {
  const int m = mode_index(mode);
  Vec2c wv = Vec2c::Zero();
  Mat2c F = Mat2c::Zero();
  wv(m) = w;
  F(m, m) = f;
  return GaussianKet(c, wv, F);
}

}  // namespace

GaussianKet make_x_eigenket(double x, Mode mode) {
  return single_mode(std::pow(kPi, -0.25) * std::exp(-0.5 * x * x), std::sqrt(2.0) * x, -1.0, mode);
}

GaussianKet make_p_eigenket(double p, Mode mode) {
  return single_mode(std::pow(kPi, -0.25) * std::exp(-0.5 * p * p), Complex(0.0, std::sqrt(2.0) * p),
                     1.0, mode);
}

GaussianKet make_eta_state(const ComplexLabel& label) {
  const Complex eta = label.eta();
  Mat2c F;
  F << 0.0, 1.0, 1.0, 0.0;
  return GaussianKet(std::exp(-0.5 * std::norm(eta)), Vec2c(eta, -std::conj(eta)), F);
}

GaussianKet make_eta_theta_state(const ComplexLabel& label, double theta) {
  require_open_angle(theta);
  const Complex eta = label.eta();
  const Complex ec = std::conj(eta);
  const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
  Mat2c F;
  F << c2, s2, s2, -c2;
  return GaussianKet(std::exp(-0.5 * std::norm(eta) + 0.5 * ec * ec * c2),
                     Vec2c(eta - ec * c2, -ec * s2), F);
}

GaussianKet make_eta_theta_via_beamsplitter(const ComplexLabel& label, double theta) {
  require_open_angle(theta);
  const GaussianKet input = tensor(make_p_eigenket(0.0, Mode::One), make_x_eigenket(0.0, Mode::Two));
  const GaussianKet mixed = apply_beamsplitter(input, theta);
  return scale(apply_displacement(mixed, Mode::One, label), std::sqrt(kPi));
}

double ResidualReport::max_residual() const {
  double m = 0.0;
  for (const auto& [name, r] : residuals) m = std::max(m, r);
  return m;
}

std::string ResidualReport::to_json() const {
  nlohmann::ordered_json j;
  j["eta"] = {eta.real(), eta.imag()};
  j["theta"] = theta;
  j["cutoff"] = cutoff;
  j["guard"] = guard;
  nlohmann::ordered_json r = nlohmann::ordered_json::object();
  for (const auto& [name, v] : residuals) r[name] = v;
  j["residuals"] = std::move(r);
  j["pass"] = pass;
  return j.dump();
}

namespace {

struct Images {
  Eigen::VectorXcd a1, a2, c1, c2;
};

Images ladder_images(const FockVector& v) {
  return Images{apply_ladder(Mode::One, Ladder::Annihilate, v).amplitudes(),
                apply_ladder(Mode::Two, Ladder::Annihilate, v).amplitudes(),
                apply_ladder(Mode::One, Ladder::Create, v).amplitudes(),
                apply_ladder(Mode::Two, Ladder::Create, v).amplitudes()};
}

void finish(ResidualReport& rep) { rep.pass = rep.max_residual() < rep.tolerance; }

}  // namespace

ResidualReport verify_eta_theta_relations(const ComplexLabel& label, double theta, int cutoff,
                                          int guard) {
  require_open_angle(theta);
  const FockVector psi = fock_expand(make_eta_theta_state(label, theta), cutoff);
  const Images im = ladder_images(psi);
  const Complex eta = label.eta(), ec = std::conj(eta);
  const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta), t = std::tan(theta);
  const double r2 = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  // X = (a + a^dag)/sqrt2, P = -i (a - a^dag)/sqrt2.
  const Eigen::VectorXcd x1 = r2 * (im.a1 + im.c1), x2 = r2 * (im.a2 + im.c2);
  const Eigen::VectorXcd p1 = -i * r2 * (im.a1 - im.c1), p2 = -i * r2 * (im.a2 - im.c2);

  ResidualReport rep{.eta = eta, .theta = theta, .cutoff = cutoff, .guard = guard, .residuals = {}};
  auto add = [&](const char* key, const Eigen::VectorXcd& image, Complex ev) {
    rep.residuals.emplace_back(key, guarded_residual(FockVector(cutoff, image), psi, ev, guard));
  };
  add("eq13", im.a1 - s2 * im.c2 - c2 * im.c1, eta - ec * c2);
  add("eq14", im.a2 - s2 * im.c1 + c2 * im.c2, -ec * s2);
  add("eq15", s2 * im.a1 - c2 * im.a2 - im.c2, eta * s2);
  add("eq16", c2 * im.a1 + s2 * im.a2 - im.c1, eta * c2 - ec);
  add("eq17", x2 - t * x1, -label.eta1() * t);
  add("eq18", p1 + t * p2, label.eta2());
  finish(rep);
  return rep;
}

ResidualReport verify_eta_relations(const ComplexLabel& label, int cutoff, int guard) {
  const FockVector psi = fock_expand(make_eta_state(label), cutoff);
  const Images im = ladder_images(psi);
  const Complex eta = label.eta();
  const double r2 = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  ResidualReport rep{.eta = eta, .theta = kPi / 4, .cutoff = cutoff, .guard = guard, .residuals = {}};
  auto add = [&](const char* key, const Eigen::VectorXcd& image, Complex ev) {
    rep.residuals.emplace_back(key, guarded_residual(FockVector(cutoff, image), psi, ev, guard));
  };
  add("eq6a", im.a1 - im.c2, eta);
  add("eq6b", im.a2 - im.c1, -std::conj(eta));
  add("eq7", r2 * (im.a1 + im.c1 - im.a2 - im.c2), label.eta1());
  add("eq8", -i * r2 * (im.a1 - im.c1 + im.a2 - im.c2), label.eta2());
  finish(rep);
  return rep;
}

RotationFidelities rotation_fidelities(const ComplexLabel& eta, double theta, int cutoff) {
  require_open_angle(theta);
  const FockVector base = fock_expand(make_eta_state(eta), cutoff);
  const FockVector target = fock_expand(make_eta_theta_state(eta, theta), cutoff);
  Mat2c plus, minus;
  plus << 0.0, theta, theta, 0.0;
  minus << 0.0, theta, -theta, 0.0;
  return RotationFidelities{fidelity(apply_one_body_exp(plus, base), target),
                            fidelity(apply_one_body_exp(minus, base), target)};
}

double verify_not_rotated(const ComplexLabel& eta, double theta, int cutoff) {
  require_open_angle(theta);
  if (std::abs(theta - kPi / 4) < 1e-12) throw InvalidArgument("theta = pi/4 is excluded");
  if (eta.eta() == Complex(0.0)) throw InvalidArgument("eta = 0 is excluded");
  const RotationFidelities f = rotation_fidelities(eta, theta, cutoff);
  return 1.0 - std::max(f.plus, f.minus);
}

}  // namespace cvbs
