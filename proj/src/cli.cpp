#include "cvbs/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cvbs/entangled_states.hpp"
#include "cvbs/errors.hpp"
#include "cvbs/fock.hpp"
#include "cvbs/format.hpp"
#include "cvbs/squeezer.hpp"
#include "cvbs/suites.hpp"
#include "cvbs/verify_suite.hpp"

namespace cvbs {

namespace {

class AngleParser {
 public:
  explicit AngleParser(const std::string& s) : s_(s) {}

  double parse() {
    const double v = product();
    skip();
    if (i_ != s_.size()) fail();
    if (!std::isfinite(v)) throw InvalidArgument("angle '" + s_ + "' is not finite");
    return v;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool at_pi() const { return s_.compare(i_, 2, "pi") == 0 || s_.compare(i_, 2, "\xCF\x80") == 0; }
  [[noreturn]] void fail() const { throw InvalidArgument("cannot parse angle '" + s_ + "'"); }

  double product() {
    double v = unary();
    for (;;) {
      if (at_pi()) {
        v *= atom();  // "3pi", adjacent only
        continue;
      }
      skip();
      if (i_ < s_.size() && s_[i_] == '*') {
        ++i_;
        v *= unary();
      } else if (i_ < s_.size() && s_[i_] == '/') {
        ++i_;
        const double d = unary();
        if (d == 0.0) throw InvalidArgument("division by zero in angle '" + s_ + "'");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double unary() {
    skip();
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) {
      const bool neg = s_[i_++] == '-';
      const double v = unary();
      return neg ? -v : v;
    }
    return atom();
  }

  double atom() {
    skip();
    if (at_pi()) {
      i_ += 2;
      return kPi;
    }
    if (i_ < s_.size() && s_[i_] == '(') {
      ++i_;
      const double v = product();
      skip();
      if (i_ >= s_.size() || s_[i_] != ')') fail();
      ++i_;
      return v;
    }
    if (i_ >= s_.size() || !(std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) fail();
    const char* begin = s_.c_str() + i_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail();
    i_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

double parse_real(const std::string& text, const char* what) {
  try {
    return parse_angle(text);
  } catch (const InvalidArgument&) {
    throw InvalidArgument(std::string("cannot parse ") + what + " '" + text + "'");
  }
}

ComplexLabel parse_eta(const std::vector<std::string>& parts) {
  if (parts.size() != 2) throw InvalidArgument("--eta expects 're,im'");
  return ComplexLabel(Complex(parse_real(parts[0], "eta real part"), parse_real(parts[1], "eta imaginary part")));
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json label_json(const ComplexLabel& l) {
  return Json{{"re", l.eta().real()}, {"im", l.eta().imag()}, {"eta1", l.eta1()}, {"eta2", l.eta2()}};
}

Json ket_json(const GaussianKet& k) {
  Json F = Json::array();
  for (int i = 0; i < 2; ++i) F.push_back(Json::array({complex_json(k.F()(i, 0)), complex_json(k.F()(i, 1))}));
  return Json{{"c", complex_json(k.c())},
              {"w", Json::array({complex_json(k.w()(0)), complex_json(k.w()(1))})},
              {"F", F},
              {"normalization_class", to_string(k.normalization_class())},
              {"max_singular_value", k.max_singular_value()}};
}

// Appends the FNV-1a hash of the compact dump of everything else.
std::string with_hash(Json j) {
  const std::string h = fnv1a_hex(j.dump());
  j["content_hash"] = h;
  return j.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.close();
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Raw flag values; resolved after parsing so config files and flags share one path.
struct RawConfig {
  std::string theta = "pi/3";
  std::string lambda = "0.3";
  std::vector<std::string> eta = {"0.5", "0"};
  int cutoff = -1;
  int guard = -1;
  double grid_radius = 4.0;
  double grid_step = 0.25;
  std::string out;
  std::uint64_t seed = 1;
  std::vector<std::string> theta_grid;
  std::vector<std::string> lambda_grid;
};

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s;
}

void check_cutoffs(const RawConfig& r) {
  if (r.cutoff != -1 && r.cutoff < 1) throw InvalidArgument("--cutoff must be >= 1");
  if (r.guard < -1) throw InvalidArgument("--guard must be >= 0");
  if (r.cutoff >= 1 && r.guard >= r.cutoff) throw InvalidArgument("--guard must be below --cutoff");
}

SuiteOptions resolve_suite_options(const RawConfig& r) {
  check_cutoffs(r);
  SuiteOptions o;
  if (!r.theta_grid.empty()) o.theta_grid = parse_grid(join(r.theta_grid), 5);
  if (!r.lambda_grid.empty()) o.lambda_grid = parse_grid(join(r.lambda_grid), 10);
  for (double t : o.theta_grid) require_open_angle(t);
  o.theta = parse_angle(r.theta);
  require_open_angle(o.theta);
  o.lambda = parse_real(r.lambda, "lambda");
  o.eta = parse_eta(r.eta);
  o.cutoff = r.cutoff;
  o.guard = r.guard;
  GridSpec probe;
  probe.radius = r.grid_radius;
  probe.spacing = r.grid_step;
  probe.half_width();
  o.grid_radius = r.grid_radius;
  o.grid_step = r.grid_step;
  o.seed = r.seed;
  return o;
}

int cmd_state(const RawConfig& r, const std::string& kind, bool fock_dump, std::ostream& out) {
  check_cutoffs(r);
  Json config{{"command", "state"}, {"kind", kind}};
  std::optional<GaussianKet> ket;
  if (kind == "eta_theta") {
    const ComplexLabel eta = parse_eta(r.eta);
    const double theta = parse_angle(r.theta);
    config["eta"] = label_json(eta);
    config["theta"] = theta;
    ket = make_eta_theta_state(eta, theta);
  } else if (kind == "eta") {
    const ComplexLabel eta = parse_eta(r.eta);
    config["eta"] = label_json(eta);
    ket = make_eta_state(eta);
  } else {
    const double lambda = parse_real(r.lambda, "lambda"), theta = parse_angle(r.theta);
    config["lambda"] = lambda;
    config["theta"] = theta;
    ket = squeezed_vacuum(SqueezeParams::make(lambda, theta));
  }
  const int cutoff = r.cutoff > 0 ? r.cutoff : 24;
  config["fock_dump"] = fock_dump;
  if (fock_dump) config["cutoff"] = cutoff;
  Json j{{"config", config}, {"state", ket_json(*ket)}};
  if (fock_dump) j["fock"] = Json::parse(fock_to_json(fock_expand(*ket, cutoff)));
  write_output(r.out, with_hash(std::move(j)), out);
  return kExitPass;
}

int cmd_verify(const RawConfig& r, const std::string& suite, std::ostream& out, std::ostream& err) {
  const SuiteOptions o = resolve_suite_options(r);
  Json config{{"command", "verify"}, {"suite", suite}, {"options", o.to_json()}};
  const SuiteReport rep = assemble_report(run_suite(suite, o), config);
  write_output(r.out, rep.to_json(), out);
  std::ostream& log = r.out.empty() ? err : out;
  for (const ExperimentReport& e : rep.experiments) log << e.kind << ": " << (e.pass ? "PASS" : "FAIL") << "\n";
  log << "suite " << suite << ": " << (rep.overall_pass ? "PASS" : "FAIL") << " (" << rep.content_hash() << ")\n";
  return rep.overall_pass ? kExitPass : kExitNumericFailure;
}

int cmd_scan(const RawConfig& r, std::ostream& out) {
  check_cutoffs(r);
  const std::vector<double> thetas = parse_grid(r.theta_grid.empty() ? "pi/16..7pi/16:11" : join(r.theta_grid), 11);
  const std::vector<double> lambdas = parse_grid(r.lambda_grid.empty() ? "0..1:11" : join(r.lambda_grid), 11);
  for (double t : thetas) require_open_angle(t);
  const int fock_cutoff = r.cutoff > 0 ? r.cutoff : 0;
  std::vector<ScanRow> rows;
  for (double l : lambdas)
    for (double t : thetas) rows.push_back(scan_row(l, t, fock_cutoff));
  const std::string csv = scan_csv(rows);
  const bool all_pass = std::all_of(rows.begin(), rows.end(), [](const ScanRow& s) { return s.pass; });
  write_output(r.out, csv, out);
  if (!r.out.empty()) {
    // CSV stays a plain table; its config and hash travel in a sidecar.
    const Json meta{{"config", {{"command", "scan"}, {"theta_grid", thetas}, {"lambda_grid", lambdas},
                                {"fock_cutoff", fock_cutoff}}},
                    {"rows", rows.size()},
                    {"all_pass", all_pass},
                    {"content_hash", fnv1a_hex(csv)}};
    write_output(r.out + ".meta.json", meta.dump(2) + "\n", out);
  }
  return all_pass ? kExitPass : kExitNumericFailure;
}

int cmd_report(const RawConfig& r, const std::vector<std::string>& inputs, std::ostream& out, std::ostream& err) {
  std::vector<ExperimentReport> experiments;
  Json sources = Json::array();
  for (const std::string& path : inputs) {
    Json j;
    try {
      j = Json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("'" + path + "' is not JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("content_hash") || !j.contains("experiments"))
      throw InvalidArgument("'" + path + "' is not a suite report");
    const std::string stored = j["content_hash"].get<std::string>();
    j.erase("content_hash");
    if (fnv1a_hex(j.dump()) != stored) throw InvalidArgument("content hash mismatch in '" + path + "'");
    for (const Json& e : j["experiments"]) experiments.push_back(ExperimentReport::from_json(e));
    sources.push_back(stored);
  }
  const SuiteReport rep = assemble_report(std::move(experiments), Json{{"command", "report"}, {"sources", sources}});
  write_output(r.out, rep.to_json(), out);
  std::ostream& log = r.out.empty() ? err : out;
  log << "report: " << rep.experiments.size() << " experiments, " << (rep.overall_pass ? "PASS" : "FAIL") << "\n";
  return rep.overall_pass ? kExitPass : kExitNumericFailure;
}

}  // namespace

double parse_angle(const std::string& text) { return AngleParser(text).parse(); }

std::vector<double> parse_grid(const std::string& text, int default_count) {
  std::vector<double> out;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_angle(item));
    if (out.empty()) throw InvalidArgument("empty grid");
    return out;
  }
  std::string hi = text.substr(dots + 2);
  int count = default_count;
  if (const auto colon = hi.find(':'); colon != std::string::npos) {
    const std::string n = hi.substr(colon + 1);
    char* end = nullptr;
    const long v = std::strtol(n.c_str(), &end, 10);
    if (n.empty() || *end != '\0' || v < 1 || v > 100000) throw InvalidArgument("bad grid count in '" + text + "'");
    count = static_cast<int>(v);
    hi = hi.substr(0, colon);
  }
  const double a = parse_angle(text.substr(0, dots)), b = parse_angle(hi);
  for (int k = 0; k < count; ++k) out.push_back(count == 1 ? a : a + (b - a) * k / (count - 1));
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entangled-state and squeezing-operator verifier", "cvbs"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  RawConfig raw;
  app.add_option("--theta", raw.theta, "angle in radians, e.g. 1.0472 or pi/3")->capture_default_str();
  app.add_option("--lambda", raw.lambda, "squeezing parameter")->capture_default_str();
  app.add_option("--eta", raw.eta, "complex eta as 're,im'")->delimiter(',')->expected(2)->capture_default_str();
  app.add_option("--cutoff", raw.cutoff, "Fock cutoff per mode (-1: command default)")->capture_default_str();
  app.add_option("--guard", raw.guard, "guard width (-1: command default)")->capture_default_str();
  app.add_option("--grid-radius", raw.grid_radius, "completeness grid half-width")->capture_default_str();
  app.add_option("--grid-step", raw.grid_step, "completeness grid spacing")->capture_default_str();
  app.add_option("--out", raw.out, "output file (default: stdout)");
  app.add_option("--seed", raw.seed, "seed for randomized samples")->capture_default_str();
  app.add_option("--theta-grid", raw.theta_grid, "'lo..hi[:n]' or comma list of angles")->delimiter(',');
  app.add_option("--lambda-grid", raw.lambda_grid, "'lo..hi[:n]' or comma list")->delimiter(',');

  CLI::App* state = app.add_subcommand("state", "print a state in exponent form")->fallthrough();
  bool eta_theta = false, eta_state = false, squeezed = false, fock_dump = false;
  state->add_flag("--eta-theta", eta_theta, "|eta, theta>");
  state->add_flag("--eta-state", eta_state, "|eta>");
  state->add_flag("--squeezed-vacuum", squeezed, "U^-1 |00> at (lambda, theta)");
  state->add_flag("--fock-dump", fock_dump, "include Fock amplitudes up to --cutoff (default 24)");

  CLI::App* verify = app.add_subcommand("verify", "run verification suites")->fallthrough();
  std::string suite = "all";
  verify->add_option("--suite", suite, "suite name")
      ->check(CLI::IsMember(suite_names()))
      ->capture_default_str();

  CLI::App* scan = app.add_subcommand("scan", "tabulate S, phi and variances over a (lambda, theta) grid")->fallthrough();

  CLI::App* report = app.add_subcommand("report", "merge suite reports after checking their hashes")->fallthrough();
  std::vector<std::string> inputs;
  report->add_option("inputs", inputs, "suite report JSON files")->required()->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (state->parsed()) {
      if (eta_theta + eta_state + squeezed != 1)
        throw InvalidArgument("choose exactly one of --eta-theta, --eta-state, --squeezed-vacuum");
      return cmd_state(raw, eta_theta ? "eta_theta" : eta_state ? "eta" : "squeezed_vacuum", fock_dump, out);
    }
    if (verify->parsed()) return cmd_verify(raw, suite, out, err);
    if (scan->parsed()) return cmd_scan(raw, out);
    return cmd_report(raw, inputs, out, err);
  } catch (const InvalidArgument& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const DegenerateAngle& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitNumericFailure;
  }
}

}  // namespace cvbs
