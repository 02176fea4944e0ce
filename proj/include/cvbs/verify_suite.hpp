#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cvbs/common.hpp"

namespace cvbs {

using Json = nlohmann::ordered_json;

// Square grid of cell centres k*h, |k| <= R/h, in the (Re eta, Im eta) plane.
// Probed subspace: n1 + n2 <= cutoff - guard.
struct GridSpec {
  double radius = 4.0;
  double spacing = 0.25;
  double theta = kPi / 4;
  int cutoff = 24;
  int guard = 20;
  double weight_scale = 1.0;  // multiplies the sin(2 theta) weight; 1 is the claim under test
  bool refine = true;         // also evaluate with every cell split 2x2

  int half_width() const;     // R/h; throws InvalidArgument unless integral within 1e-9
  int max_total() const { return cutoff - guard; }
  Json to_json() const;
};

void validate(const GridSpec& g);

struct Check {
  enum class Kind { AtMost, AtLeast };
  std::string metric;
  Kind kind;
  double limit;

  bool holds(double value) const;
};

struct ExperimentReport {
  std::string kind;
  Json params = Json::object();
  std::map<std::string, double> metrics;
  std::vector<Check> checks;
  bool pass = false;

  void set(const std::string& name, double value) { metrics[name] = value; }
  void require_at_most(const std::string& metric, double limit);
  void require_at_least(const std::string& metric, double limit);
  // Recomputes pass from metrics and checks; a missing or non-finite metric fails.
  bool evaluate();
  Json to_json() const;
  // Inverse of to_json; pass is recomputed and must agree with the stored flag.
  static ExperimentReport from_json(const Json& j);
};

struct CompletenessMatrix {
  Eigen::MatrixXcd weighted;    // subspace block of sum w |eta,theta><eta,theta|
  Eigen::MatrixXcd unweighted;  // same sum with the sin(2 theta) factor removed
  Eigen::MatrixXcd parity_gap;  // half-plane Re eta > 0 minus the mirrored half
};

// Subspace block for the grid; `subdivide` splits every cell into s x s midpoints.
CompletenessMatrix completeness_matrix(const GridSpec& g, int subdivide = 1);

// max |C - I| on the probed subspace.
double identity_deviation(const Eigen::MatrixXcd& c);

// Throws GridTooCoarse if refining the grid raises the deviation by more than 1e-3.
ExperimentReport completeness_scan(const GridSpec& g);

struct EtaPair {
  ComplexLabel eta;
  ComplexLabel eta_prime;
};

std::vector<EtaPair> default_orthogonality_pairs();

struct OrthogonalityConfig {
  double theta = kPi / 3;
  std::vector<EtaPair> pairs = default_orthogonality_pairs();
  std::vector<int> cutoffs = {24, 40, 56};
};

// |<eta',theta|eta,theta>| / sqrt(<eta|eta><eta'|eta'>), exponent form when the overlap
// converges, truncated Fock otherwise.
double normalized_overlap(const EtaPair& pair, double theta, int cutoff, bool* used_fock = nullptr);

// |sin2theta (eta - eta') <eta'|eta>_N| over the bound ||r|| ||psi'|| + ||psi|| ||r'||,
// r and r' the truncated eigen-relation remainders on either side; never above 1.
double orthogonality_identity_ratio(const EtaPair& pair, double theta, int cutoff);

ExperimentReport orthogonality_scan(const OrthogonalityConfig& cfg);

struct SuiteReport {
  std::string suite_version = "1";
  Json config = Json::object();
  std::vector<ExperimentReport> experiments;
  bool overall_pass = true;

  Json body() const;            // everything except the hash
  std::string content_hash() const;
  std::string to_json() const;  // body plus content_hash, two-space indent, trailing newline
};

SuiteReport assemble_report(std::vector<ExperimentReport> experiments, Json config = Json::object());

}  // namespace cvbs
