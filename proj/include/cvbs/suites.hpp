#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvbs/common.hpp"
#include "cvbs/verify_suite.hpp"

namespace cvbs {

// Parameters shared by the verification experiments. A cutoff or guard of -1
// selects each experiment's own default.
struct SuiteOptions {
  std::vector<double> theta_grid = {kPi / 8, kPi / 6, kPi / 4, kPi / 3, 3 * kPi / 8};
  std::vector<double> lambda_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> eta_components = {-1.0, -0.5, 0.0, 0.5, 1.0};  // eta1 and eta2 values
  double theta = kPi / 3;
  double lambda = 0.3;
  ComplexLabel eta{Complex(0.5, 0.0)};
  int cutoff = -1;
  int guard = -1;
  double grid_radius = 4.0;
  double grid_step = 0.25;
  std::uint64_t seed = 1;

  Json to_json() const;
};

const std::vector<std::string>& suite_names();  // relations .. orthogonality, then all

// Each returns one report with the tolerances pinned by the acceptance targets.
ExperimentReport eigen_relations_experiment(const SuiteOptions& o);      // cutoff 48, guard 8
ExperimentReport quarter_pi_reduction_experiment(const SuiteOptions& o);
ExperimentReport non_rotation_experiment(const SuiteOptions& o);         // cutoff 40
ExperimentReport unitarity_experiment(const SuiteOptions& o);
ExperimentReport variance_experiment(const SuiteOptions& o);             // Fock cutoff 48
ExperimentReport squeeze_action_experiment(const SuiteOptions& o);       // cutoff 56, guard 10
ExperimentReport factorization_experiment(const SuiteOptions& o);        // cutoff 48, guard 10
std::vector<ExperimentReport> completeness_experiments(const SuiteOptions& o);   // pi/6, pi/4, pi/3
std::vector<ExperimentReport> orthogonality_experiments(const SuiteOptions& o);  // pi/6, pi/3
ExperimentReport asymptotics_experiment(const SuiteOptions& o);          // cutoff 48

// Throws InvalidArgument for an unknown suite name.
std::vector<ExperimentReport> run_suite(const std::string& name, const SuiteOptions& o);

}  // namespace cvbs
