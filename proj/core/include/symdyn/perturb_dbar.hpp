#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "symdyn/entropy.hpp"

namespace symdyn {

/// Noise law mu_0(0) = 1 - eps, mu_0(i) = eps / s.
struct NoiseParams {
  double eps = 0.1;
  int s = 2;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

nlohmann::json noise_to_json(const NoiseParams& p);
NoiseParams noise_from_json(const nlohmann::json& j);

/// Draws c ~ mu_0 independently per site and overwrites x where c != 0.
Configuration perturb(const Configuration& x, const NoiseParams& p);
/// Same on the X factor of a product-alphabet configuration; Y is untouched.
Configuration perturb_joint(const Configuration& z, int l, const NoiseParams& p);

struct PerturbationReport {
  double distance = 0.0;        // metric_measures(before, after)
  double distance_limit = 0.0;  // 2 eps + 0.02
  double h_before = 0.0;        // X-marginal entropy estimates
  double h_after = 0.0;
  double h_required = 0.0;      // h_before + eps (log s - h_before) - 0.05
  double y_drift = 0.0;         // total variation of the Y tables, depth n
  bool distance_ok = false;
  bool entropy_ok = false;
  bool marginal_ok = false;
  bool pass() const { return distance_ok && entropy_ok && marginal_ok; }
};

/// Entropies are difference quotients of the X-marginal block entropies at
/// depth n; the metric runs over depths 1..n.
PerturbationReport verify_perturbation_bounds(const EmpiricalMeasure& before, const EmpiricalMeasure& after,
                                              const NoiseParams& p, int n);

/// A coupling of two block distributions, stored sparsely.
struct CouplingTable {
  std::map<BlockKey, double> first;   // declared marginals
  std::map<BlockKey, double> second;
  std::map<std::pair<BlockKey, BlockKey>, double> mass;

  /// Nonnegative entries whose row/column sums match the marginals within tol.
  void validate(double tol = 1e-9) const;
};

struct DbarResult {
  double value = 0.0;     // min expected fraction of disagreeing sites
  double tv_bound = 0.0;  // TV(depth n) / |F_n|, a lower bound on value
  CouplingTable coupling;
};

/// Exact optimal plain coupling of the depth-n tables under normalized
/// Hamming cost. Tables with counts are matched on exact integers.
DbarResult dbar_estimate(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2, int n);

struct Agreement {
  double diagonal = 0.0;                  // rho(union of A x A)
  std::map<BlockKey, double> deficits;    // mu_1(A) - rho(A x A)
};

/// `n` only names the depth the table was built at; it is not used otherwise.
Agreement joining_agreement(const CouplingTable& rho, int n);

/// Total variation distance of the depth-n tables.
double total_variation(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2, int n);

}  // namespace symdyn
