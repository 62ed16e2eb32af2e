#pragma once

#include <string>
#include <vector>

#include "symdyn/measure.hpp"

namespace symdyn {

/// A partition of the site alphabet: label_of[symbol] in 1..labels (index 0
/// unused). On a product alphabet z = (x-1)*l + y the P side reads x and the Q
/// side reads y.
struct Partition {
  std::string name;
  int labels = 0;
  std::vector<int> label_of;

  int operator()(Symbol z) const { return label_of[z]; }

  static Partition identity(int alphabet);
  static Partition x_side(int s, int l);
  static Partition y_side(int s, int l);
  /// Q^(t): Y symbols >= t merged into label t.
  static Partition y_truncated(int s, int l, int t);
};

/// Base-2 Shannon entropy; entries must be >= 0 and sum to 1 within 1e-9.
double partition_entropy(const std::vector<double>& dist);

/// H of the pushforward of the depth-n table under P applied site by site.
double block_entropy(const EmpiricalMeasure& m, const Partition& p, int n);

struct ProcessEntropy {
  double per_site = 0.0;             // H_n / |F_n|
  double block_entropy = 0.0;        // H_n
  double difference_quotient = 0.0;  // (H_n - H_{n-1}) / (|F_n| - |F_{n-1}|)
  int sites = 0;
};

ProcessEntropy process_entropy_estimate(const EmpiricalMeasure& m, const Partition& p, int n);

/// H(P at e | Q on F_n): sum over atoms B of the Q^{F_n} join of xi(B) H_B(P).
double conditional_entropy(const EmpiricalMeasure& joint, const Partition& p, const Partition& q, int n);
/// H(P at e, Q on F_n), the left side of the chain rule.
double pair_entropy(const EmpiricalMeasure& joint, const Partition& p, const Partition& q, int n);

/// eps^2 / 9 * 0.99 for 0 < eps < 1.
double delta_for_inclusion(double eps);

struct InclusionWitness {
  bool holds = false;
  /// xi(A symmetric-difference B_A) for every P label A (index label-1).
  std::vector<double> symmetric_difference;
  /// The Q^{F_n} atoms (as label keys) whose union is B_A.
  std::vector<std::vector<BlockKey>> unions;
};

/// P subset_eps Q^{F_n}: B_A collects the atoms whose dominating P label is A
/// (ties to the lowest label); holds iff xi(A sym-diff B_A) < eps for all A.
InclusionWitness approx_inclusion_check(const EmpiricalMeasure& joint, const Partition& p, const Partition& q,
                                        double eps, int n);

struct SmbReport {
  double mass = 0.0;   // total probability of depth-n blocks inside the band
  double lower = 0.0;  // 2^{-|F_n|(h+delta)}
  double upper = 0.0;  // 2^{-|F_n|(h-delta)}
  std::size_t blocks_in_band = 0;
  std::size_t blocks_total = 0;
  bool pass = false;   // mass >= 1 - delta
};

SmbReport smb_check(const EmpiricalMeasure& m, double h, double delta, int n);

/// min(2 delta / (h + 3 delta), delta / log2 s).
double smb_subset_eta(double delta, double h, int s);

struct RectangleRule {
  bool premise = false;     // integral of f < a b
  bool conclusion = false;  // mu{f >= a} < b
  bool holds() const { return !premise || conclusion; }
};

/// Finite-table rectangle rule: f >= 0 with weights summing to 1.
RectangleRule rectangle_rule(const std::vector<double>& f, const std::vector<double>& weights, double a, double b);

}  // namespace symdyn
