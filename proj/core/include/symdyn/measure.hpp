#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "symdyn/source.hpp"

namespace symdyn {

/// Reference domain of a given depth: {e} at depth 0, F_n otherwise.
Subset depth_domain(const Group& g, int depth);

/// Block distribution on one reference domain. `counts` and `total` are kept
/// when the table came from a sample so couplings can work on exact integers.
struct BlockTable {
  int depth = 0;
  Subset domain;
  std::map<BlockKey, double> probs;
  std::map<BlockKey, std::uint64_t> counts;
  std::uint64_t total = 0;

  double probability(const BlockKey& k) const {
    auto it = probs.find(k);
    return it == probs.end() ? 0.0 : it->second;
  }
  bool has_counts() const { return total > 0; }
};

/// Counts every fully contained translate of `domain` in the configuration.
BlockTable count_blocks(const Configuration& c, const Subset& domain, int depth = -1);

struct MeasureSource {
  std::uint64_t window_size = 0;
  std::uint64_t seed = 0;
  std::string label;
};

struct MetricParams {
  int n_max = 6;
};

/// Block-frequency tables on depths 0..n_max. Product-alphabet measures (X x Y
/// with symbol z = (x-1)*l + y) record the factor sizes (s, l).
class EmpiricalMeasure final : public BlockLaw {
 public:
  EmpiricalMeasure() = default;
  EmpiricalMeasure(Group group, int alphabet, std::vector<BlockTable> tables);

  static EmpiricalMeasure from_configuration(const Configuration& c, int n_max, MeasureSource src = {});
  /// A depth-0 measure from an explicit site distribution over 1..alphabet.
  static EmpiricalMeasure from_site_distribution(const Group& g, const std::vector<double>& p);

  const Group& group() const { return group_; }
  int alphabet() const override { return alphabet_; }
  int n_max() const { return static_cast<int>(tables_.size()) - 1; }
  bool has_depth(int n) const { return n >= 0 && n <= n_max(); }
  const BlockTable& table(int depth) const;

  double probability(int depth, const BlockKey& key) const { return table(depth).probability(key); }
  double probability(const Subset& domain, const BlockKey& key) const override;

  const std::optional<std::pair<int, int>>& factors() const { return factors_; }
  void set_factors(int s, int l);
  const MeasureSource& source() const { return source_; }
  void set_source(MeasureSource s) { source_ = std::move(s); }

  /// Pushforward of every table under a symbol relabelling. `label_of` is
  /// indexed by symbol (entry 0 unused) and maps into 1..labels.
  EmpiricalMeasure relabel(const std::vector<int>& label_of, int labels) const;

  /// Largest |sum - 1| over tables (should be ~1e-15).
  double normalization_error() const;

 private:
  Group group_{};
  int alphabet_ = 0;
  std::vector<BlockTable> tables_;
  std::optional<std::pair<int, int>> factors_;
  MeasureSource source_;
};

nlohmann::json measure_to_json(const EmpiricalMeasure& m);
EmpiricalMeasure measure_from_json(const nlohmann::json& j);

/// Product-alphabet configuration z = (x-1)*l + y; both on the same window.
Configuration combine(const Configuration& x, const Configuration& y);
/// Inverse of combine on one factor.
Configuration project_x(const Configuration& z, int l);
Configuration project_y(const Configuration& z, int l);

/// sum_{n=1}^{n_max} 2^-n |B_n|^-1 sum_B |m1(B) - m2(B)|, |B_n| = s^{|F_n|}.
/// The tail beyond n_max is at most 2^{1-n_max}.
double metric_measures(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2, const MetricParams& p);
/// Same series with an exact law as the first argument. Mass the law puts on
/// blocks the sample never saw enters as 1 - sum over the sample's support.
double metric_measures(const BlockLaw& law, const EmpiricalMeasure& m, const MetricParams& p);

/// Series with fr_C(B) (normalized by |domain C|, boundary translates
/// excluded) in place of the second measure.
double metric_measure_block(const BlockLaw& m, const Configuration& c, const MetricParams& p);
double metric_measure_block(const BlockLaw& m, const Block& c, const Group& g, const MetricParams& p);

double metric_truncation_bound(const MetricParams& p);

struct SubsetFrequencyReport {
  enum class Status { kPass, kFail, kPremiseFailed };
  Status status = Status::kPremiseFailed;
  double avg_full = 0.0;  // average of 1_B(gx) over g in F
  double avg_sub = 0.0;   // same over F'
  double eta_limit = 0.0; // delta / (1 + 2 delta)
  std::string note;
};

/// Checks that a frequency close to mu_B over F stays within 2 delta over a
/// large subset F' of F.
SubsetFrequencyReport subset_frequency_bound_check(const Configuration& c, const Block& b, const Subset& f,
                                                   const Subset& fp, double mu_b, double delta);

}  // namespace symdyn
