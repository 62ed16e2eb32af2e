#pragma once

#include <cmath>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "symdyn/block.hpp"
#include "symdyn/rng.hpp"

namespace symdyn {

/// Anything that assigns probabilities to cylinders: exact source models and
/// empirical block tables alike.
class BlockLaw {
 public:
  virtual ~BlockLaw() = default;
  virtual int alphabet() const = 0;
  /// Probability of the cylinder with the given symbols on `domain`. The key
  /// lists symbols in canonical order of the domain.
  virtual double probability(const Subset& domain, const BlockKey& key) const = 0;
  /// log2 of the same; exact laws override it so large domains do not underflow.
  virtual double log2_probability(const Subset& domain, const BlockKey& key) const {
    return std::log2(probability(domain, key));
  }
};

/// A stationary random field on a window. Bernoulli sources are iid; Markov
/// sources run independent stationary chains along the last coordinate (so on
/// Z they are ordinary Markov chains; on Z^2 every column is one chain).
struct SourceSpec {
  enum class Kind { kConstant, kBernoulli, kMarkov };

  Kind kind = Kind::kBernoulli;
  std::vector<double> probs;                     // Bernoulli weights over 1..s
  std::vector<std::vector<double>> transition;   // Markov rows over 1..s
  int constant_symbol = 1;
  int constant_alphabet = 2;

  static SourceSpec bernoulli(std::vector<double> p);
  static SourceSpec markov(std::vector<std::vector<double>> rows);
  static SourceSpec constant(int symbol, int alphabet);

  int alphabet() const;
  void validate() const;
  /// Site marginal (stationary distribution for Markov).
  std::vector<double> marginal() const;
  /// Exact entropy rate in bits per site.
  double entropy_rate() const;

  Configuration sample(const Window& w, Rng& rng) const;

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

nlohmann::json source_to_json(const SourceSpec& s);
SourceSpec source_from_json(const nlohmann::json& j);

/// Exact cylinder probabilities of a SourceSpec.
class SourceLaw final : public BlockLaw {
 public:
  SourceLaw(SourceSpec spec, Group group);
  int alphabet() const override { return spec_.alphabet(); }
  double probability(const Subset& domain, const BlockKey& key) const override;
  double log2_probability(const Subset& domain, const BlockKey& key) const override;
  const SourceSpec& spec() const { return spec_; }

 private:
  template <typename Visit>
  void for_each_factor(const Subset& domain, const BlockKey& key, Visit&& visit) const;

  SourceSpec spec_;
  Group group_;
  std::vector<double> marginal_;
};

/// Entropy in bits of a probability vector, 0 log 0 = 0.
double entropy_bits(const std::vector<double>& p);

}  // namespace symdyn
