#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "symdyn/entropy.hpp"
#include "symdyn/markers.hpp"
#include "symdyn/quasitiling.hpp"

namespace symdyn {

struct CodecParams {
  double delta = 0.04;  // SMB slack
  double eta = 0.05;    // tiling slack
  int l = 3;            // Y truncation
  int k = 3;            // inclusion precision 1/k
  double eps_k = 0.4;
  double d_gap = 0.0;   // h_X - h_Y in bits
  int j_max = 2;        // marker occurrences tolerated in a candidate X-block
  int n0 = 1;
  double eps = 2.5;
  /// Proximity slack of the joint filter; negative means "use delta".
  double delta_prime = -1.0;

  double proximity() const { return delta_prime < 0.0 ? delta : delta_prime; }
  /// Every violated constraint, spelled out; empty when the parameters are usable.
  std::vector<std::string> violations(const Group& g, int s) const;
  /// Throws kInvalidArgument naming the first violated inequality.
  void validate(const Group& g, int s) const;

  friend bool operator==(const CodecParams&, const CodecParams&) = default;
};

nlohmann::json codec_params_to_json(const CodecParams& p);
CodecParams codec_params_from_json(const nlohmann::json& j);

/// The product law mu x nu on the alphabet z = (x-1) l + y.
class ProductLaw final : public BlockLaw {
 public:
  ProductLaw(const BlockLaw& x, const BlockLaw& y);
  int alphabet() const override { return x_->alphabet() * y_->alphabet(); }
  double probability(const Subset& domain, const BlockKey& key) const override;
  double log2_probability(const Subset& domain, const BlockKey& key) const override;

 private:
  std::pair<BlockKey, BlockKey> split(const BlockKey& key) const;
  const BlockLaw* x_;
  const BlockLaw* y_;
};

BlockKey combine_keys(const BlockKey& x, const BlockKey& y, int l);

enum class FilterSide { kX, kY, kJoint };

struct SmbFilter {
  double h = 0.0;
  double delta = 0.0;
  FilterSide side = FilterSide::kY;
  /// Joint side only: blocks must also satisfy d(block, law) < delta_prime,
  /// with the block read as a finite configuration of `group`.
  double delta_prime = 0.0;
  Group group{};
  MetricParams metric{2};
};

struct BlockFamily {
  Subset domain;
  std::vector<BlockKey> blocks;  // in candidate order, no repeats
  double mass = 0.0;             // law mass of the kept blocks
  bool empty() const { return blocks.empty(); }
};

/// Y: log2 p >= -|S|(h + delta). X: log2 p <= -|S|(h - delta). Joint: both,
/// plus the proximity condition.
bool passes_smb_filter(const BlockLaw& law, const Subset& s, const BlockKey& key, const SmbFilter& f);
/// Keeps the candidates passing the filter (duplicates dropped).
BlockFamily filter_blocks_smb(const BlockLaw& law, const Subset& s, const std::vector<BlockKey>& candidates,
                              const SmbFilter& f);
/// All blocks of the empirical table on S.
BlockFamily filter_blocks_smb(const EmpiricalMeasure& m, const Subset& s, const SmbFilter& f);

/// Stamp M_i on D, clear 1s where D g leaves S, then break every other marker
/// occurrence by turning its first 1 outside D into a 2. The result shows
/// exactly one marker, M_i at e. `i` is 1-based.
Block psi_transform(const Block& ap, const MarkerSet& m, int i);

struct CountingBound {
  bool holds = false;                 // s^|D| + sum_{i<=j} C(|S|,i) 2^i <= 2^{2 delta |S|}, exact
  bool size_condition = false;        // |D| < (delta / log2 s) |S|
  bool occurrence_condition = false;  // 2j/|S| + (j/|S|) log2(3|S|/j) <= delta
  double log2_lhs = 0.0;
};

/// delta is read as the decimal it prints as (shortest round trip), so the
/// comparison is an exact integer one: LHS^q <= 2^{2 p |S|} for delta = p/q.
CountingBound counting_bound_check(std::uint64_t s_size, std::uint64_t d_size, std::uint64_t j, int s, double delta);

struct Dictionary {
  Subset shape;
  int marker = 0;  // 1-based marker index of the shape's layer
  std::map<BlockKey, BlockKey> forward;  // B -> A
  std::map<BlockKey, BlockKey> inverse;  // A -> B
  BlockKey default_image;

  const BlockKey& image(const BlockKey& b) const;
  std::optional<BlockKey> preimage(const BlockKey& a) const;
  bool in_family(const BlockKey& b) const { return forward.count(b) != 0; }
  /// Injectivity and one marker per image; throws kInternal otherwise.
  void check(const MarkerSet& m, int s) const;
};

/// Marriage-lemma dictionary. Edges are (index into bfam, index into afam).
/// Degrees are checked first (kPrecondition naming the offending vertex);
/// the matching is an exact maximum matching over vertices in input order.
Dictionary build_dictionary(const Subset& shape, const std::vector<BlockKey>& bfam,
                            const std::vector<BlockKey>& afam,
                            const std::vector<std::pair<std::size_t, std::size_t>>& relation, std::size_t K);

nlohmann::json dictionary_to_json(const Dictionary& d, const Group& g);
Dictionary dictionary_from_json(const nlohmann::json& j);

/// What the decoder needs besides x-bar.
struct Codebook {
  MarkerSet markers;
  std::vector<int> k_list;  // marker i <-> F_{k_list[i-1]}
  int s = 0;
  int l = 0;
  std::vector<Dictionary> dicts;

  const Dictionary* find(const Subset& shape) const;
  /// 1-based marker index of a Folner index, 0 if absent.
  int marker_of(int folner_index) const;
};

nlohmann::json codebook_to_json(const Codebook& c);
Codebook codebook_from_json(const nlohmann::json& j);

/// Raw tiles whose disjointified shape does not contain D D are removed and the
/// rest disjointified again until every shape can host a marker.
struct MarkedTiling {
  Quasitiling raw;
  Quasitiling tiling;
  std::size_t dropped = 0;
};
MarkedTiling fit_markers(const Quasitiling& raw, const MarkerSet& m);

/// x-bar: Phi_S(y(T)) on every tile, 2 elsewhere.
Configuration encode(const Configuration& y, const Quasitiling& t, const Codebook& book);

struct DecodeResult {
  Quasitiling tiling;          // recovered from the markers
  Configuration y;             // decoded symbols, 0 where unknown
  std::vector<char> known;     // per window site
  double coverage = 0.0;       // fraction of sites decoded
  std::size_t tiles_decoded = 0;
};

DecodeResult decode(const Configuration& xbar, const Codebook& book);

struct VklReport {
  InclusionWitness p_in_q;
  InclusionWitness q_in_p;
  bool holds() const { return p_in_q.holds && q_in_p.holds; }
};

/// Q^(l) subset_{1/k} P and P subset_{1/k} Q^(l) on a product-alphabet joint.
VklReport vkl_check(const EmpiricalMeasure& joint, int k, int l, int n);

/// h_nu - (2 delta + 2 eta) log2 l.
double entropy_deficit_bound(double h_nu, double delta, double eta, int l);

/// Depth-0 joint of a target symbol (1..s) and a predictor label (1..labels),
/// read site by site. Sites with target 0 are skipped.
EmpiricalMeasure predictor_joint(const Group& g, const std::vector<Symbol>& target, int s,
                                 const std::vector<int>& predictor, int labels);

}  // namespace symdyn
