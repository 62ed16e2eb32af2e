#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "symdyn/block.hpp"
#include "symdyn/rng.hpp"
#include "symdyn/source.hpp"

namespace symdyn {

/// Marker system on D = D0 u {g_1..g_N}: M_i is 1 on D0 and at g_i, 2 at
/// every other g_j. |D0| is prime and the g_i avoid D0^2 with D0 g_i disjoint
/// from D0, which is what makes a marker locally unique once the surrounding
/// guard region D^-1 D \ D carries no symbol 1.
struct MarkerSet {
  Group group{};
  int alphabet = 2;
  double delta_m = 0.0;
  Subset d0;
  std::vector<Element> gs;
  Subset d;                   // D0 u {g_i}
  std::vector<Block> blocks;  // M_1..M_N, domain D
  Subset d_inv_d;             // D^-1 D (contains D since e is in D)
  Subset guard;               // D^-1 D \ D
  /// x with D x inside D^-1 D, x != e: the relative positions at which a
  /// second occurrence could hide inside the checked region.
  std::vector<Element> rival_offsets;

  std::size_t count() const { return blocks.size(); }
  /// Asserts every construction invariant; throws kInternal on violation.
  void check_invariants() const;
};

/// Least prime p with s^-p <= delta_m.
int marker_prime(int s, double delta_m);

/// Nonnegative-orthant elements ordered by max coordinate, then canonically.
std::vector<Element> orthant_enumeration(const Group& g, std::size_t count);

MarkerSet construct_markers(int n, double delta_m, int s, const Group& g);

/// Probability, under `law`, that D0 reads all 1s: the marker mass budget.
double marker_budget(const MarkerSet& m, const BlockLaw& law);

enum class MarkerVerdict { kHolds, kPremiseFailed, kViolated };

struct MarkerCheck {
  MarkerVerdict verdict = MarkerVerdict::kPremiseFailed;
  int marker = 0;                  // 1-based marker found at g (if any)
  std::optional<Element> offender; // position of a second occurrence
};

/// Local uniqueness at g: when C(Dg) = M_i and C has no 1 on (D^-1 D \ D) g,
/// no M_j occurs at any other h with D h inside (D^-1 D) g.
MarkerCheck verify_marker_uniqueness(const Configuration& c, const MarkerSet& m, const Element& g);
MarkerCheck verify_marker_uniqueness(const Block& c, const MarkerSet& m, const Element& g);

/// A configuration meeting the uniqueness premise at g: uniform symbols,
/// M_i stamped on D g, every 1 on the guard region redrawn from 2..s.
Configuration sample_marker_premise(const MarkerSet& m, const Window& w, const Element& g, int i, Rng& rng);

struct MarkerHit {
  Element position;
  int marker = 0;  // 1-based

  friend bool operator==(const MarkerHit&, const MarkerHit&) = default;
};

/// All g with D g inside the domain and C(D g) = M_i, in canonical order.
std::vector<MarkerHit> find_marker_occurrences(const Configuration& c, const MarkerSet& m);
std::vector<MarkerHit> find_marker_occurrences(const Block& c, const MarkerSet& m);

nlohmann::json markers_to_json(const MarkerSet& m);
MarkerSet markers_from_json(const nlohmann::json& j);

}  // namespace symdyn
