#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "symdyn/block.hpp"

namespace symdyn {

struct Shape {
  Subset cells;
  int folner_index = 0;  // k such that cells is a large subset of F_k (0 if unknown)

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// A finite family of tiles S c inside a window. centers[i] lists the centers
/// of shape i in canonical order; center sets of different shapes are disjoint.
struct Quasitiling {
  Window window;
  std::vector<Shape> shapes;
  std::vector<std::vector<Element>> centers;

  std::size_t tile_count() const;
  /// Throws if a tile leaves the window or two tiles share a center.
  void validate() const;

  friend bool operator==(const Quasitiling&, const Quasitiling&) = default;
};

struct Tile {
  std::size_t shape = 0;
  Element center;
  Subset cells;
};

/// All tiles, ordered by center.
std::vector<Tile> tiles_of(const Quasitiling& t);
Subset tile_union(const Quasitiling& t);
std::vector<char> tile_mask(const Quasitiling& t);

struct TilingParams {
  double eta = 0.1;
  int K = 3;
  std::uint64_t seed = 0;
  /// Probability that a site is offered as a center on a given layer.
  double candidate_rate = 1.0;
  /// Explicit k_1 <= ... <= k_n; empty means k_i = K + i - 1.
  std::vector<int> k_list;
};

/// n = min{m : (1 - eta)^m < eta}.
int tiling_layers(double eta);
std::vector<int> tiling_indices(const TilingParams& p);

/// The configuration driving the construction: layers[i][site] != 0 offers
/// the site as a center on layer i (layer 0 has the smallest Folner index).
struct CandidateField {
  Window window;
  std::vector<std::vector<char>> layers;  // layers[i][site]
};

CandidateField random_candidates(const Window& w, const TilingParams& p);

/// Greedy layered construction followed by disjointify(). Layers are placed
/// from the largest Folner index down; within a layer candidate sites are
/// scanned in canonical order and a tile F_k g is kept when the part of it
/// already covered stays below eta |F_k| and no earlier tile's covered part
/// reaches eta of its size. The raw family is therefore eta-disjoint with a
/// loss budget that disjointify() can never exceed.
Quasitiling construct_raw_quasitiling(const CandidateField& field, const TilingParams& p);
Quasitiling construct_quasitiling(const Window& w, const TilingParams& p);
Quasitiling construct_quasitiling(const CandidateField& field, const TilingParams& p);

/// Default enumeration of F = union of shapes: e first, then canonical order.
std::vector<Element> default_enumeration(const Quasitiling& t);

/// Each element lying in several tiles goes to the tile T minimizing the
/// enumeration rank j_T of h c_T^{-1}; it is removed from the others.
/// Throws kPrecondition when two tiles covering h give it the same rank.
Quasitiling disjointify(const Quasitiling& t, const std::vector<Element>& enumeration);
Quasitiling disjointify(const Quasitiling& t);

struct DisjointWitness {
  bool holds = false;
  std::vector<Tile> reduced;  // T° per tile, same order as tiles_of()
};

/// Exists pairwise disjoint T° inside T with |T°| > (1 - eps)|T| for all T?
/// Uncontested cells are tried first; otherwise an exact max-flow decides.
DisjointWitness is_epsilon_disjoint(const Quasitiling& t, double eps);

double covering_density(const Quasitiling& t, int n);
/// Same, with the min taken only over translates inside the window shrunk by
/// `margin` on every side.
double interior_covering_density(const Quasitiling& t, int n, std::int64_t margin);

/// Symbol i at h iff a tile of shape i (1-based) is centered at h, else 0.
Configuration symbolic_encode(const Quasitiling& t);
Quasitiling symbolic_decode(const Configuration& code, const std::vector<Shape>& shapes);

nlohmann::json window_to_json(const Window& w);
Window window_from_json(const nlohmann::json& j);
nlohmann::json tiling_to_json(const Quasitiling& t);
Quasitiling tiling_from_json(const nlohmann::json& j);

}  // namespace symdyn
