#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "symdyn/quasitiling.hpp"
#include "symdyn/rng.hpp"

using namespace symdyn;

namespace {

const Group kZ = Group::parse("z");
const Group kZ2 = Group::parse("z2");

Subset interval(std::int64_t a, std::int64_t b) {
  std::vector<Element> v;
  for (auto i = a; i <= b; ++i) v.push_back(kZ.make({i}));
  return Subset(v);
}

int layers_oracle(double eta) {
  int m = 1;
  while (!(std::pow(1.0 - eta, m) < eta)) ++m;
  return m;
}

std::set<std::pair<Element, Subset>> tile_set(const Quasitiling& t) {
  std::set<std::pair<Element, Subset>> out;
  for (const auto& tile : tiles_of(t)) out.insert({tile.center, tile.cells});
  return out;
}

Quasitiling random_raw(std::uint64_t seed, const Window& w) {
  TilingParams p;
  p.eta = 0.1;
  p.K = 1;
  for (int i = 0; i < tiling_layers(p.eta); ++i) p.k_list.push_back(1 + i / 6);
  p.candidate_rate = 0.3;
  p.seed = seed;
  return construct_raw_quasitiling(random_candidates(w, p), p);
}

bool pairwise_disjoint(const Quasitiling& t) {
  std::vector<int> hits(t.window.size(), 0);
  for (const auto& tile : tiles_of(t))
    for (const auto& h : tile.cells)
      if (++hits[t.window.index(h)] > 1) return false;
  return true;
}

}  // namespace

TEST(Layers, FormulaValues) {
  EXPECT_EQ(tiling_layers(0.1), layers_oracle(0.1));
  EXPECT_EQ(tiling_layers(0.1), 22);
  EXPECT_EQ(tiling_layers(0.5), layers_oracle(0.5));
  EXPECT_EQ(tiling_layers(0.5), 2);
  EXPECT_EQ(tiling_layers(0.05), layers_oracle(0.05));
}

TEST(EpsilonDisjoint, DisjointTilesPassWithThemselves) {
  Quasitiling t{Window::cube(kZ, 20), {{interval(0, 4), 0}}, {{kZ.make({0}), kZ.make({5}), kZ.make({10})}}};
  // |T'| > 0.99|T| forces T' = T for these 5-cell tiles.
  const auto w = is_epsilon_disjoint(t, 0.01);
  EXPECT_TRUE(w.holds);
  const auto tiles = tiles_of(t);
  ASSERT_EQ(w.reduced.size(), tiles.size());
  for (std::size_t i = 0; i < tiles.size(); ++i) EXPECT_EQ(w.reduced[i].cells, tiles[i].cells);
}

TEST(EpsilonDisjoint, OverlapOfTwo) {
  Quasitiling t{Window::cube(kZ, 18), {{interval(0, 9), 0}}, {{kZ.make({0}), kZ.make({8})}}};
  const auto w = is_epsilon_disjoint(t, 0.25);
  ASSERT_TRUE(w.holds);
  EXPECT_TRUE(set_intersection(w.reduced[0].cells, w.reduced[1].cells).empty());
  for (const auto& r : w.reduced) EXPECT_GT(static_cast<double>(r.cells.size()), 0.75 * 10);
}

TEST(EpsilonDisjoint, IdenticalTilesFail) {
  // Both tiles cover {0..9}.
  Quasitiling t{Window::cube(kZ, 10), {{interval(0, 9), 0}, {interval(-5, 4), 0}}, {{kZ.make({0})}, {kZ.make({5})}}};
  EXPECT_FALSE(is_epsilon_disjoint(t, 0.25).holds);
}

TEST(Covering, GridAndEmpty) {
  std::vector<Element> box, centers;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) box.push_back(kZ2.make({a, b}));
  for (int a = 0; a < 64; a += 8)
    for (int b = 0; b < 64; b += 8) centers.push_back(kZ2.make({a, b}));
  const Quasitiling grid{Window::cube(kZ2, 64), {{Subset(box), 0}}, {centers}};
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(covering_density(grid, n), 1.0);
  const Quasitiling empty{Window::cube(kZ2, 64), {}, {}};
  EXPECT_EQ(covering_density(empty, 1), 0.0);
}

TEST(Covering, GreedyConstructionOnSquareWindow) {
  TilingParams p;
  p.eta = 0.1;
  p.K = 3;
  p.seed = 7;
  const Quasitiling t = construct_quasitiling(Window::cube(kZ2, 256), p);
  int margin = 0;
  for (const auto& s : t.shapes) margin = std::max(margin, s.folner_index);
  EXPECT_GE(interior_covering_density(t, 4, margin), 0.88);
  EXPECT_TRUE(pairwise_disjoint(t));
}

TEST(Disjointify, HandTrace) {
  const Quasitiling t{Window::cube(kZ, 5), {{interval(0, 2), 0}}, {{kZ.make({0}), kZ.make({2})}}};
  const Quasitiling out = disjointify(t, {kZ.make({0}), kZ.make({1}), kZ.make({2})});
  const auto tiles = tiles_of(out);
  ASSERT_EQ(tiles.size(), 2u);
  EXPECT_EQ(tiles[0].center, kZ.make({0}));
  EXPECT_EQ(tiles[0].cells, interval(0, 1));
  EXPECT_EQ(tiles[1].center, kZ.make({2}));
  EXPECT_EQ(tiles[1].cells, interval(2, 4));
}

TEST(Disjointify, DisjointInputUnchanged) {
  const Quasitiling t{Window::cube(kZ, 20), {{interval(0, 4), 0}}, {{kZ.make({0}), kZ.make({5}), kZ.make({12})}}};
  EXPECT_EQ(disjointify(t), t);
}

TEST(Disjointify, InvariantsOnRandomTilings) {
  const Window w = Window::cube(kZ2, 40);
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Quasitiling raw = random_raw(seed, w);
    ASSERT_TRUE(is_epsilon_disjoint(raw, 0.1).holds);
    const Quasitiling out = disjointify(raw);
    EXPECT_TRUE(pairwise_disjoint(out));
    EXPECT_EQ(tile_union(out), tile_union(raw));
    EXPECT_EQ(disjointify(out), out);
  }
}

TEST(Disjointify, TranslationEquivariance) {
  const Window w = Window::cube(kZ2, 40);
  const Element shift = kZ2.make({-13, 7});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Quasitiling raw = random_raw(seed, w);
    Quasitiling moved = raw;
    moved.window = w.translated(shift);
    for (auto& cs : moved.centers)
      for (auto& c : cs) c = kZ2.multiply(c, shift);
    std::set<std::pair<Element, Subset>> expect;
    for (const auto& [c, cells] : tile_set(disjointify(raw)))
      expect.insert({kZ2.multiply(c, shift), translate_set(kZ2, cells, shift, Side::kRight)});
    EXPECT_EQ(tile_set(disjointify(moved)), expect);
  }
}

TEST(SymbolicCode, EmptyAndSingleTile) {
  const Quasitiling empty{Window::cube(kZ, 10), {{interval(0, 2), 0}}, {{}}};
  const Configuration c0 = symbolic_encode(empty);
  for (auto s : c0.symbols) EXPECT_EQ(s, 0);
  const Quasitiling one{Window::cube(kZ, 10), {{interval(0, 2), 0}}, {{kZ.make({4})}}};
  const Configuration c1 = symbolic_encode(one);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(c1.symbols[i], i == 4 ? 1 : 0);
}

TEST(SymbolicCode, RoundTripOnRandomTilings) {
  const Window w = Window::cube(kZ2, 40);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Quasitiling t = disjointify(random_raw(seed + 1000, w));
    EXPECT_EQ(symbolic_decode(symbolic_encode(t), t.shapes), t);
  }
}

TEST(Serialization, TilingRoundTrip) {
  const Quasitiling t = disjointify(random_raw(3, Window::cube(kZ2, 40)));
  EXPECT_EQ(tiling_from_json(nlohmann::json::parse(tiling_to_json(t).dump())), t);
}

TEST(Construction, SeedDeterministic) {
  TilingParams p;
  p.eta = 0.2;
  p.K = 2;
  p.seed = 99;
  const Window w = Window::cube(kZ2, 60);
  EXPECT_EQ(tiling_to_json(construct_quasitiling(w, p)).dump(), tiling_to_json(construct_quasitiling(w, p)).dump());
}
