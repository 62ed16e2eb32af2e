#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "symdyn/markers.hpp"

using namespace symdyn;

namespace {

const Group kZ = Group::parse("z");

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

int prime_oracle(int s, double delta_m) {
  for (int p = 2;; ++p)
    if (is_prime(p) && std::pow(static_cast<double>(s), -p) <= delta_m) return p;
}

// Every translate h with D h inside the window, compared site by site.
std::vector<MarkerHit> naive_scan(const Configuration& c, const MarkerSet& m) {
  std::vector<MarkerHit> out;
  const Group& g = c.window.group();
  for (std::size_t idx = 0; idx < c.window.size(); ++idx) {
    const Element h = c.window.element(idx);
    for (std::size_t i = 0; i < m.count(); ++i) {
      bool ok = true;
      for (std::size_t k = 0; k < m.d.size() && ok; ++k) {
        const Element at = g.multiply(m.d[k], h);
        ok = c.window.contains(at) && c[at] == m.blocks[i].symbols[k];
      }
      if (ok) out.push_back({h, static_cast<int>(i + 1)});
    }
  }
  return out;
}

std::vector<MarkerHit> sorted(std::vector<MarkerHit> v) {
  std::sort(v.begin(), v.end(), [](const MarkerHit& a, const MarkerHit& b) {
    return std::tie(a.position, a.marker) < std::tie(b.position, b.marker);
  });
  return v;
}

Configuration stamp(const MarkerSet& m, int i, const Window& w, const Element& at, Symbol fill) {
  Configuration c(m.alphabet, w, fill);
  for (std::size_t k = 0; k < m.d.size(); ++k)
    c[kZ.multiply(m.d[k], at)] = m.blocks[static_cast<std::size_t>(i - 1)].symbols[k];
  return c;
}

}  // namespace

TEST(MarkerPrime, LeastAdmissiblePrime) {
  EXPECT_EQ(marker_prime(3, 0.05), prime_oracle(3, 0.05));
  EXPECT_EQ(marker_prime(3, 0.05), 3);
  EXPECT_EQ(marker_prime(2, 1e-6), prime_oracle(2, 1e-6));
  EXPECT_EQ(marker_prime(2, 1e-6), 23);
  for (int s : {2, 3, 5})
    for (double d : {0.5, 0.1, 1e-3, 1e-5}) EXPECT_EQ(marker_prime(s, d), prime_oracle(s, d)) << s << ' ' << d;
}

TEST(Markers, SmallIntegerExample) {
  const MarkerSet m = construct_markers(2, 0.05, 3, kZ);
  std::vector<Element> d0{kZ.make({0}), kZ.make({1}), kZ.make({2})};
  EXPECT_EQ(m.d0, Subset(d0));
  ASSERT_EQ(m.gs.size(), 2u);
  EXPECT_EQ(m.gs[0], kZ.make({5}));
  EXPECT_EQ(m.gs[1], kZ.make({6}));
  // g_i avoids D0^2 = {0..4} and D0 + g_i misses D0.
  for (const auto& g : m.gs) {
    EXPECT_FALSE(set_product(kZ, m.d0, m.d0).contains(g));
    EXPECT_TRUE(set_intersection(translate_set(kZ, m.d0, g, Side::kRight), m.d0).empty());
  }
  // M_1: 1 on {0,1,2,5}, 2 on {6}; M_2 swaps the last two.
  EXPECT_EQ(m.blocks[0].symbols, (std::vector<Symbol>{1, 1, 1, 1, 2}));
  EXPECT_EQ(m.blocks[1].symbols, (std::vector<Symbol>{1, 1, 1, 2, 1}));
  m.check_invariants();
}

TEST(Markers, SingleMarker) {
  const MarkerSet m = construct_markers(1, 0.05, 3, kZ);
  EXPECT_EQ(m.count(), 1u);
  EXPECT_EQ(m.d, set_union(m.d0, Subset{m.gs[0]}));
}

TEST(Markers, BudgetUnderUniformLaw) {
  for (int s : {2, 3}) {
    const MarkerSet m = construct_markers(3, 1e-3, s, Group::parse("z2"));
    const SourceLaw law(SourceSpec::bernoulli(std::vector<double>(static_cast<std::size_t>(s), 1.0 / s)), m.group);
    EXPECT_NEAR(marker_budget(m, law), std::pow(static_cast<double>(s), -static_cast<double>(m.d0.size())), 1e-15);
    EXPECT_LE(marker_budget(m, law), 1e-3);
  }
}

TEST(Uniqueness, EmbeddedMarkerWithTwosHolds) {
  const MarkerSet m = construct_markers(2, 0.05, 3, kZ);
  const Window w(kZ, {13}, kZ.make({-6}));  // D^-1 D = [-6, 6]
  const Configuration c = stamp(m, 1, w, kZ.identity(), 2);
  const MarkerCheck r = verify_marker_uniqueness(c, m, kZ.identity());
  EXPECT_EQ(r.verdict, MarkerVerdict::kHolds);
  EXPECT_EQ(r.marker, 1);
}

TEST(Uniqueness, AllOnesFailsThePremise) {
  const MarkerSet m = construct_markers(2, 0.05, 3, kZ);
  const Configuration c(3, Window(kZ, {13}, kZ.make({-6})), 1);
  EXPECT_EQ(verify_marker_uniqueness(c, m, kZ.identity()).verdict, MarkerVerdict::kPremiseFailed);
}

TEST(Uniqueness, SeededPremiseConfigurations) {
  Rng rng(12);
  for (const char* name : {"z", "z2"}) {
    const Group g = Group::parse(name);
    const MarkerSet m = construct_markers(2, 0.2, 3, g);
    std::int64_t reach = 0;
    for (const auto& x : m.d_inv_d)
      for (int i = 0; i < g.rank(); ++i) reach = std::max<std::int64_t>(reach, std::abs(x.c[i]));
    Element corner;
    for (int i = 0; i < g.rank(); ++i) corner.c[i] = -reach;
    const Window w = Window::cube(g, 2 * reach + 1).translated(corner);
    for (int t = 0; t < 5000; ++t) {
      const int i = 1 + static_cast<int>(rng.below(2));
      const Configuration c = sample_marker_premise(m, w, g.identity(), i, rng);
      // The premise itself, checked independently.
      for (const auto& x : m.guard) ASSERT_NE(c[x], 1);
      const MarkerCheck r = verify_marker_uniqueness(c, m, g.identity());
      ASSERT_EQ(r.verdict, MarkerVerdict::kHolds);
      ASSERT_EQ(r.marker, i);
      // Brute force: no other occurrence with D h inside D^-1 D.
      for (const auto& hit : naive_scan(c, m)) {
        const Subset dh = translate_set(g, m.d, hit.position, Side::kRight);
        if (dh.is_subset_of(m.d_inv_d)) ASSERT_EQ(hit.position, g.identity());
      }
    }
  }
}

TEST(Occurrences, SingleEmbeddedAndAllTwos) {
  const MarkerSet m = construct_markers(2, 0.05, 3, kZ);
  const Window w = Window::cube(kZ, 40);
  const Configuration c = stamp(m, 1, w, kZ.make({17}), 2);
  EXPECT_EQ(find_marker_occurrences(c, m), (std::vector<MarkerHit>{{kZ.make({17}), 1}}));
  EXPECT_TRUE(find_marker_occurrences(Configuration(3, w, 2), m).empty());
}

TEST(Occurrences, AgreeWithNaiveScanner) {
  Rng rng(31);
  for (const char* name : {"z", "z2"}) {
    const Group g = Group::parse(name);
    const MarkerSet m = construct_markers(2, 0.05, 3, g);
    const std::int64_t side = g.rank() == 1 ? 400 : 24;
    for (int t = 0; t < 100; ++t) {
      Configuration c(3, Window::cube(g, side), 1);
      // Mostly 1s so that markers actually occur.
      for (auto& v : c.symbols) v = static_cast<Symbol>(rng.uniform() < 0.7 ? 1 : 2 + rng.below(2));
      EXPECT_EQ(sorted(find_marker_occurrences(c, m)), sorted(naive_scan(c, m))) << name << ' ' << t;
    }
  }
}

TEST(Serialization, MarkersRoundTrip) {
  const MarkerSet m = construct_markers(4, 1e-3, 2, Group::parse("z2"));
  const MarkerSet back = markers_from_json(nlohmann::json::parse(markers_to_json(m).dump()));
  EXPECT_EQ(back.d, m.d);
  EXPECT_EQ(back.gs, m.gs);
  ASSERT_EQ(back.blocks.size(), m.blocks.size());
  for (std::size_t i = 0; i < m.blocks.size(); ++i) EXPECT_EQ(back.blocks[i], m.blocks[i]);
}
