#include <gtest/gtest.h>

#include <array>
#include <set>

#include "symdyn/group.hpp"
#include "symdyn/rng.hpp"

using namespace symdyn;

namespace {

// Heisenberg elements as upper unitriangular integer matrices.
using Mat = std::array<std::array<std::int64_t, 3>, 3>;

Mat as_matrix(const Element& e) { return {{{1, e.c[0], e.c[2]}, {0, 1, e.c[1]}, {0, 0, 1}}}; }

Mat matmul(const Mat& a, const Mat& b) {
  Mat r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

}  // namespace

TEST(Folner, Z2FirstBoxIsTheUnitSquare) {
  const Group g = Group::parse("z2");
  std::vector<Element> expect;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) expect.push_back(g.make({a, b}));
  EXPECT_EQ(g.folner(1), Subset(expect));
  EXPECT_EQ(g.folner(1).size(), 9u);
}

TEST(Folner, ZBoxIsSymmetricAndContainsZero) {
  const Group g = Group::parse("z");
  const Subset f = g.folner(3);
  EXPECT_EQ(f.size(), 7u);
  EXPECT_TRUE(f.contains(g.identity()));
  EXPECT_EQ(set_inverse(g, f), f);
  EXPECT_EQ(f[0], g.make({-3}));
  EXPECT_EQ(f[6], g.make({3}));
}

TEST(Folner, Z2SizeTen) {
  const Group g = Group::parse("z2");
  EXPECT_EQ(g.folner(10).size(), static_cast<std::size_t>((2 * 10 + 1) * (2 * 10 + 1)));
}

TEST(Folner, HeisenbergIsIncreasingSymmetric) {
  const Group g = Group::parse("h3");
  Subset prev;
  for (int n = 1; n <= 3; ++n) {
    const Subset f = g.folner(n);
    EXPECT_TRUE(f.contains(g.identity()));
    EXPECT_EQ(set_inverse(g, f), f);
    EXPECT_TRUE(prev.is_subset_of(f));
    prev = f;
  }
}

TEST(InvarianceDefect, UnitShiftOfSquare) {
  const Group g = Group::parse("z2");
  const Subset f = g.folner(10);
  // Oracle: direct set arithmetic on coordinate pairs.
  std::set<std::pair<int, int>> a, b;
  for (int x = -10; x <= 10; ++x)
    for (int y = -10; y <= 10; ++y) {
      a.insert({x, y});
      b.insert({x + 1, y});
    }
  std::size_t diff = 0;
  for (const auto& p : a) diff += b.count(p) == 0;
  for (const auto& p : b) diff += a.count(p) == 0;
  const double expect = static_cast<double>(diff) / static_cast<double>(a.size());
  EXPECT_EQ(diff, 42u);
  EXPECT_DOUBLE_EQ(invariance_defect(g, f, Subset{g.make({1, 0})}), expect);
}

TEST(InvarianceDefect, IdentityGivesZero) {
  for (const char* name : {"z", "z2", "h3"}) {
    const Group g = Group::parse(name);
    EXPECT_EQ(invariance_defect(g, g.folner(2), Subset{g.identity()}), 0.0) << name;
  }
}

TEST(InvarianceDefect, IntervalEndpointsAndMonotone) {
  const Group g = Group::parse("z");
  double prev = 2.0;
  for (int n = 1; n <= 20; ++n) {
    const double d = invariance_defect(g, g.folner(n), Subset{g.make({1})});
    EXPECT_DOUBLE_EQ(d, 2.0 / (2 * n + 1));
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(Translate, RightShiftInZ) {
  const Group g = Group::parse("z");
  const Subset f{g.make({0}), g.make({1}), g.make({2})};
  EXPECT_EQ(translate_set(g, f, g.make({5}), Side::kRight), (Subset{g.make({5}), g.make({6}), g.make({7})}));
  EXPECT_EQ(translate_set(g, f, g.identity(), Side::kRight), f);
  EXPECT_EQ(translate_set(g, f, g.identity(), Side::kLeft), f);
}

TEST(Heisenberg, MultiplicationMatchesMatrices) {
  const Group g = Group::parse("h3");
  Rng rng(11);
  auto draw = [&] {
    return g.make({static_cast<std::int64_t>(rng.below(41)) - 20, static_cast<std::int64_t>(rng.below(41)) - 20,
                   static_cast<std::int64_t>(rng.below(41)) - 20});
  };
  for (int t = 0; t < 500; ++t) {
    const Element a = draw(), b = draw();
    EXPECT_EQ(as_matrix(g.multiply(a, b)), matmul(as_matrix(a), as_matrix(b)));
    EXPECT_EQ(as_matrix(g.multiply(a, g.inverse(a))), as_matrix(g.identity()));
  }
}

TEST(Heisenberg, LeftAndRightTranslatesDiffer) {
  const Group g = Group::parse("h3");
  const Subset f{g.make({0, 1, 0})};
  const Element x = g.make({1, 0, 0});
  // (1,0,0)(0,1,0) = (1,1,1) but (0,1,0)(1,0,0) = (1,1,0).
  EXPECT_EQ(translate_set(g, f, x, Side::kLeft), Subset{g.make({1, 1, 1})});
  EXPECT_EQ(translate_set(g, f, x, Side::kRight), Subset{g.make({1, 1, 0})});
}

TEST(BanachDensity, FullSetEmptySetAndEvenColumns) {
  const Group g = Group::parse("z2");
  const Window w = Window::cube(g, 12);
  std::vector<char> all(w.size(), 1), none(w.size(), 0), even(w.size(), 0);
  for (std::size_t i = 0; i < w.size(); ++i) even[i] = w.element(i).c[0] % 2 == 0;
  EXPECT_EQ(lower_banach_density_window(w, all, 1), 1.0);
  EXPECT_EQ(lower_banach_density_window(w, all, 3), 1.0);
  EXPECT_EQ(lower_banach_density_window(w, none, 1), 0.0);

  // Oracle: brute-force min over all 3x3 squares inside the window.
  double best = 1.0;
  for (int x = 0; x + 2 < 12; ++x)
    for (int y = 0; y + 2 < 12; ++y) {
      int hit = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) hit += (x + a) % 2 == 0;
      best = std::min(best, hit / 9.0);
    }
  EXPECT_DOUBLE_EQ(best, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(lower_banach_density_window(w, even, 1), best);
}

TEST(Group, AssociativityAndInverses) {
  Rng rng(3);
  for (const char* name : {"z", "z2", "h3"}) {
    const Group g = Group::parse(name);
    auto draw = [&] {
      Element e;
      for (int i = 0; i < g.rank(); ++i) e.c[i] = static_cast<std::int64_t>(rng.below(201)) - 100;
      return e;
    };
    for (int t = 0; t < 1000; ++t) {
      const Element a = draw(), b = draw(), c = draw();
      ASSERT_EQ(g.multiply(g.multiply(a, b), c), g.multiply(a, g.multiply(b, c))) << name;
      ASSERT_EQ(g.multiply(g.inverse(a), a), g.identity()) << name;
    }
  }
}

TEST(Group, UnknownIdIsRejected) { EXPECT_ANY_THROW(Group::parse("free2")); }

TEST(Window, IndexRoundTrip) {
  const Group g = Group::parse("h3");
  const Window w(g, {3, 4, 5}, g.make({-1, 2, 0}));
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(w.index(w.element(i)), i);
  EXPECT_FALSE(w.contains(g.make({2, 2, 0})));
}
