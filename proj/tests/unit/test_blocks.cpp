#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "symdyn/measure.hpp"
#include "symdyn/source.hpp"

using namespace symdyn;

namespace {

const Group kZ = Group::parse("z");

Block line_block(std::vector<Symbol> syms, int alphabet = 2, std::int64_t start = 0) {
  std::vector<Element> d;
  for (std::size_t i = 0; i < syms.size(); ++i) d.push_back(kZ.make({start + static_cast<std::int64_t>(i)}));
  return Block(alphabet, Subset(d), std::move(syms));
}

Configuration constant_config(std::int64_t side, Symbol v, int alphabet = 2) {
  return Configuration(alphabet, Window::cube(kZ, side), v);
}

}  // namespace

TEST(Occurrence, SelfAndShift) {
  const Block c = line_block({1, 2, 1, 2});
  EXPECT_TRUE(occurs_at(c, c, kZ.identity(), kZ));
  const Block b = line_block({1, 2});
  EXPECT_TRUE(occurs_at(b, c, kZ.make({2}), kZ));
  EXPECT_FALSE(occurs_at(b, c, kZ.make({3}), kZ));  // escapes C
  EXPECT_FALSE(occurs_at(b, c, kZ.make({1}), kZ));  // reads [2,1]
}

TEST(Frequency, Examples) {
  const Block c = line_block({1, 2, 1, 2});
  const Block bp = line_block({1, 2});
  // Oracle: enumerate h in {0..3} by hand.
  int matches = 0;
  const std::vector<int> s{1, 2, 1, 2};
  for (int h = 0; h < 4; ++h) matches += h + 1 < 4 && s[h] == 1 && s[h + 1] == 2;
  EXPECT_DOUBLE_EQ(frequency(bp, c, kZ), matches / 4.0);
  EXPECT_DOUBLE_EQ(frequency(c, c, kZ), 1.0 / 4.0);
  EXPECT_EQ(frequency(line_block({3}, 3), line_block({1, 2, 1, 2}, 3), kZ), 0.0);
}

TEST(Metric, EqualMeasuresAreAtDistanceZero) {
  Rng rng(5);
  const Configuration c = SourceSpec::bernoulli({0.3, 0.7}).sample(Window::cube(kZ, 4096), rng);
  const auto m = EmpiricalMeasure::from_configuration(c, 4);
  EXPECT_EQ(metric_measures(m, m, MetricParams{4}), 0.0);
}

TEST(Metric, OppositePointMassesClosedForm) {
  const auto ones = EmpiricalMeasure::from_configuration(constant_config(200, 1), 6);
  const auto twos = EmpiricalMeasure::from_configuration(constant_config(200, 2), 6);
  const MetricParams p{6};
  // Each depth contributes 2^-n |B_n|^-1 * 2 with |B_n| = 2^(2n+1).
  double series = 0.0;
  for (int n = 1; n <= 6; ++n) series += std::pow(2.0, -n) * 2.0 / std::pow(2.0, 2 * n + 1);
  EXPECT_NEAR(metric_measures(ones, twos, p), series, 1e-15);
  EXPECT_LE(std::abs(series - 1.0 / 7.0), std::pow(2.0, 1 - 6));
  EXPECT_DOUBLE_EQ(metric_truncation_bound(p), std::pow(2.0, 1 - 6));
}

TEST(Metric, ValueStaysInRange) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const double p = rng.uniform(), q = rng.uniform();
    const auto a = EmpiricalMeasure::from_configuration(
        SourceSpec::bernoulli({p, 1 - p}).sample(Window::cube(kZ, 512), rng), 3);
    const auto b = EmpiricalMeasure::from_configuration(
        SourceSpec::bernoulli({q, 1 - q}).sample(Window::cube(kZ, 512), rng), 3);
    const double d = metric_measures(a, b, MetricParams{3});
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 2.0);
  }
}

TEST(MetricBlock, SelfComparisonIsBoundaryScale) {
  Rng rng(2);
  const SourceSpec src = SourceSpec::bernoulli({0.5, 0.5});
  const Configuration c = src.sample(Window::cube(kZ, 4096), rng);
  const auto m = EmpiricalMeasure::from_configuration(c, 4);
  // fr_C divides by |C| rather than by the number of fitting translates, so
  // each depth loses at most 2n/|C| of mass.
  double bound = 0.0;
  for (int n = 1; n <= 4; ++n) bound += std::pow(2.0, -n) * 2.0 * (2.0 * n) / 4096.0;
  EXPECT_LE(metric_measure_block(m, c, MetricParams{4}), bound + 1e-12);
}

TEST(MetricBlock, PointMassDeficitFromIncompleteTranslates) {
  const auto ones = EmpiricalMeasure::from_configuration(constant_config(100, 1), 3);
  const Configuration c = constant_config(100, 1);
  // Oracle: at depth n only 100 - 2n of the 100 translates fit.
  double expect = 0.0;
  for (int n = 1; n <= 3; ++n) expect += std::pow(2.0, -n) * (2.0 * n / 100.0) / std::pow(2.0, 2 * n + 1);
  EXPECT_NEAR(metric_measure_block(ones, c, MetricParams{3}), expect, 1e-15);
}

TEST(Tables, FairCoinDepthOne) {
  Rng rng(17);
  const Configuration c = SourceSpec::bernoulli({0.5, 0.5}).sample(Window::cube(kZ, 1 << 16), rng);
  const auto m = EmpiricalMeasure::from_configuration(c, 1);
  EXPECT_EQ(m.table(1).probs.size(), 8u);
  for (const auto& [k, p] : m.table(1).probs) EXPECT_NEAR(p, 1.0 / 8.0, 0.02);
}

TEST(Tables, ConstantAndPeriodic) {
  const auto m = EmpiricalMeasure::from_configuration(constant_config(50, 2), 2);
  for (int n = 0; n <= 2; ++n) {
    ASSERT_EQ(m.table(n).probs.size(), 1u);
    EXPECT_EQ(m.table(n).probs.begin()->first, BlockKey(static_cast<std::size_t>(2 * n + 1), '\2'));
  }
  Configuration periodic(2, Window::cube(kZ, 100));
  for (std::size_t i = 0; i < 100; ++i) periodic.symbols[i] = static_cast<Symbol>(1 + i % 2);
  const auto t = EmpiricalMeasure::from_configuration(periodic, 1).table(1);
  ASSERT_EQ(t.probs.size(), 2u);
  EXPECT_DOUBLE_EQ(t.probability(BlockKey{1, 2, 1}), 0.5);
  EXPECT_DOUBLE_EQ(t.probability(BlockKey{2, 1, 2}), 0.5);
}

TEST(SubsetFrequency, EtaLimitAndFullSubset) {
  Rng rng(4);
  const Configuration c = SourceSpec::bernoulli({0.5, 0.5}).sample(Window::cube(kZ, 200), rng);
  const Block b = line_block({1});
  const Subset f = Window(kZ, {41}, kZ.make({80})).region();
  const double avg = frequency(b, c.restrict(f), kZ);
  const auto r = subset_frequency_bound_check(c, b, f, f, avg, 0.1);
  EXPECT_NEAR(r.eta_limit, 0.1 / 1.2, 1e-15);
  EXPECT_EQ(r.status, SubsetFrequencyReport::Status::kPass);
}

TEST(SubsetFrequency, RandomLargeSubsets) {
  Rng rng(8);
  const SourceSpec src = SourceSpec::bernoulli({0.5, 0.5});
  const Subset f = kZ.folner(20);
  const Window w(kZ, {41}, kZ.make({-20}));
  const Block b = line_block({1});
  int premise = 0;
  for (int t = 0; t < 1000; ++t) {
    const Configuration c = src.sample(w, rng);
    std::vector<Element> keep;
    for (const auto& e : f)
      if (rng.uniform() < 0.95) keep.push_back(e);
    const Subset fp(keep);
    const auto r = subset_frequency_bound_check(c, b, f, fp, 0.5, 0.1);
    if (r.status == SubsetFrequencyReport::Status::kPremiseFailed) continue;
    ++premise;
    // Oracle: recompute both averages directly.
    double full = 0, sub = 0;
    for (const auto& e : f) full += c[e] == 1;
    for (const auto& e : fp) sub += c[e] == 1;
    EXPECT_NEAR(r.avg_full, full / f.size(), 1e-12);
    EXPECT_NEAR(r.avg_sub, sub / fp.size(), 1e-12);
    EXPECT_EQ(r.status, SubsetFrequencyReport::Status::kPass);
    EXPECT_LE(std::abs(sub / fp.size() - 0.5), 0.2 + 1e-12);
  }
  EXPECT_GT(premise, 50);
}

TEST(Product, CombineAndProject) {
  Rng rng(1);
  const Window w = Window::cube(kZ, 300);
  const Configuration x = SourceSpec::bernoulli({0.2, 0.3, 0.5}).sample(w, rng);
  const Configuration y = SourceSpec::bernoulli({0.6, 0.4}).sample(w, rng);
  const Configuration z = combine(x, y);
  EXPECT_EQ(z.alphabet, 6);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(z.symbols[i], (x.symbols[i] - 1) * 2 + y.symbols[i]);
  EXPECT_EQ(project_x(z, 2), x);
  EXPECT_EQ(project_y(z, 2), y);
}

TEST(Serialization, MeasureAndBlockRoundTrip) {
  Rng rng(6);
  const Group g2 = Group::parse("z2");
  const Configuration c = SourceSpec::bernoulli({0.4, 0.6}).sample(Window::cube(g2, 40), rng);
  auto m = EmpiricalMeasure::from_configuration(c, 2, MeasureSource{1600, 6, "test"});
  const auto back = measure_from_json(nlohmann::json::parse(measure_to_json(m).dump()));
  EXPECT_EQ(measure_to_json(back).dump(), measure_to_json(m).dump());
  for (int n = 0; n <= 2; ++n) EXPECT_EQ(back.table(n).probs, m.table(n).probs);

  const Block b = c.restrict(translate_set(g2, g2.folner(2), g2.make({20, 20}), Side::kLeft));
  EXPECT_EQ(block_from_json(nlohmann::json::parse(block_to_json(b, g2).dump())), b);
}

TEST(Source, SamplerIsSeedDeterministic) {
  const SourceSpec src = SourceSpec::markov({{0.9, 0.1}, {0.1, 0.9}});
  Rng a(42), b(42);
  const Window w = Window::cube(kZ, 1000);
  EXPECT_EQ(src.sample(w, a), src.sample(w, b));
}

TEST(Source, ExactLawProbabilities) {
  const SourceSpec src = SourceSpec::bernoulli({0.3, 0.7});
  const SourceLaw law(src, kZ);
  const Subset d = kZ.folner(1);
  EXPECT_NEAR(law.probability(d, BlockKey{1, 2, 1}), 0.3 * 0.7 * 0.3, 1e-15);
  EXPECT_NEAR(law.log2_probability(d, BlockKey{2, 2, 2}), 3 * std::log2(0.7), 1e-12);
  EXPECT_NEAR(src.entropy_rate(), -(0.3 * std::log2(0.3) + 0.7 * std::log2(0.7)), 1e-12);
}
