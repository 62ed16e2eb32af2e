#include <gtest/gtest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "symdyn/perturb_dbar.hpp"

using namespace symdyn;

namespace {

const Group kZ = Group::parse("z");

double h2(double p) { return p <= 0 || p >= 1 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

EmpiricalMeasure bernoulli_measure(double p2, std::int64_t side, std::uint64_t seed, int n) {
  Rng rng(seed);
  return EmpiricalMeasure::from_configuration(SourceSpec::bernoulli({1 - p2, p2}).sample(Window::cube(kZ, side), rng), n);
}

}  // namespace

TEST(Perturb, ZeroNoiseIsIdentity) {
  Rng rng(1);
  const Configuration x = SourceSpec::bernoulli({0.3, 0.7}).sample(Window::cube(kZ, 1000), rng);
  EXPECT_EQ(perturb(x, NoiseParams{0.0, 2, 5}), x);
}

TEST(Perturb, ConstantInputSiteLaw) {
  const Configuration x(2, Window::cube(kZ, 1 << 16), 1);
  const Configuration y = perturb(x, NoiseParams{0.5, 2, 7});
  double ones = 0;
  for (auto v : y.symbols) ones += v == 1;
  const double p1 = ones / static_cast<double>(y.symbols.size());
  EXPECT_NEAR(p1, (1 - 0.5) + 0.5 / 2, 0.01);
  // The output is iid, so its entropy is the binary entropy of its marginal.
  const auto m = EmpiricalMeasure::from_configuration(y, 3);
  const double h = process_entropy_estimate(m, Partition::identity(2), 3).difference_quotient;
  EXPECT_NEAR(h, h2(0.25), 0.02);
  EXPECT_GE(h, 0.0 + 0.5 * (1.0 - 0.0));
}

TEST(Perturb, JointLeavesYUntouched) {
  Rng rng(2);
  const Window w = Window::cube(kZ, 5000);
  const Configuration x = SourceSpec::bernoulli({0.5, 0.5}).sample(w, rng);
  const Configuration y = SourceSpec::bernoulli({0.2, 0.3, 0.5}).sample(w, rng);
  const Configuration z = perturb_joint(combine(x, y), 3, NoiseParams{0.4, 2, 3});
  EXPECT_EQ(project_y(z, 3), y);
  EXPECT_NE(project_x(z, 3), x);
}

TEST(PerturbationBounds, ZeroNoise) {
  Rng rng(4);
  const Window w = Window::cube(kZ, 1 << 14);
  const Configuration x = SourceSpec::bernoulli({0.9, 0.1}).sample(w, rng);
  const Configuration z = combine(x, perturb(x, NoiseParams{0.2, 2, 1}));
  auto before = EmpiricalMeasure::from_configuration(z, 3);
  before.set_factors(2, 2);
  const NoiseParams p{0.0, 2, 9};
  auto after = EmpiricalMeasure::from_configuration(perturb_joint(z, 2, p), 3);
  after.set_factors(2, 2);
  const auto r = verify_perturbation_bounds(before, after, p, 3);
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(r.h_after, r.h_before);
  EXPECT_TRUE(r.pass());
}

TEST(PerturbationBounds, ConstantSourceGain) {
  const Window w = Window::cube(kZ, 1 << 16);
  const Configuration x(2, w, 1);
  auto before = EmpiricalMeasure::from_configuration(combine(x, x), 4);
  before.set_factors(2, 2);
  const NoiseParams p{0.5, 2, 11};
  auto after = EmpiricalMeasure::from_configuration(perturb_joint(combine(x, x), 2, p), 4);
  after.set_factors(2, 2);
  const auto r = verify_perturbation_bounds(before, after, p, 4);
  EXPECT_NEAR(r.h_after - r.h_before, h2(0.25), 0.02);
  EXPECT_GE(r.h_after - r.h_before, 0.5);
  EXPECT_TRUE(r.pass());
}

TEST(PerturbationBounds, BiasedCoinOverSeeds) {
  const Window w = Window::cube(kZ, 1 << 16);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const Configuration x = SourceSpec::bernoulli({0.9, 0.1}).sample(w, rng);
    const Configuration z = combine(x, perturb(x, NoiseParams{0.2, 2, derive_seed(seed, "y")}));
    auto before = EmpiricalMeasure::from_configuration(z, 4);
    before.set_factors(2, 2);
    const NoiseParams p{0.3, 2, derive_seed(seed, "noise")};
    auto after = EmpiricalMeasure::from_configuration(perturb_joint(z, 2, p), 4);
    after.set_factors(2, 2);
    const auto r = verify_perturbation_bounds(before, after, p, 4);
    EXPECT_TRUE(r.distance_ok) << seed << ' ' << r.distance;
    EXPECT_TRUE(r.entropy_ok) << seed << ' ' << r.h_after << " < " << r.h_required;
    EXPECT_TRUE(r.marginal_ok) << seed << ' ' << r.y_drift;
  }
}

TEST(NoiseParams, ValidationAndJson) {
  EXPECT_ANY_THROW((NoiseParams{1.0, 2, 0}.validate()));
  EXPECT_ANY_THROW((NoiseParams{-0.1, 2, 0}.validate()));
  EXPECT_ANY_THROW((NoiseParams{0.1, 0, 0}.validate()));
  const NoiseParams p{0.25, 3, 17};
  EXPECT_EQ(noise_from_json(nlohmann::json::parse(noise_to_json(p).dump())), p);
}

TEST(Dbar, EqualMeasuresAreAtZero) {
  const auto m = bernoulli_measure(0.3, 5000, 1, 3);
  EXPECT_EQ(dbar_estimate(m, m, 3).value, 0.0);
}

TEST(Dbar, BernoulliPairs) {
  for (auto [p, q] : std::vector<std::pair<double, double>>{{0.5, 0.6}, {0.2, 0.7}, {0.5, 0.5}}) {
    const auto a = bernoulli_measure(p, 10000, 100, 4), b = bernoulli_measure(q, 10000, 200, 4);
    const DbarResult r = dbar_estimate(a, b, 4);
    EXPECT_NEAR(r.value, std::abs(p - q), 0.02) << p << ' ' << q;
    EXPECT_LE(r.tv_bound, r.value + 1e-12);
    r.coupling.validate(1e-9);
  }
}

TEST(Dbar, DisjointPointMasses) {
  const auto ones = EmpiricalMeasure::from_configuration(Configuration(2, Window::cube(kZ, 50), 1), 2);
  const auto twos = EmpiricalMeasure::from_configuration(Configuration(2, Window::cube(kZ, 50), 2), 2);
  EXPECT_DOUBLE_EQ(dbar_estimate(ones, twos, 2).value, 1.0);
}

TEST(Agreement, IdentityAndIndependentCouplings) {
  const std::vector<BlockKey> keys{"a", "b", "c", "d"};
  CouplingTable id, indep;
  for (const auto& k : keys) {
    id.first[k] = id.second[k] = 0.25;
    indep.first[k] = indep.second[k] = 0.25;
    id.mass[{k, k}] = 0.25;
    for (const auto& k2 : keys) indep.mass[{k, k2}] = 0.25 * 0.25;
  }
  id.validate();
  indep.validate();
  EXPECT_DOUBLE_EQ(joining_agreement(id, 1).diagonal, 1.0);
  EXPECT_DOUBLE_EQ(joining_agreement(indep, 1).diagonal, 1.0 / 4);
  for (const auto& [k, v] : joining_agreement(indep, 1).deficits) EXPECT_DOUBLE_EQ(v, 0.25 - 0.0625);
}

TEST(Agreement, OptimalCouplingOfCloseCoins) {
  const auto a = bernoulli_measure(0.5, 100000, 300, 1), b = bernoulli_measure(0.55, 100000, 400, 1);
  const DbarResult r = dbar_estimate(a, b, 1);
  const Agreement g = joining_agreement(r.coupling, 1);
  // The diagonal can never exceed 1 - TV of the two depth-1 tables, and the
  // Hamming-optimal coupling attains that maximum here.
  const double tv = total_variation(a, b, 1);
  EXPECT_LE(g.diagonal, 1.0 - tv + 1e-12);
  EXPECT_NEAR(g.diagonal, 1.0 - tv, 1e-9);
  // Exact law: TV(Ber(0.5)^3, Ber(0.55)^3). The agreement therefore stays
  // below 0.93 even with perfect sampling.
  double exact_tv = 0.0;
  for (int k = 0; k <= 3; ++k) {
    const double c = k == 0 || k == 3 ? 1 : 3;
    exact_tv += c * std::abs(std::pow(0.5, 3) - std::pow(0.55, k) * std::pow(0.45, 3 - k)) / 2;
  }
  EXPECT_LT(1.0 - exact_tv, 0.93);
  EXPECT_NEAR(tv, exact_tv, 0.03);
}
