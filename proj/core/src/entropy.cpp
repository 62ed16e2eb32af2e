#include "symdyn/entropy.hpp"

#include <cmath>
#include <map>

#include "symdyn/error.hpp"

namespace symdyn {

Partition Partition::identity(int alphabet) {
  Partition p{"id", alphabet, std::vector<int>(alphabet + 1, 0)};
  for (int z = 1; z <= alphabet; ++z) p.label_of[z] = z;
  return p;
}

Partition Partition::x_side(int s, int l) {
  Partition p{"P", s, std::vector<int>(s * l + 1, 0)};
  for (int z = 1; z <= s * l; ++z) p.label_of[z] = (z - 1) / l + 1;
  return p;
}

Partition Partition::y_side(int s, int l) {
  Partition p{"Q", l, std::vector<int>(s * l + 1, 0)};
  for (int z = 1; z <= s * l; ++z) p.label_of[z] = (z - 1) % l + 1;
  return p;
}

Partition Partition::y_truncated(int s, int l, int t) {
  require(t >= 1, ErrorCode::kInvalidArgument, "truncation level must be >= 1");
  const int labels = std::min(t, l);
  Partition p{"Q^(" + std::to_string(t) + ")", labels, std::vector<int>(s * l + 1, 0)};
  for (int z = 1; z <= s * l; ++z) p.label_of[z] = std::min((z - 1) % l + 1, labels);
  return p;
}

double partition_entropy(const std::vector<double>& dist) {
  double total = 0.0;
  for (double v : dist) {
    require(v >= 0.0 && std::isfinite(v), ErrorCode::kInvalidArgument, "partition_entropy: negative entry");
    total += v;
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorCode::kInvalidArgument, "partition_entropy: entries do not sum to 1");
  return entropy_bits(dist);
}

namespace {

void check_partition(const EmpiricalMeasure& m, const Partition& p) {
  require(static_cast<int>(p.label_of.size()) == m.alphabet() + 1, ErrorCode::kAlphabetMismatch,
          "partition " + p.name + " does not match the measure's alphabet");
}

double entropy_of_map(const std::map<BlockKey, double>& m) {
  double h = 0.0;
  for (const auto& [k, v] : m)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

BlockKey relabel_key(const BlockKey& k, const Partition& p) {
  BlockKey r = k;
  for (auto& ch : r) ch = static_cast<char>(p(static_cast<Symbol>(ch)));
  return r;
}

}  // namespace

double block_entropy(const EmpiricalMeasure& m, const Partition& p, int n) {
  check_partition(m, p);
  std::map<BlockKey, double> agg;
  for (const auto& [k, v] : m.table(n).probs) agg[relabel_key(k, p)] += v;
  return entropy_of_map(agg);
}

ProcessEntropy process_entropy_estimate(const EmpiricalMeasure& m, const Partition& p, int n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "process_entropy_estimate: n must be >= 1");
  ProcessEntropy r;
  r.block_entropy = block_entropy(m, p, n);
  r.sites = static_cast<int>(m.table(n).domain.size());
  r.per_site = r.block_entropy / r.sites;
  const double prev = block_entropy(m, p, n - 1);
  const int prev_sites = static_cast<int>(m.table(n - 1).domain.size());
  r.difference_quotient = (r.block_entropy - prev) / static_cast<double>(r.sites - prev_sites);
  return r;
}

namespace {

// xi(A cap B) for every Q^{F_n} atom B and P label A.
std::map<BlockKey, std::vector<double>> split_by_q(const EmpiricalMeasure& joint, const Partition& p,
                                                   const Partition& q, int n) {
  check_partition(joint, p);
  check_partition(joint, q);
  const auto& t = joint.table(n);
  const auto e_pos = static_cast<std::size_t>(t.domain.rank(joint.group().identity()));
  std::map<BlockKey, std::vector<double>> cells;
  for (const auto& [k, v] : t.probs) {
    auto& row = cells[relabel_key(k, q)];
    if (row.empty()) row.assign(p.labels, 0.0);
    row[p(static_cast<Symbol>(k[e_pos])) - 1] += v;
  }
  return cells;
}

}  // namespace

double conditional_entropy(const EmpiricalMeasure& joint, const Partition& p, const Partition& q, int n) {
  double h = 0.0;
  for (const auto& [b, row] : split_by_q(joint, p, q, n)) {
    double xb = 0.0;
    for (double v : row) xb += v;
    if (xb <= 0.0) continue;
    for (double v : row)
      if (v > 0.0) h -= v * std::log2(v / xb);
  }
  return std::max(0.0, h);
}

double pair_entropy(const EmpiricalMeasure& joint, const Partition& p, const Partition& q, int n) {
  double h = 0.0;
  for (const auto& [b, row] : split_by_q(joint, p, q, n))
    for (double v : row)
      if (v > 0.0) h -= v * std::log2(v);
  return h;
}

double delta_for_inclusion(double eps) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::kInvalidArgument, "delta_for_inclusion: eps must lie in (0, 1)");
  return eps * eps / 9.0 * 0.99;
}

InclusionWitness approx_inclusion_check(const EmpiricalMeasure& joint, const Partition& p, const Partition& q,
                                        double eps, int n) {
  const auto cells = split_by_q(joint, p, q, n);
  InclusionWitness w;
  w.unions.assign(p.labels, {});
  std::vector<double> mass_a(p.labels, 0.0);    // xi(A)
  std::vector<double> mass_ba(p.labels, 0.0);   // xi(B_A)
  std::vector<double> inside(p.labels, 0.0);    // xi(A cap B_A)
  for (const auto& [b, row] : cells) {
    int dom = 0;
    for (int a = 1; a < p.labels; ++a)
      if (row[a] > row[dom]) dom = a;
    double xb = 0.0;
    for (int a = 0; a < p.labels; ++a) {
      mass_a[a] += row[a];
      xb += row[a];
    }
    if (xb <= 0.0) continue;
    w.unions[dom].push_back(b);
    mass_ba[dom] += xb;
    inside[dom] += row[dom];
  }
  w.holds = true;
  w.symmetric_difference.assign(p.labels, 0.0);
  for (int a = 0; a < p.labels; ++a) {
    w.symmetric_difference[a] = std::max(0.0, mass_a[a] + mass_ba[a] - 2.0 * inside[a]);
    if (!(w.symmetric_difference[a] < eps)) w.holds = false;
  }
  return w;
}

SmbReport smb_check(const EmpiricalMeasure& m, double h, double delta, int n) {
  require(delta >= 0.0, ErrorCode::kInvalidArgument, "smb_check: delta must be >= 0");
  const auto& t = m.table(n);
  const double sites = static_cast<double>(t.domain.size());
  SmbReport r;
  r.lower = std::exp2(-sites * (h + delta));
  r.upper = std::exp2(-sites * (h - delta));
  for (const auto& [k, v] : t.probs) {
    ++r.blocks_total;
    if (v >= r.lower && v <= r.upper) {
      r.mass += v;
      ++r.blocks_in_band;
    }
  }
  r.pass = r.mass >= 1.0 - delta;
  return r;
}

double smb_subset_eta(double delta, double h, int s) {
  require(delta > 0.0 && h >= 0.0 && s >= 2, ErrorCode::kInvalidArgument,
          "smb_subset_eta: need delta > 0, h >= 0, s >= 2");
  return std::min(2.0 * delta / (h + 3.0 * delta), delta / std::log2(static_cast<double>(s)));
}

RectangleRule rectangle_rule(const std::vector<double>& f, const std::vector<double>& weights, double a, double b) {
  require(f.size() == weights.size(), ErrorCode::kInvalidArgument, "rectangle_rule: size mismatch");
  require(a > 0.0 && b > 0.0, ErrorCode::kInvalidArgument, "rectangle_rule: a and b must be positive");
  double integral = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    require(f[i] >= 0.0 && weights[i] >= 0.0, ErrorCode::kInvalidArgument, "rectangle_rule: negative input");
    integral += f[i] * weights[i];
    if (f[i] >= a) tail += weights[i];
  }
  return {integral < a * b, tail < b};
}

}  // namespace symdyn
