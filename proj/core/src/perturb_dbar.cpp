#include "symdyn/perturb_dbar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/successive_shortest_path_nonnegative_weights.hpp>
#include <nlohmann/json.hpp>

#include "symdyn/error.hpp"
#include "symdyn/rng.hpp"

namespace symdyn {

void NoiseParams::validate() const {
  // eps = 0 is allowed: it is the identity map.
  require(eps >= 0.0 && eps < 1.0, ErrorCode::kInvalidArgument, "noise: need 0 <= eps < 1");
  require(s >= 1 && s <= 255, ErrorCode::kInvalidArgument, "noise: alphabet size out of range");
}

nlohmann::json noise_to_json(const NoiseParams& p) { return {{"eps", p.eps}, {"s", p.s}, {"seed", p.seed}}; }

NoiseParams noise_from_json(const nlohmann::json& j) {
  try {
    NoiseParams p;
    p.eps = j.at("eps").get<double>();
    p.s = j.at("s").get<int>();
    p.seed = j.value("seed", std::uint64_t{0});
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("noise: ") + ex.what());
  }
}

namespace {

// c ~ mu_0 for one site: 0 with probability 1 - eps, else uniform on 1..s.
Symbol draw_noise(Rng& rng, const NoiseParams& p) {
  if (p.eps == 0.0 || rng.uniform() >= p.eps) return 0;
  return static_cast<Symbol>(1 + rng.below(static_cast<std::uint64_t>(p.s)));
}

}  // namespace

Configuration perturb(const Configuration& x, const NoiseParams& p) {
  p.validate();
  require(x.alphabet <= p.s, ErrorCode::kAlphabetMismatch, "perturb: input alphabet exceeds s");
  Rng rng(p.seed);
  Configuration out = x;
  out.alphabet = p.s;
  for (auto& v : out.symbols) {
    const Symbol c = draw_noise(rng, p);
    if (c != 0) v = c;
  }
  return out;
}

Configuration perturb_joint(const Configuration& z, int l, const NoiseParams& p) {
  p.validate();
  require(l >= 1 && z.alphabet % l == 0, ErrorCode::kAlphabetMismatch, "perturb_joint: alphabet is not s * l");
  require(z.alphabet / l <= p.s, ErrorCode::kAlphabetMismatch, "perturb_joint: X alphabet exceeds s");
  Rng rng(p.seed);
  Configuration out = z;
  out.alphabet = p.s * l;
  for (auto& v : out.symbols) {
    const Symbol c = draw_noise(rng, p);
    if (c != 0) v = static_cast<Symbol>((c - 1) * l + (v - 1) % l + 1);
  }
  return out;
}

double total_variation(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2, int n) {
  const auto& a = m1.table(n).probs;
  const auto& b = m2.table(n).probs;
  double s = 0.0;
  for (const auto& [k, p] : a) s += std::abs(p - m2.table(n).probability(k));
  for (const auto& [k, q] : b)
    if (!a.count(k)) s += q;
  return 0.5 * s;
}

PerturbationReport verify_perturbation_bounds(const EmpiricalMeasure& before, const EmpiricalMeasure& after,
                                              const NoiseParams& p, int n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "verify_perturbation_bounds: depth must be >= 1");
  require(before.has_depth(n) && after.has_depth(n), ErrorCode::kMissingTable,
          "verify_perturbation_bounds: missing depth-n tables");
  require(before.factors().has_value() && before.factors() == after.factors(), ErrorCode::kAlphabetMismatch,
          "verify_perturbation_bounds: both measures need the same product alphabet");
  const auto [s, l] = *before.factors();
  require(s == p.s, ErrorCode::kAlphabetMismatch, "verify_perturbation_bounds: X alphabet differs from s");

  PerturbationReport r;
  r.distance = metric_measures(before, after, MetricParams{n});
  r.distance_limit = 2.0 * p.eps + 0.02;
  const Partition px = Partition::x_side(s, l);
  r.h_before = process_entropy_estimate(before, px, n).difference_quotient;
  r.h_after = process_entropy_estimate(after, px, n).difference_quotient;
  r.h_required = r.h_before + p.eps * (std::log2(static_cast<double>(s)) - r.h_before) - 0.05;
  const Partition py = Partition::y_side(s, l);
  r.y_drift = total_variation(before.relabel(py.label_of, py.labels), after.relabel(py.label_of, py.labels), n);
  r.distance_ok = r.distance <= r.distance_limit;
  r.entropy_ok = r.h_after >= r.h_required;
  r.marginal_ok = r.y_drift <= 0.01;
  return r;
}

// ---------------------------------------------------------------------------

void CouplingTable::validate(double tol) const {
  std::map<BlockKey, double> rows, cols;
  for (const auto& [k, v] : mass) {
    require(v >= 0.0 && std::isfinite(v), ErrorCode::kInvalidArgument, "coupling: negative or non-finite entry");
    require(first.count(k.first) && second.count(k.second), ErrorCode::kInvalidArgument,
            "coupling: entry outside the declared marginals");
    rows[k.first] += v;
    cols[k.second] += v;
  }
  for (const auto& [k, v] : first)
    require(std::abs(rows[k] - v) <= tol, ErrorCode::kInvalidArgument, "coupling: row sum differs from marginal");
  for (const auto& [k, v] : second)
    require(std::abs(cols[k] - v) <= tol, ErrorCode::kInvalidArgument, "coupling: column sum differs from marginal");
}

namespace {

// Integer masses summing to `total` exactly; exact from counts when possible.
struct Units {
  std::map<BlockKey, std::int64_t> a, b;
  std::int64_t total = 0;
};

std::map<BlockKey, std::int64_t> quantize(const std::map<BlockKey, double>& p, std::int64_t total) {
  std::map<BlockKey, std::int64_t> out;
  std::vector<std::pair<double, BlockKey>> rem;
  std::int64_t used = 0;
  for (const auto& [k, v] : p) {
    const double x = v * static_cast<double>(total);
    const auto f = static_cast<std::int64_t>(std::floor(x));
    out[k] = f;
    used += f;
    rem.emplace_back(x - static_cast<double>(f), k);
  }
  std::sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  for (std::size_t i = 0; used < total && i < rem.size(); ++i, ++used) ++out[rem[i].second];
  return out;
}

Units to_units(const BlockTable& t1, const BlockTable& t2) {
  Units u;
  if (t1.has_counts() && t2.has_counts() && t1.total <= (1u << 30) && t2.total <= (1u << 30)) {
    u.total = static_cast<std::int64_t>(t1.total) * static_cast<std::int64_t>(t2.total);
    for (const auto& [k, c] : t1.counts) u.a[k] = static_cast<std::int64_t>(c) * static_cast<std::int64_t>(t2.total);
    for (const auto& [k, c] : t2.counts) u.b[k] = static_cast<std::int64_t>(c) * static_cast<std::int64_t>(t1.total);
  } else {
    u.total = std::int64_t{1} << 40;
    u.a = quantize(t1.probs, u.total);
    u.b = quantize(t2.probs, u.total);
  }
  return u;
}

int hamming(const BlockKey& x, const BlockKey& y) {
  int d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
  return d;
}

}  // namespace

DbarResult dbar_estimate(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2, int n) {
  require(m1.alphabet() == m2.alphabet(), ErrorCode::kAlphabetMismatch, "dbar_estimate: alphabets differ");
  require(m1.has_depth(n) && m2.has_depth(n), ErrorCode::kMissingTable, "dbar_estimate: missing depth-n tables");
  const BlockTable& t1 = m1.table(n);
  const BlockTable& t2 = m2.table(n);
  require(t1.domain == t2.domain, ErrorCode::kInvalidArgument, "dbar_estimate: tables on different domains");
  const double sites = static_cast<double>(t1.domain.size());
  const Units u = to_units(t1, t2);
  const double total = static_cast<double>(u.total);

  DbarResult r;
  for (const auto& [k, v] : u.a) r.coupling.first[k] = static_cast<double>(v) / total;
  for (const auto& [k, v] : u.b) r.coupling.second[k] = static_cast<double>(v) / total;
  // Both marginals list the union of supports so the table is square.
  for (const auto& [k, v] : u.a) r.coupling.second.emplace(k, 0.0);
  for (const auto& [k, v] : u.b) r.coupling.first.emplace(k, 0.0);

  // For a metric cost some optimal plan leaves min(a, b) on the diagonal; only
  // the excess needs transporting.
  std::vector<std::pair<BlockKey, std::int64_t>> supply, demand;
  for (const auto& [k, v] : u.a) {
    auto it = u.b.find(k);
    const std::int64_t common = it == u.b.end() ? 0 : std::min(v, it->second);
    if (common > 0) r.coupling.mass[{k, k}] = static_cast<double>(common) / total;
    if (v > common) supply.emplace_back(k, v - common);
  }
  for (const auto& [k, v] : u.b) {
    auto it = u.a.find(k);
    const std::int64_t common = it == u.a.end() ? 0 : std::min(v, it->second);
    if (v > common) demand.emplace_back(k, v - common);
  }
  std::int64_t moved = 0;
  for (const auto& [k, v] : supply) moved += v;
  r.tv_bound = static_cast<double>(moved) / total / sites;
  if (supply.empty()) return r;

  using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
  using Graph = boost::adjacency_list<
      boost::vecS, boost::vecS, boost::directedS, boost::no_property,
      boost::property<boost::edge_capacity_t, std::int64_t,
                      boost::property<boost::edge_residual_capacity_t, std::int64_t,
                                      boost::property<boost::edge_reverse_t, Traits::edge_descriptor,
                                                      boost::property<boost::edge_weight_t, std::int64_t>>>>>;
  const std::size_t ns = supply.size(), nd = demand.size();
  const std::size_t src = ns + nd, dst = src + 1;
  Graph g(ns + nd + 2);
  auto cap = boost::get(boost::edge_capacity, g);
  auto rev = boost::get(boost::edge_reverse, g);
  auto wt = boost::get(boost::edge_weight, g);
  auto add = [&](std::size_t from, std::size_t to, std::int64_t c, std::int64_t w) {
    auto e = boost::add_edge(from, to, g).first;
    auto re = boost::add_edge(to, from, g).first;
    cap[e] = c;
    cap[re] = 0;
    wt[e] = w;
    wt[re] = -w;
    rev[e] = re;
    rev[re] = e;
    return e;
  };
  for (std::size_t i = 0; i < ns; ++i) add(src, i, supply[i].second, 0);
  for (std::size_t j = 0; j < nd; ++j) add(ns + j, dst, demand[j].second, 0);
  std::vector<std::vector<Traits::edge_descriptor>> mid(ns);
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < nd; ++j)
      mid[i].push_back(add(i, ns + j, moved, hamming(supply[i].first, demand[j].first)));

  boost::successive_shortest_path_nonnegative_weights(g, src, dst);
  auto res = boost::get(boost::edge_residual_capacity, g);
  long double cost = 0.0L;
  std::int64_t flowed = 0;
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < nd; ++j) {
      const std::int64_t f = cap[mid[i][j]] - res[mid[i][j]];
      if (f <= 0) continue;
      flowed += f;
      cost += static_cast<long double>(f) * static_cast<long double>(wt[mid[i][j]]);
      r.coupling.mass[{supply[i].first, demand[j].first}] = static_cast<double>(f) / total;
    }
  require(flowed == moved, ErrorCode::kInternal, "dbar_estimate: transport did not move all excess mass");
  r.value = static_cast<double>(cost / static_cast<long double>(u.total) / static_cast<long double>(sites));
  return r;
}

Agreement joining_agreement(const CouplingTable& rho, int /*n*/) {
  rho.validate(1e-9);
  require(rho.first.size() == rho.second.size() &&
              std::equal(rho.first.begin(), rho.first.end(), rho.second.begin(),
                         [](const auto& x, const auto& y) { return x.first == y.first; }),
          ErrorCode::kInvalidArgument, "joining_agreement: table is not square over one block set");
  Agreement a;
  for (const auto& [k, mu] : rho.first) {
    auto it = rho.mass.find({k, k});
    const double d = it == rho.mass.end() ? 0.0 : it->second;
    a.diagonal += d;
    a.deficits[k] = mu - d;
  }
  return a;
}

}  // namespace symdyn
