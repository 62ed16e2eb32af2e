#include "symdyn/measure.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "symdyn/error.hpp"

namespace symdyn {

Subset depth_domain(const Group& g, int depth) {
  require(depth >= 0, ErrorCode::kInvalidArgument, "negative depth");
  if (depth == 0) return Subset{g.identity()};
  return g.folner(depth);
}

namespace {

BlockTable finish_table(std::unordered_map<BlockKey, std::uint64_t>&& raw, std::uint64_t total, Subset domain,
                        int depth) {
  BlockTable t;
  t.depth = depth;
  t.domain = std::move(domain);
  t.total = total;
  for (auto& [k, v] : raw) t.counts.emplace(k, v);
  for (const auto& [k, v] : t.counts) t.probs.emplace(k, static_cast<double>(v) / static_cast<double>(total));
  return t;
}

double block_family_size(int alphabet, std::size_t sites) {
  return std::pow(static_cast<double>(alphabet), static_cast<double>(sites));
}

}  // namespace

BlockTable count_blocks(const Configuration& c, const Subset& domain, int depth) {
  PatternScan scan(c.window, domain);
  require(scan.count() > 0, ErrorCode::kWindowTooSmall, "count_blocks: no translate of the domain fits the window");
  std::unordered_map<BlockKey, std::uint64_t> raw;
  BlockKey key(domain.size(), '\0');
  for (std::size_t i = 0; i < scan.count(); ++i) {
    for (std::size_t k = 0; k < domain.size(); ++k) key[k] = static_cast<char>(c.symbols[scan.site(i, k)]);
    ++raw[key];
  }
  return finish_table(std::move(raw), scan.count(), domain, depth);
}

EmpiricalMeasure::EmpiricalMeasure(Group group, int alphabet, std::vector<BlockTable> tables)
    : group_(group), alphabet_(alphabet), tables_(std::move(tables)) {
  require(alphabet_ >= 1 && alphabet_ <= 255, ErrorCode::kInvalidArgument, "measure: alphabet out of range");
  require(!tables_.empty(), ErrorCode::kInvalidArgument, "measure: no tables");
  for (std::size_t n = 0; n < tables_.size(); ++n) {
    require(tables_[n].depth == static_cast<int>(n), ErrorCode::kInvalidArgument, "measure: tables out of order");
    require(tables_[n].domain == depth_domain(group_, static_cast<int>(n)), ErrorCode::kInvalidArgument,
            "measure: table domain is not the reference domain");
  }
}

EmpiricalMeasure EmpiricalMeasure::from_configuration(const Configuration& c, int n_max, MeasureSource src) {
  require(n_max >= 0, ErrorCode::kInvalidArgument, "n_max must be >= 0");
  const Group& g = c.window.group();
  std::vector<BlockTable> tables;
  for (int n = 0; n <= n_max; ++n) {
    const Subset d = depth_domain(g, n);
    require(!contained_translates(c.window, d).empty(), ErrorCode::kWindowTooSmall,
            "empirical_measure: window too small for F_" + std::to_string(n));
    tables.push_back(count_blocks(c, d, n));
  }
  EmpiricalMeasure m(g, c.alphabet, std::move(tables));
  if (src.window_size == 0) src.window_size = c.window.size();
  m.source_ = std::move(src);
  return m;
}

EmpiricalMeasure EmpiricalMeasure::from_site_distribution(const Group& g, const std::vector<double>& p) {
  BlockTable t;
  t.depth = 0;
  t.domain = depth_domain(g, 0);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] >= 0.0, ErrorCode::kInvalidArgument, "site distribution: negative entry");
    total += p[i];
    if (p[i] > 0.0) t.probs.emplace(BlockKey(1, static_cast<char>(i + 1)), p[i]);
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorCode::kInvalidArgument, "site distribution: does not sum to 1");
  return EmpiricalMeasure(g, static_cast<int>(p.size()), {std::move(t)});
}

const BlockTable& EmpiricalMeasure::table(int depth) const {
  require(has_depth(depth), ErrorCode::kMissingTable, "measure has no table at depth " + std::to_string(depth));
  return tables_[static_cast<std::size_t>(depth)];
}

double EmpiricalMeasure::probability(const Subset& domain, const BlockKey& key) const {
  for (const auto& t : tables_)
    if (t.domain.size() == domain.size() && t.domain == domain) return t.probability(key);
  for (const auto& t : tables_) {
    if (!domain.is_subset_of(t.domain)) continue;
    std::vector<std::size_t> pos;
    for (const auto& e : domain) pos.push_back(static_cast<std::size_t>(t.domain.rank(e)));
    double p = 0.0;
    for (const auto& [k, v] : t.probs) {
      bool match = true;
      for (std::size_t i = 0; i < pos.size() && match; ++i) match = k[pos[i]] == key[i];
      if (match) p += v;
    }
    return p;
  }
  fail(ErrorCode::kMissingTable, "measure: no table covers the requested domain");
}

void EmpiricalMeasure::set_factors(int s, int l) {
  require(s >= 1 && l >= 1 && s * l == alphabet_, ErrorCode::kInvalidArgument,
          "set_factors: s*l must equal the alphabet size");
  factors_ = std::make_pair(s, l);
}

EmpiricalMeasure EmpiricalMeasure::relabel(const std::vector<int>& label_of, int labels) const {
  require(static_cast<int>(label_of.size()) == alphabet_ + 1, ErrorCode::kInvalidArgument,
          "relabel: label map size must be alphabet + 1");
  std::vector<BlockTable> out;
  for (const auto& t : tables_) {
    BlockTable r;
    r.depth = t.depth;
    r.domain = t.domain;
    r.total = t.total;
    auto map_key = [&](const BlockKey& k) {
      BlockKey m = k;
      for (auto& ch : m) ch = static_cast<char>(label_of[static_cast<unsigned char>(ch)]);
      return m;
    };
    if (t.has_counts()) {
      for (const auto& [k, v] : t.counts) r.counts[map_key(k)] += v;
      for (const auto& [k, v] : r.counts)
        r.probs.emplace(k, static_cast<double>(v) / static_cast<double>(r.total));
    } else {
      for (const auto& [k, v] : t.probs) r.probs[map_key(k)] += v;
    }
    out.push_back(std::move(r));
  }
  EmpiricalMeasure m(group_, labels, std::move(out));
  m.source_ = source_;
  return m;
}

double EmpiricalMeasure::normalization_error() const {
  double worst = 0.0;
  for (const auto& t : tables_) {
    double s = 0.0;
    for (const auto& [k, v] : t.probs) s += v;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json key_to_json(const BlockKey& k) {
  auto j = nlohmann::json::array();
  for (char ch : k) j.push_back(static_cast<int>(static_cast<unsigned char>(ch)));
  return j;
}

BlockKey key_from_json(const nlohmann::json& j) {
  BlockKey k;
  for (const auto& v : j) k.push_back(static_cast<char>(v.get<int>()));
  return k;
}

}  // namespace

nlohmann::json measure_to_json(const EmpiricalMeasure& m) {
  nlohmann::json j;
  j["group"] = m.group().name();
  j["alphabet"] = m.alphabet();
  if (m.factors()) j["factors"] = {m.factors()->first, m.factors()->second};
  j["source"] = {{"window_size", m.source().window_size}, {"seed", m.source().seed}, {"label", m.source().label}};
  auto tables = nlohmann::json::array();
  for (int n = 0; n <= m.n_max(); ++n) {
    const auto& t = m.table(n);
    nlohmann::json tj;
    tj["depth"] = n;
    tj["total"] = t.total;
    auto blocks = nlohmann::json::array();
    for (const auto& [k, p] : t.probs) {
      nlohmann::json b = {{"symbols", key_to_json(k)}, {"p", p}};
      if (t.has_counts()) b["count"] = t.counts.at(k);
      blocks.push_back(std::move(b));
    }
    tj["blocks"] = std::move(blocks);
    tables.push_back(std::move(tj));
  }
  j["tables"] = std::move(tables);
  return j;
}

EmpiricalMeasure measure_from_json(const nlohmann::json& j) {
  try {
    const Group g = Group::parse(j.at("group").get<std::string>());
    std::vector<BlockTable> tables;
    for (const auto& tj : j.at("tables")) {
      BlockTable t;
      t.depth = tj.at("depth").get<int>();
      t.domain = depth_domain(g, t.depth);
      t.total = tj.value("total", std::uint64_t{0});
      for (const auto& b : tj.at("blocks")) {
        const BlockKey k = key_from_json(b.at("symbols"));
        require(k.size() == t.domain.size(), ErrorCode::kParse, "measure: block length does not match depth");
        t.probs[k] = b.at("p").get<double>();
        if (t.total > 0) t.counts[k] = b.at("count").get<std::uint64_t>();
      }
      tables.push_back(std::move(t));
    }
    EmpiricalMeasure m(g, j.at("alphabet").get<int>(), std::move(tables));
    if (j.contains("factors")) m.set_factors(j["factors"][0].get<int>(), j["factors"][1].get<int>());
    if (j.contains("source")) {
      const auto& s = j["source"];
      m.set_source({s.value("window_size", std::uint64_t{0}), s.value("seed", std::uint64_t{0}),
                    s.value("label", std::string())});
    }
    return m;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("measure: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------

Configuration combine(const Configuration& x, const Configuration& y) {
  require(x.window == y.window, ErrorCode::kInvalidArgument, "combine: windows differ");
  require(x.alphabet * y.alphabet <= 255, ErrorCode::kInvalidArgument, "combine: product alphabet too large");
  Configuration z(x.alphabet * y.alphabet, x.window, 1);
  for (std::size_t i = 0; i < z.symbols.size(); ++i)
    z.symbols[i] = static_cast<Symbol>((x.symbols[i] - 1) * y.alphabet + y.symbols[i]);
  return z;
}

Configuration project_x(const Configuration& z, int l) {
  require(l >= 1 && z.alphabet % l == 0, ErrorCode::kInvalidArgument, "project_x: bad factor");
  Configuration x(z.alphabet / l, z.window, 1);
  for (std::size_t i = 0; i < z.symbols.size(); ++i) x.symbols[i] = static_cast<Symbol>((z.symbols[i] - 1) / l + 1);
  return x;
}

Configuration project_y(const Configuration& z, int l) {
  require(l >= 1 && z.alphabet % l == 0, ErrorCode::kInvalidArgument, "project_y: bad factor");
  Configuration y(l, z.window, 1);
  for (std::size_t i = 0; i < z.symbols.size(); ++i) y.symbols[i] = static_cast<Symbol>((z.symbols[i] - 1) % l + 1);
  return y;
}

double metric_truncation_bound(const MetricParams& p) { return std::ldexp(1.0, 1 - p.n_max); }

double metric_measures(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2, const MetricParams& p) {
  require(p.n_max >= 1, ErrorCode::kInvalidArgument, "n_max must be >= 1");
  require(m1.alphabet() == m2.alphabet(), ErrorCode::kAlphabetMismatch, "metric: alphabets differ");
  require(m1.group() == m2.group(), ErrorCode::kInvalidArgument, "metric: groups differ");
  double total = 0.0;
  for (int n = 1; n <= p.n_max; ++n) {
    const auto& a = m1.table(n).probs;
    const auto& b = m2.table(n).probs;
    double sum = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
      if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
        sum += ia->second;
        ++ia;
      } else if (ia == a.end() || ib->first < ia->first) {
        sum += ib->second;
        ++ib;
      } else {
        sum += std::abs(ia->second - ib->second);
        ++ia;
        ++ib;
      }
    }
    total += std::ldexp(1.0, -n) * sum / block_family_size(m1.alphabet(), m1.table(n).domain.size());
  }
  return total;
}

namespace {

// sum over all blocks of |law(B) - q(B)| where q is known on its support.
double law_l1(const BlockLaw& law, const Subset& domain, const std::map<BlockKey, double>& q) {
  double sum = 0.0;
  double covered = 0.0;
  for (const auto& [k, v] : q) {
    const double lp = law.probability(domain, k);
    covered += lp;
    sum += std::abs(lp - v);
  }
  return sum + std::max(0.0, 1.0 - covered);
}

}  // namespace

double metric_measures(const BlockLaw& law, const EmpiricalMeasure& m, const MetricParams& p) {
  require(p.n_max >= 1, ErrorCode::kInvalidArgument, "n_max must be >= 1");
  require(law.alphabet() == m.alphabet(), ErrorCode::kAlphabetMismatch, "metric: alphabets differ");
  double total = 0.0;
  for (int n = 1; n <= p.n_max; ++n) {
    const auto& t = m.table(n);
    total += std::ldexp(1.0, -n) * law_l1(law, t.domain, t.probs) / block_family_size(m.alphabet(), t.domain.size());
  }
  return total;
}

double metric_measure_block(const BlockLaw& m, const Configuration& c, const MetricParams& p) {
  require(p.n_max >= 1, ErrorCode::kInvalidArgument, "n_max must be >= 1");
  require(m.alphabet() == c.alphabet, ErrorCode::kAlphabetMismatch, "metric: alphabets differ");
  const Group& g = c.window.group();
  require(!contained_translates(c.window, g.folner(1)).empty(), ErrorCode::kWindowTooSmall,
          "metric_measure_block: domain of C smaller than F_1");
  const double size = static_cast<double>(c.window.size());
  double total = 0.0;
  for (int n = 1; n <= p.n_max; ++n) {
    const Subset d = g.folner(n);
    std::map<BlockKey, double> fr;
    if (!contained_translates(c.window, d).empty()) {
      const auto t = count_blocks(c, d, n);
      for (const auto& [k, v] : t.counts) fr.emplace(k, static_cast<double>(v) / size);
    }
    total += std::ldexp(1.0, -n) * law_l1(m, d, fr) / block_family_size(c.alphabet, d.size());
  }
  return total;
}

double metric_measure_block(const BlockLaw& m, const Block& c, const Group& g, const MetricParams& p) {
  require(p.n_max >= 1, ErrorCode::kInvalidArgument, "n_max must be >= 1");
  require(m.alphabet() == c.alphabet, ErrorCode::kAlphabetMismatch, "metric: alphabets differ");
  require(fitting_translates(g.folner(1), c.domain, g) > 0, ErrorCode::kWindowTooSmall,
          "metric_measure_block: domain of C smaller than F_1");
  const double size = static_cast<double>(c.domain.size());
  double total = 0.0;
  for (int n = 1; n <= p.n_max; ++n) {
    const Subset d = g.folner(n);
    std::map<BlockKey, double> fr;
    for (const auto& h : c.domain) {
      BlockKey k;
      bool fits = true;
      for (const auto& x : d) {
        const auto v = c.at(g.multiply(x, h));
        if (!v) {
          fits = false;
          break;
        }
        k.push_back(static_cast<char>(*v));
      }
      if (fits) fr[k] += 1.0 / size;
    }
    total += std::ldexp(1.0, -n) * law_l1(m, d, fr) / block_family_size(c.alphabet, d.size());
  }
  return total;
}

SubsetFrequencyReport subset_frequency_bound_check(const Configuration& c, const Block& b, const Subset& f,
                                                   const Subset& fp, double mu_b, double delta) {
  require(delta > 0.0, ErrorCode::kInvalidArgument, "delta must be positive");
  SubsetFrequencyReport r;
  r.eta_limit = delta / (1.0 + 2.0 * delta);
  require(!f.empty(), ErrorCode::kInvalidArgument, "F is empty");
  auto average = [&](const Subset& s) {
    std::size_t hits = 0;
    for (const auto& g : s) hits += occurs_at(b, c, g) ? 1 : 0;
    return s.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(s.size());
  };
  r.avg_full = average(f);
  r.avg_sub = average(fp);
  if (!fp.is_subset_of(f)) {
    r.note = "F' is not a subset of F";
    return r;
  }
  if (!(static_cast<double>(fp.size()) > (1.0 - r.eta_limit) * static_cast<double>(f.size()))) {
    r.note = "F' is not large enough";
    return r;
  }
  if (std::abs(r.avg_full - mu_b) > delta) {
    r.note = "average over F is not delta-close to mu(B)";
    return r;
  }
  r.status = std::abs(r.avg_sub - mu_b) <= 2.0 * delta ? SubsetFrequencyReport::Status::kPass
                                                      : SubsetFrequencyReport::Status::kFail;
  return r;
}

}  // namespace symdyn
