#include "symdyn/codec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "symdyn/error.hpp"

namespace symdyn {

std::vector<std::string> CodecParams::violations(const Group& g, int s) const {
  std::vector<std::string> v;
  auto need = [&](bool ok, const char* what) {
    if (!ok) v.emplace_back(what);
  };
  need(delta > 0.0 && delta < 1.0, "0 < delta < 1");
  need(eta > 0.0 && eta < 1.0, "0 < eta < 1");
  need(l >= 1, "l >= 1");
  need(k >= 1, "k >= 1");
  need(j_max >= 0, "j_max >= 0");
  need(n0 >= 1, "n0 >= 1");
  need(eps > 0.0, "eps > 0");
  need(s >= 2, "s >= 2");
  if (!v.empty()) return v;
  const double f = static_cast<double>(g.folner(n0).size());
  need(delta < eps / (18.0 * f), "delta < eps / (18 |F_n0|)");
  need(eta < eps / (12.0 * f), "eta < eps / (12 |F_n0|)");
  need(delta < d_gap / 12.0, "delta < d_gap / 12");
  const double lg = std::max(std::log2(static_cast<double>(s)), std::log2(static_cast<double>(l)));
  need((2.0 * delta + 2.0 * eta) * lg < eps_k, "(2 delta + 2 eta) max(log s, log l) < eps_k");
  return v;
}

void CodecParams::validate(const Group& g, int s) const {
  const auto v = violations(g, s);
  if (!v.empty()) fail(ErrorCode::kInvalidArgument, "codec parameters violate " + v.front());
}

nlohmann::json codec_params_to_json(const CodecParams& p) {
  return {{"delta", p.delta}, {"eta", p.eta},     {"l", p.l},         {"k", p.k},
          {"eps_k", p.eps_k}, {"d_gap", p.d_gap}, {"j_max", p.j_max}, {"n0", p.n0},
          {"eps", p.eps},     {"delta_prime", p.delta_prime}};
}

CodecParams codec_params_from_json(const nlohmann::json& j) {
  try {
    CodecParams p;
    p.delta = j.at("delta").get<double>();
    p.eta = j.at("eta").get<double>();
    p.l = j.at("l").get<int>();
    p.k = j.at("k").get<int>();
    p.eps_k = j.at("eps_k").get<double>();
    p.d_gap = j.value("d_gap", 0.0);
    p.j_max = j.value("j_max", p.j_max);
    p.n0 = j.value("n0", p.n0);
    p.eps = j.value("eps", p.eps);
    p.delta_prime = j.value("delta_prime", p.delta_prime);
    return p;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("codec params: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------

ProductLaw::ProductLaw(const BlockLaw& x, const BlockLaw& y) : x_(&x), y_(&y) {}

std::pair<BlockKey, BlockKey> ProductLaw::split(const BlockKey& key) const {
  const int l = y_->alphabet();
  BlockKey a(key.size(), '\0'), b(key.size(), '\0');
  for (std::size_t i = 0; i < key.size(); ++i) {
    const int z = static_cast<unsigned char>(key[i]);
    if (z < 1 || z > alphabet()) continue;  // stays 0, which no law accepts
    a[i] = static_cast<char>((z - 1) / l + 1);
    b[i] = static_cast<char>((z - 1) % l + 1);
  }
  return {a, b};
}

double ProductLaw::probability(const Subset& domain, const BlockKey& key) const {
  const auto [a, b] = split(key);
  return x_->probability(domain, a) * y_->probability(domain, b);
}

double ProductLaw::log2_probability(const Subset& domain, const BlockKey& key) const {
  const auto [a, b] = split(key);
  return x_->log2_probability(domain, a) + y_->log2_probability(domain, b);
}

BlockKey combine_keys(const BlockKey& x, const BlockKey& y, int l) {
  require(x.size() == y.size(), ErrorCode::kInvalidArgument, "combine_keys: length mismatch");
  BlockKey z(x.size(), '\0');
  for (std::size_t i = 0; i < x.size(); ++i)
    z[i] = static_cast<char>((static_cast<unsigned char>(x[i]) - 1) * l + static_cast<unsigned char>(y[i]));
  return z;
}

// ---------------------------------------------------------------------------

bool passes_smb_filter(const BlockLaw& law, const Subset& s, const BlockKey& key, const SmbFilter& f) {
  const double n = static_cast<double>(s.size());
  const double lp = law.log2_probability(s, key);
  const bool lower = lp >= -n * (f.h + f.delta);
  const bool upper = lp <= -n * (f.h - f.delta);
  switch (f.side) {
    case FilterSide::kY:
      return lower;
    case FilterSide::kX:
      return upper;
    case FilterSide::kJoint: {
      if (!lower || !upper) return false;
      if (f.delta_prime <= 0.0) return true;
      std::vector<Symbol> sym(key.begin(), key.end());
      const Block b(law.alphabet(), s, std::move(sym));
      return metric_measure_block(law, b, f.group, f.metric) < f.delta_prime;
    }
  }
  return false;
}

BlockFamily filter_blocks_smb(const BlockLaw& law, const Subset& s, const std::vector<BlockKey>& candidates,
                              const SmbFilter& f) {
  BlockFamily fam;
  fam.domain = s;
  std::set<BlockKey> seen;
  for (const auto& k : candidates) {
    if (!seen.insert(k).second) continue;
    if (!passes_smb_filter(law, s, k, f)) continue;
    fam.blocks.push_back(k);
    fam.mass += law.probability(s, k);
  }
  return fam;
}

BlockFamily filter_blocks_smb(const EmpiricalMeasure& m, const Subset& s, const SmbFilter& f) {
  for (int d = 0; d <= m.n_max(); ++d) {
    if (m.table(d).domain != s) continue;
    std::vector<BlockKey> keys;
    for (const auto& [k, p] : m.table(d).probs) keys.push_back(k);
    return filter_blocks_smb(m, s, keys, f);
  }
  fail(ErrorCode::kMissingTable, "filter_blocks_smb: no table on the requested domain");
}

// ---------------------------------------------------------------------------

Block psi_transform(const Block& ap, const MarkerSet& m, int i) {
  require(i >= 1 && static_cast<std::size_t>(i) <= m.count(), ErrorCode::kInvalidArgument,
          "psi_transform: marker index out of range");
  require(m.d.is_subset_of(ap.domain), ErrorCode::kPrecondition, "psi_transform: D is not inside S");
  const Group& g = m.group;
  const Subset& s = ap.domain;
  Block a = ap;

  const Block& mi = m.blocks[static_cast<std::size_t>(i - 1)];
  for (std::size_t k = 0; k < m.d.size(); ++k) a.symbols[static_cast<std::size_t>(s.rank(m.d[k]))] = mi.symbols[k];

  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    if (a.symbols[idx] != 1 || m.d.contains(s[idx])) continue;
    for (const auto& x : m.d) {
      if (!s.contains(g.multiply(x, s[idx]))) {
        a.symbols[idx] = 2;
        break;
      }
    }
  }

  const Element e = g.identity();
  for (;;) {
    const auto hits = find_marker_occurrences(a, m);
    auto rival = std::find_if(hits.begin(), hits.end(), [&](const MarkerHit& h) { return h.position != e; });
    if (rival == hits.end()) {
      require(hits.size() == 1 && hits.front().marker == i, ErrorCode::kInternal,
              "psi_transform: the stamped marker did not survive");
      return a;
    }
    bool flipped = false;
    for (const auto& y : translate_set(g, m.d, rival->position, Side::kRight)) {
      if (m.d.contains(y)) continue;
      auto& v = a.symbols[static_cast<std::size_t>(s.rank(y))];
      if (v == 1) {
        v = 2;
        flipped = true;
        break;
      }
    }
    require(flipped, ErrorCode::kInternal, "psi_transform: a second marker lies entirely inside D");
  }
}

// ---------------------------------------------------------------------------

namespace {

using boost::multiprecision::cpp_int;

// delta as p / q from its shortest decimal spelling.
std::pair<cpp_int, cpp_int> decimal_rational(double delta) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, delta);
  const std::string text(buf, res.ptr);
  std::string digits;
  int exp10 = 0;
  bool frac = false;
  std::size_t i = 0;
  for (; i < text.size() && text[i] != 'e'; ++i) {
    if (text[i] == '.') {
      frac = true;
    } else if (text[i] >= '0' && text[i] <= '9') {
      digits += text[i];
      if (frac) --exp10;
    }
  }
  if (i < text.size()) exp10 += std::stoi(text.substr(i + 1));
  // A leading 0 would make cpp_int read the digits as octal.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  cpp_int p(digits.empty() ? "0" : digits);
  cpp_int q = 1;
  if (exp10 >= 0) {
    p *= boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(exp10));
  } else {
    q = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(-exp10));
  }
  const cpp_int g = gcd(p, q);
  if (g > 1) {
    p /= g;
    q /= g;
  }
  return {p, q};
}

double log2_big(const cpp_int& v) {
  if (v <= 0) return -std::numeric_limits<double>::infinity();
  const std::size_t bits = msb(v) + 1;
  if (bits <= 60) return std::log2(v.convert_to<double>());
  const cpp_int top = v >> (bits - 60);
  return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 60);
}

}  // namespace

CountingBound counting_bound_check(std::uint64_t s_size, std::uint64_t d_size, std::uint64_t j, int s, double delta) {
  require(s >= 1, ErrorCode::kInvalidArgument, "counting_bound_check: alphabet must be nonempty");
  require(std::isfinite(delta), ErrorCode::kInvalidArgument, "counting_bound_check: delta must be finite");
  CountingBound r;
  cpp_int lhs = boost::multiprecision::pow(cpp_int(s), static_cast<unsigned>(d_size));
  cpp_int binom = 1;
  const std::uint64_t top = std::min(j, s_size);
  for (std::uint64_t i = 1; i <= top; ++i) {
    binom = binom * (s_size - i + 1) / i;
    lhs += binom << static_cast<unsigned>(i);
  }
  r.log2_lhs = log2_big(lhs);

  if (delta < 0.0) {
    r.holds = false;  // the right side is below 1 <= LHS
  } else {
    const auto [p, q] = decimal_rational(delta);
    const cpp_int exponent = 2 * p * s_size;  // LHS^q <= 2^exponent
    const cpp_int bits = msb(lhs) + 1;
    if ((bits - 1) * q > exponent) {
      r.holds = false;
    } else if (bits * q <= exponent) {
      r.holds = true;
    } else {
      require(bits * q <= cpp_int(1) << 26, ErrorCode::kInvalidArgument,
              "counting_bound_check: delta has too many decimal digits for an exact comparison");
      const auto qq = q.convert_to<unsigned>();
      r.holds = boost::multiprecision::pow(lhs, qq) <= (cpp_int(1) << exponent.convert_to<unsigned>());
    }
  }

  const double n = static_cast<double>(s_size);
  const double lg = std::log2(static_cast<double>(s));
  r.size_condition = lg == 0.0 ? delta > 0.0 || d_size == 0 : static_cast<double>(d_size) < delta / lg * n;
  if (j == 0) {
    r.occurrence_condition = delta >= 0.0;
  } else if (s_size == 0) {
    r.occurrence_condition = false;
  } else {
    const double jj = static_cast<double>(j);
    r.occurrence_condition = 2.0 * jj / n + jj / n * std::log2(3.0 * n / jj) <= delta;
  }
  return r;
}

// ---------------------------------------------------------------------------

const BlockKey& Dictionary::image(const BlockKey& b) const {
  auto it = forward.find(b);
  if (it != forward.end()) return it->second;
  require(!forward.empty(), ErrorCode::kPrecondition, "dictionary: empty dictionary has no default image");
  return default_image;
}

std::optional<BlockKey> Dictionary::preimage(const BlockKey& a) const {
  auto it = inverse.find(a);
  if (it == inverse.end()) return std::nullopt;
  return it->second;
}

void Dictionary::check(const MarkerSet& m, int s) const {
  require(forward.size() == inverse.size(), ErrorCode::kInternal, "dictionary: map is not injective");
  for (const auto& [b, a] : forward) {
    auto it = inverse.find(a);
    require(it != inverse.end() && it->second == b, ErrorCode::kInternal, "dictionary: inverse disagrees");
    require(a.size() == shape.size() && b.size() == shape.size(), ErrorCode::kInternal,
            "dictionary: block size differs from the shape");
    const Block blk(s, shape, std::vector<Symbol>(a.begin(), a.end()));
    const auto hits = find_marker_occurrences(blk, m);
    require(hits.size() == 1 && hits.front().position == m.group.identity() && hits.front().marker == marker,
            ErrorCode::kInternal, "dictionary: an image does not carry exactly one marker at e");
  }
  if (!forward.empty())
    require(default_image == inverse.begin()->first, ErrorCode::kInternal,
            "dictionary: default image is not the first image");
}

Dictionary build_dictionary(const Subset& shape, const std::vector<BlockKey>& bfam,
                            const std::vector<BlockKey>& afam,
                            const std::vector<std::pair<std::size_t, std::size_t>>& relation, std::size_t K) {
  const std::size_t nb = bfam.size(), na = afam.size();
  require(std::set<BlockKey>(bfam.begin(), bfam.end()).size() == nb, ErrorCode::kInvalidArgument,
          "build_dictionary: repeated Y-block");
  require(std::set<BlockKey>(afam.begin(), afam.end()).size() == na, ErrorCode::kInvalidArgument,
          "build_dictionary: repeated X-block");
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [b, a] : relation) {
    require(b < nb && a < na, ErrorCode::kInvalidArgument, "build_dictionary: relation index out of range");
    edges.emplace(b, a);
  }
  std::vector<std::size_t> deg_b(nb, 0), deg_a(na, 0);
  for (const auto& [b, a] : edges) {
    ++deg_b[b];
    ++deg_a[a];
  }
  for (std::size_t b = 0; b < nb; ++b)
    require(deg_b[b] >= K, ErrorCode::kPrecondition,
            "build_dictionary: Y-block #" + std::to_string(b) + " has " + std::to_string(deg_b[b]) +
                " partners, fewer than K = " + std::to_string(K));
  for (std::size_t a = 0; a < na; ++a)
    require(deg_a[a] <= K, ErrorCode::kPrecondition,
            "build_dictionary: X-block #" + std::to_string(a) + " has " + std::to_string(deg_a[a]) +
                " partners, more than K = " + std::to_string(K));

  Dictionary d;
  d.shape = shape;
  if (nb == 0) return d;

  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  Graph graph(nb + na);
  for (const auto& [b, a] : edges) boost::add_edge(b, nb + a, graph);
  std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(nb + na);
  boost::edmonds_maximum_cardinality_matching(graph, mate.data());
  const auto none = boost::graph_traits<Graph>::null_vertex();
  for (std::size_t b = 0; b < nb; ++b) {
    require(mate[b] != none, ErrorCode::kInternal,
            "build_dictionary: matching misses Y-block #" + std::to_string(b) + " although the degrees admit one");
    const BlockKey& a = afam[mate[b] - nb];
    d.forward.emplace(bfam[b], a);
    d.inverse.emplace(a, bfam[b]);
  }
  d.default_image = d.inverse.begin()->first;
  return d;
}

namespace {

nlohmann::json key_json(const BlockKey& k) {
  auto j = nlohmann::json::array();
  for (char c : k) j.push_back(static_cast<int>(static_cast<unsigned char>(c)));
  return j;
}

BlockKey key_of_json(const nlohmann::json& j) {
  BlockKey k;
  for (const auto& v : j) k.push_back(static_cast<char>(v.get<int>()));
  return k;
}

}  // namespace

nlohmann::json dictionary_to_json(const Dictionary& d, const Group& g) {
  auto entries = nlohmann::json::array();
  for (const auto& [b, a] : d.forward) entries.push_back({{"b", key_json(b)}, {"a", key_json(a)}});
  return {{"shape", subset_to_json(d.shape, g.rank())},
          {"marker", d.marker},
          {"default", key_json(d.default_image)},
          {"entries", std::move(entries)}};
}

Dictionary dictionary_from_json(const nlohmann::json& j) {
  try {
    Dictionary d;
    d.shape = subset_from_json(j.at("shape"));
    d.marker = j.at("marker").get<int>();
    d.default_image = key_of_json(j.at("default"));
    for (const auto& e : j.at("entries")) {
      const BlockKey b = key_of_json(e.at("b")), a = key_of_json(e.at("a"));
      require(d.forward.emplace(b, a).second, ErrorCode::kParse, "dictionary: repeated Y-block");
      require(d.inverse.emplace(a, b).second, ErrorCode::kParse, "dictionary: two Y-blocks share an image");
    }
    return d;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("dictionary: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------

const Dictionary* Codebook::find(const Subset& shape) const {
  for (const auto& d : dicts)
    if (d.shape == shape) return &d;
  return nullptr;
}

int Codebook::marker_of(int folner_index) const {
  for (std::size_t i = 0; i < k_list.size(); ++i)
    if (k_list[i] == folner_index) return static_cast<int>(i) + 1;
  return 0;
}

nlohmann::json codebook_to_json(const Codebook& c) {
  auto dicts = nlohmann::json::array();
  for (const auto& d : c.dicts) dicts.push_back(dictionary_to_json(d, c.markers.group));
  return {{"markers", markers_to_json(c.markers)}, {"k_list", c.k_list}, {"s", c.s}, {"l", c.l},
          {"dictionaries", std::move(dicts)}};
}

Codebook codebook_from_json(const nlohmann::json& j) {
  try {
    Codebook c;
    c.markers = markers_from_json(j.at("markers"));
    c.k_list = j.at("k_list").get<std::vector<int>>();
    c.s = j.at("s").get<int>();
    c.l = j.at("l").get<int>();
    require(c.k_list.size() == c.markers.count(), ErrorCode::kParse, "codebook: one Folner index per marker");
    for (const auto& d : j.at("dictionaries")) {
      c.dicts.push_back(dictionary_from_json(d));
      c.dicts.back().check(c.markers, c.s);
    }
    return c;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("codebook: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------

MarkedTiling fit_markers(const Quasitiling& raw, const MarkerSet& m) {
  const Subset dd = set_product(m.group, m.d, m.d);
  MarkedTiling out;
  out.raw = raw;
  for (;;) {
    out.tiling = disjointify(out.raw);
    std::set<Element> bad;
    for (std::size_t i = 0; i < out.tiling.shapes.size(); ++i)
      if (!dd.is_subset_of(out.tiling.shapes[i].cells))
        bad.insert(out.tiling.centers[i].begin(), out.tiling.centers[i].end());
    if (bad.empty()) return out;
    out.dropped += bad.size();
    Quasitiling next;
    next.window = out.raw.window;
    for (std::size_t i = 0; i < out.raw.shapes.size(); ++i) {
      std::vector<Element> keep;
      for (const auto& c : out.raw.centers[i])
        if (!bad.count(c)) keep.push_back(c);
      if (keep.empty()) continue;
      next.shapes.push_back(out.raw.shapes[i]);
      next.centers.push_back(std::move(keep));
    }
    out.raw = std::move(next);
  }
}

Configuration encode(const Configuration& y, const Quasitiling& t, const Codebook& book) {
  require(y.window == t.window, ErrorCode::kInvalidArgument, "encode: tiling and y live on different windows");
  const Group& g = t.window.group();
  Configuration xbar(book.s, t.window, 2);
  for (std::size_t i = 0; i < t.shapes.size(); ++i) {
    const Dictionary* d = book.find(t.shapes[i].cells);
    require(d != nullptr, ErrorCode::kMissingTable, "encode: no dictionary for shape " + std::to_string(i + 1));
    const auto& cells = t.shapes[i].cells;
    for (const auto& c : t.centers[i]) {
      BlockKey b(cells.size(), '\0');
      for (std::size_t k = 0; k < cells.size(); ++k) b[k] = static_cast<char>(y[g.multiply(cells[k], c)]);
      const BlockKey& a = d->image(b);
      for (std::size_t k = 0; k < cells.size(); ++k) xbar[g.multiply(cells[k], c)] = static_cast<Symbol>(a[k]);
    }
  }
  return xbar;
}

DecodeResult decode(const Configuration& xbar, const Codebook& book) {
  const Window& w = xbar.window;
  const Group& g = w.group();
  DecodeResult r;
  r.y = Configuration(book.l, w, 0);
  r.known.assign(w.size(), 0);
  r.tiling.window = w;

  std::map<int, std::vector<Element>> by_marker;
  for (const auto& hit : find_marker_occurrences(xbar, book.markers)) by_marker[hit.marker].push_back(hit.position);
  Quasitiling raw;
  raw.window = w;
  for (auto& [marker, centers] : by_marker) {
    const int k = book.k_list[static_cast<std::size_t>(marker - 1)];
    Shape shape{g.folner(k), k};
    std::vector<Element> fit;
    for (const auto& c : centers) {
      bool inside = true;
      for (const auto& f : shape.cells)
        if (!w.contains(g.multiply(f, c))) {
          inside = false;
          break;
        }
      if (inside) fit.push_back(c);
    }
    if (fit.empty()) continue;
    raw.shapes.push_back(std::move(shape));
    raw.centers.push_back(std::move(fit));
  }
  if (raw.shapes.empty()) return r;
  try {
    r.tiling = disjointify(raw);
  } catch (const Error& ex) {
    if (ex.code() != ErrorCode::kPrecondition) throw;
    return r;  // the markers do not describe a tiling; nothing is recovered
  }

  std::size_t known = 0;
  for (std::size_t i = 0; i < r.tiling.shapes.size(); ++i) {
    const Dictionary* d = book.find(r.tiling.shapes[i].cells);
    if (d == nullptr) continue;
    const auto& cells = r.tiling.shapes[i].cells;
    for (const auto& c : r.tiling.centers[i]) {
      BlockKey a(cells.size(), '\0');
      for (std::size_t k = 0; k < cells.size(); ++k) a[k] = static_cast<char>(xbar[g.multiply(cells[k], c)]);
      const auto b = d->preimage(a);
      if (!b) continue;
      ++r.tiles_decoded;
      for (std::size_t k = 0; k < cells.size(); ++k) {
        const std::size_t site = w.index(g.multiply(cells[k], c));
        r.y.symbols[site] = static_cast<Symbol>((*b)[k]);
        r.known[site] = 1;
        ++known;
      }
    }
  }
  r.coverage = w.size() ? static_cast<double>(known) / static_cast<double>(w.size()) : 0.0;
  return r;
}

// ---------------------------------------------------------------------------

VklReport vkl_check(const EmpiricalMeasure& joint, int k, int l, int n) {
  require(joint.factors().has_value(), ErrorCode::kPrecondition, "vkl_check: joint measure has no product alphabet");
  require(k >= 1 && l >= 1, ErrorCode::kInvalidArgument, "vkl_check: k and l must be positive");
  const auto [s, ly] = *joint.factors();
  const Partition p = Partition::x_side(s, ly);
  const Partition q = Partition::y_truncated(s, ly, std::min(l, ly));
  const double eps = 1.0 / static_cast<double>(k);
  VklReport r;
  r.p_in_q = approx_inclusion_check(joint, p, q, eps, n);
  r.q_in_p = approx_inclusion_check(joint, q, p, eps, n);
  return r;
}

double entropy_deficit_bound(double h_nu, double delta, double eta, int l) {
  require(l >= 1, ErrorCode::kInvalidArgument, "entropy_deficit_bound: l must be positive");
  return h_nu - (2.0 * delta + 2.0 * eta) * std::log2(static_cast<double>(l));
}

EmpiricalMeasure predictor_joint(const Group& g, const std::vector<Symbol>& target, int s,
                                 const std::vector<int>& predictor, int labels) {
  require(target.size() == predictor.size(), ErrorCode::kInvalidArgument, "predictor_joint: length mismatch");
  std::map<BlockKey, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] == 0) continue;
    require(target[i] <= s && predictor[i] >= 1 && predictor[i] <= labels, ErrorCode::kInvalidArgument,
            "predictor_joint: symbol out of range");
    const int z = (target[i] - 1) * labels + predictor[i];
    ++counts[BlockKey(1, static_cast<char>(z))];
    ++total;
  }
  require(total > 0, ErrorCode::kPrecondition, "predictor_joint: no sites");
  BlockTable t;
  t.depth = 0;
  t.domain = depth_domain(g, 0);
  t.counts = counts;
  t.total = total;
  for (const auto& [k, c] : counts) t.probs[k] = static_cast<double>(c) / static_cast<double>(total);
  EmpiricalMeasure m(g, s * labels, {std::move(t)});
  m.set_factors(s, labels);
  return m;
}

}  // namespace symdyn
