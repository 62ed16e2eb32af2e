#include "symdyn/markers.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

int marker_prime(int s, double delta_m) {
  require(s >= 2, ErrorCode::kInvalidArgument, "marker alphabet must have at least 2 symbols");
  require(delta_m > 0.0, ErrorCode::kInvalidArgument, "delta_M must be positive");
  for (int p = 2;; ++p) {
    if (!is_prime(p)) continue;
    if (std::pow(static_cast<long double>(s), -static_cast<long double>(p)) <= static_cast<long double>(delta_m))
      return p;
  }
}

std::vector<Element> orthant_enumeration(const Group& g, std::size_t count) {
  std::vector<Element> out;
  const int rank = g.rank();
  for (std::int64_t shell = 0; out.size() < count; ++shell) {
    std::vector<Element> layer;
    Element e;
    // All elements of [0, shell]^rank with max coordinate == shell.
    std::int64_t total = 1;
    for (int i = 0; i < rank; ++i) total *= shell + 1;
    for (std::int64_t code = 0; code < total; ++code) {
      std::int64_t rem = code;
      std::int64_t mx = 0;
      for (int i = rank - 1; i >= 0; --i) {
        e.c[i] = rem % (shell + 1);
        rem /= shell + 1;
        mx = std::max(mx, e.c[i]);
      }
      if (mx == shell) layer.push_back(e);
    }
    std::sort(layer.begin(), layer.end());
    for (const auto& x : layer) {
      if (out.size() == count) break;
      out.push_back(x);
    }
  }
  return out;
}

void MarkerSet::check_invariants() const {
  auto check = [](bool ok, const char* what) {
    require(ok, ErrorCode::kInternal, std::string("marker invariant violated: ") + what);
  };
  check(is_prime(static_cast<int>(d0.size())), "|D0| prime");
  check(d0.contains(group.identity()), "e in D0");
  check(std::pow(static_cast<long double>(alphabet), -static_cast<long double>(d0.size())) <=
            static_cast<long double>(delta_m),
        "s^-|D0| <= delta_M");
  const Subset d0sq = set_product(group, d0, d0);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    check(!d0sq.contains(gs[i]), "g_i not in D0^2");
    check(set_intersection(translate_set(group, d0, gs[i], Side::kRight), d0).empty(), "D0 g_i disjoint from D0");
    check(!d0.contains(gs[i]), "g_i outside D0");
    for (std::size_t j = 0; j < i; ++j) check(gs[i] != gs[j], "g_i distinct");
  }
  check(blocks.size() == gs.size(), "one block per g_i");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    check(blocks[i].domain == d, "block domain is D");
    for (const auto& x : d0) check(blocks[i].at(x) == Symbol{1}, "M_i is 1 on D0");
    for (std::size_t j = 0; j < gs.size(); ++j)
      check(blocks[i].at(gs[j]) == Symbol(i == j ? 1 : 2), "M_i symbol at g_j");
  }
}

MarkerSet construct_markers(int n, double delta_m, int s, const Group& g) {
  require(n >= 1, ErrorCode::kInvalidArgument, "need at least one marker");
  const int p = marker_prime(s, delta_m);
  MarkerSet m;
  m.group = g;
  m.alphabet = s;
  m.delta_m = delta_m;

  // Grow the enumeration until N admissible g_i are found after D0.
  std::size_t want = static_cast<std::size_t>(p + n) * 4 + 16;
  for (;;) {
    const auto order = orthant_enumeration(g, want);
    m.d0 = Subset(std::vector<Element>(order.begin(), order.begin() + p));
    const Subset d0sq = set_product(g, m.d0, m.d0);
    m.gs.clear();
    for (std::size_t i = static_cast<std::size_t>(p); i < order.size() && static_cast<int>(m.gs.size()) < n; ++i) {
      const Element& x = order[i];
      if (d0sq.contains(x) || m.d0.contains(x)) continue;
      if (!set_intersection(translate_set(g, m.d0, x, Side::kRight), m.d0).empty()) continue;
      m.gs.push_back(x);
    }
    if (static_cast<int>(m.gs.size()) == n) break;
    want *= 2;
  }

  std::vector<Element> dv(m.d0.begin(), m.d0.end());
  dv.insert(dv.end(), m.gs.begin(), m.gs.end());
  m.d = Subset(std::move(dv));
  for (int i = 0; i < n; ++i) {
    std::vector<Symbol> sym;
    for (const auto& x : m.d) {
      if (m.d0.contains(x) || x == m.gs[i]) {
        sym.push_back(1);
      } else {
        sym.push_back(2);
      }
    }
    m.blocks.emplace_back(s, m.d, std::move(sym));
  }
  m.d_inv_d = set_product(g, set_inverse(g, m.d), m.d);
  m.guard = set_difference(m.d_inv_d, m.d);
  for (const auto& x : m.d_inv_d) {
    if (x == g.identity()) continue;
    if (translate_set(g, m.d, x, Side::kRight).is_subset_of(m.d_inv_d)) m.rival_offsets.push_back(x);
  }
  m.check_invariants();
  return m;
}

double marker_budget(const MarkerSet& m, const BlockLaw& law) {
  return law.probability(m.d0, BlockKey(m.d0.size(), static_cast<char>(1)));
}

namespace {

// Which marker (1-based) C shows on D h, or 0. `read` returns nullopt outside
// the domain of C.
template <typename Read>
int marker_at(const MarkerSet& m, const Element& h, Read&& read) {
  const Group& g = m.group;
  for (const auto& x : m.d0) {
    const auto v = read(g.multiply(x, h));
    if (!v || *v != 1) return 0;
  }
  int found = 0;
  for (std::size_t j = 0; j < m.gs.size(); ++j) {
    const auto v = read(g.multiply(m.gs[j], h));
    if (!v) return 0;
    if (*v == 1) {
      if (found) return 0;
      found = static_cast<int>(j) + 1;
    } else if (*v != 2) {
      return 0;
    }
  }
  return found;
}

template <typename Read>
MarkerCheck verify_impl(const MarkerSet& m, const Element& g, Read&& read) {
  const Group& grp = m.group;
  for (const auto& x : m.d_inv_d)
    require(read(grp.multiply(x, g)).has_value(), ErrorCode::kDomainEscape,
            "verify_marker_uniqueness: (D u D^-1 D) g leaves the configuration");
  MarkerCheck r;
  r.marker = marker_at(m, g, read);
  if (r.marker == 0) return r;
  for (const auto& x : m.guard)
    if (*read(grp.multiply(x, g)) == 1) return r;
  for (const auto& x : m.rival_offsets) {
    const Element h = grp.multiply(x, g);
    if (marker_at(m, h, read) != 0) {
      r.verdict = MarkerVerdict::kViolated;
      r.offender = h;
      return r;
    }
  }
  r.verdict = MarkerVerdict::kHolds;
  return r;
}

}  // namespace

MarkerCheck verify_marker_uniqueness(const Configuration& c, const MarkerSet& m, const Element& g) {
  return verify_impl(m, g, [&](const Element& e) { return c.at(e); });
}

MarkerCheck verify_marker_uniqueness(const Block& c, const MarkerSet& m, const Element& g) {
  return verify_impl(m, g, [&](const Element& e) { return c.at(e); });
}

Configuration sample_marker_premise(const MarkerSet& m, const Window& w, const Element& g, int i, Rng& rng) {
  require(i >= 1 && static_cast<std::size_t>(i) <= m.count(), ErrorCode::kInvalidArgument,
          "sample_marker_premise: marker index out of range");
  const Group& grp = m.group;
  Configuration c(m.alphabet, w, 1);
  for (auto& v : c.symbols) v = static_cast<Symbol>(1 + rng.below(static_cast<std::uint64_t>(m.alphabet)));
  for (const auto& x : m.d_inv_d)
    require(w.contains(grp.multiply(x, g)), ErrorCode::kDomainEscape, "sample_marker_premise: D^-1 D g leaves the window");
  const Block& mi = m.blocks[static_cast<std::size_t>(i - 1)];
  for (std::size_t k = 0; k < m.d.size(); ++k) c[grp.multiply(m.d[k], g)] = mi.symbols[k];
  for (const auto& x : m.guard) {
    Symbol& v = c[grp.multiply(x, g)];
    if (v == 1) v = static_cast<Symbol>(2 + rng.below(static_cast<std::uint64_t>(m.alphabet - 1)));
  }
  return c;
}

std::vector<MarkerHit> find_marker_occurrences(const Configuration& c, const MarkerSet& m) {
  std::vector<MarkerHit> out;
  PatternScan scan(c.window, m.d);
  std::vector<std::size_t> d0_pos, g_pos;
  for (std::size_t k = 0; k < m.d.size(); ++k) {
    if (m.d0.contains(m.d[k])) d0_pos.push_back(k);
  }
  for (const auto& x : m.gs) g_pos.push_back(static_cast<std::size_t>(m.d.rank(x)));
  for (std::size_t i = 0; i < scan.count(); ++i) {
    bool ok = true;
    for (auto k : d0_pos)
      if (c.symbols[scan.site(i, k)] != 1) {
        ok = false;
        break;
      }
    if (!ok) continue;
    int found = 0;
    for (std::size_t j = 0; j < g_pos.size() && ok; ++j) {
      const Symbol v = c.symbols[scan.site(i, g_pos[j])];
      if (v == 1) {
        if (found) ok = false;
        found = static_cast<int>(j) + 1;
      } else if (v != 2) {
        ok = false;
      }
    }
    if (ok && found) out.push_back({scan.positions()[i], found});
  }
  return out;
}

std::vector<MarkerHit> find_marker_occurrences(const Block& c, const MarkerSet& m) {
  std::vector<MarkerHit> out;
  for (const auto& h : c.domain) {
    const int k = marker_at(m, h, [&](const Element& e) { return c.at(e); });
    if (k) out.push_back({h, k});
  }
  return out;
}

nlohmann::json markers_to_json(const MarkerSet& m) {
  const int rank = m.group.rank();
  nlohmann::json gs = nlohmann::json::array();
  for (const auto& x : m.gs) gs.push_back(element_to_json(x, rank));
  return {{"group", m.group.name()},
          {"alphabet", m.alphabet},
          {"delta_m", m.delta_m},
          {"d0", subset_to_json(m.d0, rank)},
          {"gs", std::move(gs)}};
}

MarkerSet markers_from_json(const nlohmann::json& j) {
  try {
    const Group g = Group::parse(j.at("group").get<std::string>());
    const auto m = construct_markers(static_cast<int>(j.at("gs").size()), j.at("delta_m").get<double>(),
                                     j.at("alphabet").get<int>(), g);
    require(subset_to_json(m.d0, g.rank()) == j.at("d0"), ErrorCode::kParse,
            "markers: stored D0 differs from the canonical construction");
    return m;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("markers: ") + ex.what());
  }
}

}  // namespace symdyn
