#include "symdyn/quasitiling.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <unordered_map>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>
#include <nlohmann/json.hpp>

#include "symdyn/error.hpp"
#include "symdyn/rng.hpp"

namespace symdyn {

std::size_t Quasitiling::tile_count() const {
  std::size_t n = 0;
  for (const auto& c : centers) n += c.size();
  return n;
}

void Quasitiling::validate() const {
  require(shapes.size() == centers.size(), ErrorCode::kInvalidArgument, "tiling: shapes/centers size mismatch");
  std::vector<char> used(window.size(), 0);
  const Group& g = window.group();
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    for (const auto& c : centers[i]) {
      require(window.contains(c), ErrorCode::kDomainEscape, "tiling: center outside the window");
      auto& u = used[window.index(c)];
      require(!u, ErrorCode::kPrecondition, "tiling: two tiles share a center");
      u = 1;
      for (const auto& f : shapes[i].cells)
        require(window.contains(g.multiply(f, c)), ErrorCode::kDomainEscape, "tiling: tile leaves the window");
    }
  }
}

std::vector<Tile> tiles_of(const Quasitiling& t) {
  std::vector<Tile> out;
  const Group& g = t.window.group();
  for (std::size_t i = 0; i < t.shapes.size(); ++i)
    for (const auto& c : t.centers[i]) out.push_back({i, c, translate_set(g, t.shapes[i].cells, c, Side::kRight)});
  std::sort(out.begin(), out.end(), [](const Tile& a, const Tile& b) { return a.center < b.center; });
  return out;
}

std::vector<char> tile_mask(const Quasitiling& t) {
  std::vector<char> mask(t.window.size(), 0);
  const Group& g = t.window.group();
  for (std::size_t i = 0; i < t.shapes.size(); ++i)
    for (const auto& c : t.centers[i])
      for (const auto& f : t.shapes[i].cells) {
        const Element h = g.multiply(f, c);
        if (t.window.contains(h)) mask[t.window.index(h)] = 1;
      }
  return mask;
}

Subset tile_union(const Quasitiling& t) {
  const auto mask = tile_mask(t);
  std::vector<Element> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(t.window.element(i));
  return Subset(std::move(out));
}

int tiling_layers(double eta) {
  require(eta > 0.0 && eta < 1.0, ErrorCode::kInvalidArgument, "eta must lie in (0, 1)");
  int m = 1;
  double v = 1.0 - eta;
  while (!(v < eta)) {
    v *= 1.0 - eta;
    ++m;
  }
  return m;
}

std::vector<int> tiling_indices(const TilingParams& p) {
  require(p.K >= 1, ErrorCode::kInvalidArgument, "K must be >= 1");
  const int n = tiling_layers(p.eta);
  if (!p.k_list.empty()) {
    require(static_cast<int>(p.k_list.size()) == n, ErrorCode::kInvalidArgument,
            "k_list must have one entry per layer (" + std::to_string(n) + ")");
    require(p.k_list.front() >= p.K && std::is_sorted(p.k_list.begin(), p.k_list.end()),
            ErrorCode::kInvalidArgument, "k_list must be non-decreasing and start at >= K");
    return p.k_list;
  }
  std::vector<int> ks(n);
  for (int i = 0; i < n; ++i) ks[i] = p.K + i;
  return ks;
}

CandidateField random_candidates(const Window& w, const TilingParams& p) {
  require(p.candidate_rate > 0.0 && p.candidate_rate <= 1.0, ErrorCode::kInvalidArgument,
          "candidate_rate must lie in (0, 1]");
  const int n = tiling_layers(p.eta);
  CandidateField f{w, {}};
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(p.seed, "tiling-layer-" + std::to_string(i)));
    std::vector<char> layer(w.size());
    for (auto& v : layer) v = rng.uniform() < p.candidate_rate ? 1 : 0;
    f.layers.push_back(std::move(layer));
  }
  return f;
}

namespace {

// Covered-cell counts over axis-aligned boxes of a Z or Z^2 window, through a
// prefix-sum table rebuilt lazily after each placement.
class BoxCounter {
 public:
  BoxCounter(const Window& w, const std::vector<std::uint16_t>& mult)
      : w_(w), mult_(mult), rank_(w.group().rank()) {
    rows_ = rank_ == 2 ? w.extents()[0] : 1;
    cols_ = w.extents().back();
    sums_.assign(static_cast<std::size_t>((rows_ + 1) * (cols_ + 1)), 0);
  }
  bool supported() const { return w_.group().abelian(); }
  void invalidate() { dirty_ = true; }

  // Cells of F_k g (a box of radius k) already covered.
  std::int64_t count(const Element& g, int k) {
    if (dirty_) rebuild();
    const std::int64_t c0 = g.c[rank_ - 1] - w_.origin().c[rank_ - 1] - k;
    const std::int64_t c1 = c0 + 2 * k + 1;
    std::int64_t r0 = 0, r1 = 1;
    if (rank_ == 2) {
      r0 = g.c[0] - w_.origin().c[0] - k;
      r1 = r0 + 2 * k + 1;
    }
    return at(r1, c1) - at(r0, c1) - at(r1, c0) + at(r0, c0);
  }

 private:
  std::int64_t& at(std::int64_t r, std::int64_t c) {
    return sums_[static_cast<std::size_t>(r * (cols_ + 1) + c)];
  }
  void rebuild() {
    for (std::int64_t r = 0; r < rows_; ++r)
      for (std::int64_t c = 0; c < cols_; ++c)
        at(r + 1, c + 1) = at(r, c + 1) + at(r + 1, c) - at(r, c) + (mult_[static_cast<std::size_t>(r * cols_ + c)] ? 1 : 0);
    dirty_ = false;
  }

  const Window& w_;
  const std::vector<std::uint16_t>& mult_;
  int rank_;
  std::int64_t rows_, cols_;
  std::vector<std::int64_t> sums_;
  bool dirty_ = true;
};

}  // namespace

Quasitiling construct_raw_quasitiling(const CandidateField& field, const TilingParams& p) {
  const Window& w = field.window;
  const Group& g = w.group();
  const auto ks = tiling_indices(p);
  const int n = static_cast<int>(ks.size());
  require(static_cast<int>(field.layers.size()) == n, ErrorCode::kInvalidArgument,
          "candidate field has the wrong number of layers");
  require(!contained_translates(w, g.folner(ks.back())).empty(), ErrorCode::kWindowTooSmall,
          "window too small for F_" + std::to_string(ks.back()));

  std::vector<std::uint16_t> mult(w.size(), 0);
  std::vector<std::int32_t> owner(w.size(), -1);
  std::vector<char> center_used(w.size(), 0);
  std::vector<std::int64_t> overlap;  // covered-by-others cell count per placed tile
  std::vector<std::int64_t> tile_size;
  BoxCounter counter(w, mult);

  Quasitiling raw;
  raw.window = w;
  for (int i = 0; i < n; ++i) {
    raw.shapes.push_back({g.folner(ks[i]), ks[i]});
    raw.centers.emplace_back();
  }

  for (int i = n - 1; i >= 0; --i) {
    const Subset& f = raw.shapes[i].cells;
    const double budget = p.eta * static_cast<double>(f.size());
    PatternScan scan(w, f);
    const auto& layer = field.layers[i];
    // Two sweeps per layer: the first only takes tiles disjoint from all
    // earlier ones, the second spends the overlap budget on what is left.
    for (int sweep = 0; sweep < 2; ++sweep)
    for (std::size_t pi = 0; pi < scan.count(); ++pi) {
      const Element& c = scan.positions()[pi];
      const std::size_t ci = w.index(c);
      if (!layer[ci] || center_used[ci]) continue;
      std::int64_t covered = 0;
      if (counter.supported()) {
        covered = counter.count(c, ks[i]);
      } else {
        for (std::size_t k = 0; k < f.size(); ++k) covered += mult[scan.site(pi, k)] ? 1 : 0;
      }
      if (sweep == 0 ? covered != 0 : !(static_cast<double>(covered) < budget)) continue;
      // Cells now covered exactly once become contested for their owner.
      std::map<std::int32_t, std::int64_t> gains;
      for (std::size_t k = 0; k < f.size(); ++k) {
        const std::size_t s = scan.site(pi, k);
        if (mult[s] == 1) ++gains[owner[s]];
      }
      bool ok = true;
      for (const auto& [o, gain] : gains)
        if (!(static_cast<double>(overlap[o] + gain) < p.eta * static_cast<double>(tile_size[o]))) ok = false;
      if (!ok) continue;
      const auto id = static_cast<std::int32_t>(overlap.size());
      overlap.push_back(covered);
      tile_size.push_back(static_cast<std::int64_t>(f.size()));
      for (const auto& [o, gain] : gains) overlap[o] += gain;
      for (std::size_t k = 0; k < f.size(); ++k) {
        const std::size_t s = scan.site(pi, k);
        if (mult[s] == 0) owner[s] = id;
        ++mult[s];
      }
      center_used[ci] = 1;
      raw.centers[i].push_back(c);
      counter.invalidate();
    }
  }
  return raw;
}

Quasitiling construct_quasitiling(const CandidateField& field, const TilingParams& p) {
  Quasitiling t = disjointify(construct_raw_quasitiling(field, p));
  const Group& g = field.window.group();
  for (const auto& s : t.shapes) {
    const Subset full = g.folner(s.folner_index);
    require(s.cells.is_subset_of(full) &&
                static_cast<double>(s.cells.size()) >= (1.0 - p.eta) * static_cast<double>(full.size()),
            ErrorCode::kInternal, "construct_quasitiling: a shape lost more than eta of its Folner set");
  }
  return t;
}

Quasitiling construct_quasitiling(const Window& w, const TilingParams& p) {
  return construct_quasitiling(random_candidates(w, p), p);
}

std::vector<Element> default_enumeration(const Quasitiling& t) {
  Subset all;
  for (const auto& s : t.shapes) all = set_union(all, s.cells);
  std::vector<Element> out{t.window.group().identity()};
  for (const auto& e : all)
    if (e != out.front()) out.push_back(e);
  return out;
}

Quasitiling disjointify(const Quasitiling& t) { return disjointify(t, default_enumeration(t)); }

Quasitiling disjointify(const Quasitiling& t, const std::vector<Element>& enumeration) {
  t.validate();
  const Window& w = t.window;
  const Group& g = w.group();
  std::unordered_map<Element, int, ElementHash> rank;
  for (std::size_t j = 0; j < enumeration.size(); ++j) {
    require(rank.emplace(enumeration[j], static_cast<int>(j)).second, ErrorCode::kInvalidArgument,
            "disjointify: enumeration repeats an element");
  }
  std::vector<std::vector<int>> shape_ranks(t.shapes.size());
  for (std::size_t i = 0; i < t.shapes.size(); ++i)
    for (const auto& f : t.shapes[i].cells) {
      auto it = rank.find(f);
      require(it != rank.end(), ErrorCode::kInvalidArgument, "disjointify: enumeration misses a shape element");
      shape_ranks[i].push_back(it->second);
    }

  const auto tiles = tiles_of(t);
  std::vector<int> best(w.size(), INT_MAX);
  std::vector<std::int32_t> winner(w.size(), -1);
  for (std::size_t ti = 0; ti < tiles.size(); ++ti) {
    const auto& shape = t.shapes[tiles[ti].shape].cells;
    for (std::size_t k = 0; k < shape.size(); ++k) {
      const std::size_t s = w.index(g.multiply(shape[k], tiles[ti].center));
      const int r = shape_ranks[tiles[ti].shape][k];
      if (r == best[s]) {
        fail(ErrorCode::kPrecondition, "disjointify: two tiles give the same enumeration index to one element");
      }
      if (r < best[s]) {
        best[s] = r;
        winner[s] = static_cast<std::int32_t>(ti);
      }
    }
  }

  std::map<std::pair<int, Subset>, std::vector<Element>> grouped;
  for (std::size_t ti = 0; ti < tiles.size(); ++ti) {
    std::vector<Element> kept;
    for (const auto& h : tiles[ti].cells)
      if (winner[w.index(h)] == static_cast<std::int32_t>(ti)) kept.push_back(g.multiply(h, g.inverse(tiles[ti].center)));
    grouped[{t.shapes[tiles[ti].shape].folner_index, Subset(std::move(kept))}].push_back(tiles[ti].center);
  }
  Quasitiling out;
  out.window = w;
  for (auto& [key, cs] : grouped) {
    std::sort(cs.begin(), cs.end());
    out.shapes.push_back({key.second, key.first});
    out.centers.push_back(std::move(cs));
  }
  return out;
}

DisjointWitness is_epsilon_disjoint(const Quasitiling& t, double eps) {
  const Window& w = t.window;
  DisjointWitness wit;
  auto tiles = tiles_of(t);
  std::vector<std::uint16_t> mult(w.size(), 0);
  for (const auto& tile : tiles)
    for (const auto& h : tile.cells) ++mult[w.index(h)];

  // Each tile needs strictly more than (1 - eps)|T| cells.
  std::vector<std::int64_t> need(tiles.size());
  std::vector<std::int64_t> missing(tiles.size());
  bool greedy_ok = true;
  for (std::size_t ti = 0; ti < tiles.size(); ++ti) {
    const double bound = (1.0 - eps) * static_cast<double>(tiles[ti].cells.size());
    need[ti] = static_cast<std::int64_t>(std::floor(bound)) + 1;
    if (need[ti] < 0) need[ti] = 0;
    std::int64_t free_cells = 0;
    for (const auto& h : tiles[ti].cells) free_cells += mult[w.index(h)] == 1 ? 1 : 0;
    missing[ti] = std::max<std::int64_t>(0, need[ti] - free_cells);
    if (missing[ti] > 0) greedy_ok = false;
    if (need[ti] > static_cast<std::int64_t>(tiles[ti].cells.size())) return wit;
  }

  std::vector<std::int32_t> assigned(w.size(), -1);
  if (!greedy_ok) {
    // Contested cells are distributed by max flow: source -> tile (missing),
    // tile -> contested cell (1), cell -> sink (1).
    using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
    using Graph = boost::adjacency_list<
        boost::vecS, boost::vecS, boost::directedS, boost::no_property,
        boost::property<boost::edge_capacity_t, long,
                        boost::property<boost::edge_residual_capacity_t, long,
                                        boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
    Graph graph;
    auto cap = boost::get(boost::edge_capacity, graph);
    auto rev = boost::get(boost::edge_reverse, graph);
    auto add = [&](std::size_t a, std::size_t b, long c) {
      auto e = boost::add_edge(a, b, graph).first;
      auto r = boost::add_edge(b, a, graph).first;
      cap[e] = c;
      cap[r] = 0;
      rev[e] = r;
      rev[r] = e;
      return e;
    };
    const std::size_t source = 0, sink = 1, tile0 = 2;
    std::unordered_map<std::size_t, std::size_t> cell_node;
    std::vector<std::pair<Traits::edge_descriptor, std::pair<std::size_t, std::size_t>>> tile_cell_edges;
    for (std::size_t ti = 0; ti < tiles.size(); ++ti) boost::add_vertex(graph);
    boost::add_vertex(graph);
    boost::add_vertex(graph);
    long demand = 0;
    for (std::size_t ti = 0; ti < tiles.size(); ++ti) {
      if (missing[ti] == 0) continue;
      add(source, tile0 + ti, static_cast<long>(missing[ti]));
      demand += static_cast<long>(missing[ti]);
      for (const auto& h : tiles[ti].cells) {
        const std::size_t s = w.index(h);
        if (mult[s] < 2) continue;
        auto it = cell_node.find(s);
        if (it == cell_node.end()) {
          const std::size_t v = boost::add_vertex(graph);
          add(v, sink, 1);
          it = cell_node.emplace(s, v).first;
        }
        tile_cell_edges.push_back({add(tile0 + ti, it->second, 1), {ti, s}});
      }
    }
    const long flow = boost::push_relabel_max_flow(graph, source, sink);
    if (flow < demand) return wit;
    auto resid = boost::get(boost::edge_residual_capacity, graph);
    for (const auto& [e, ts] : tile_cell_edges)
      if (cap[e] - resid[e] > 0) assigned[ts.second] = static_cast<std::int32_t>(ts.first);
  }

  wit.holds = true;
  for (std::size_t ti = 0; ti < tiles.size(); ++ti) {
    std::vector<Element> kept;
    for (const auto& h : tiles[ti].cells) {
      const std::size_t s = w.index(h);
      if (mult[s] == 1 || assigned[s] == static_cast<std::int32_t>(ti)) kept.push_back(h);
    }
    wit.reduced.push_back({tiles[ti].shape, tiles[ti].center, Subset(std::move(kept))});
  }
  return wit;
}

double covering_density(const Quasitiling& t, int n) {
  return lower_banach_density_window(t.window, tile_mask(t), n);
}

double interior_covering_density(const Quasitiling& t, int n, std::int64_t margin) {
  require(margin >= 0, ErrorCode::kInvalidArgument, "margin must be >= 0");
  const Window& w = t.window;
  std::vector<std::int64_t> ext = w.extents();
  Element origin = w.origin();
  for (std::size_t i = 0; i < ext.size(); ++i) {
    ext[i] -= 2 * margin;
    origin.c[i] += margin;
    require(ext[i] > 0, ErrorCode::kWindowTooSmall, "interior_covering_density: margin leaves no interior");
  }
  const Window inner(w.group(), ext, origin);
  const auto mask = tile_mask(t);
  std::vector<char> sub(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) sub[i] = mask[w.index(inner.element(i))];
  return lower_banach_density_window(inner, sub, n);
}

Configuration symbolic_encode(const Quasitiling& t) {
  require(t.shapes.size() <= 255, ErrorCode::kInvalidArgument, "symbolic_encode: more than 255 shapes");
  Configuration code(static_cast<int>(t.shapes.size()), t.window, 0);
  for (std::size_t i = 0; i < t.shapes.size(); ++i)
    for (const auto& c : t.centers[i]) {
      auto& v = code[c];
      require(v == 0, ErrorCode::kPrecondition, "symbolic_encode: center collision");
      v = static_cast<Symbol>(i + 1);
    }
  return code;
}

Quasitiling symbolic_decode(const Configuration& code, const std::vector<Shape>& shapes) {
  Quasitiling t;
  t.window = code.window;
  t.shapes = shapes;
  t.centers.assign(shapes.size(), {});
  for (std::size_t s = 0; s < code.symbols.size(); ++s) {
    const int v = code.symbols[s];
    if (v == 0) continue;
    require(v <= static_cast<int>(shapes.size()), ErrorCode::kInvalidArgument, "symbolic_decode: unknown shape");
    t.centers[v - 1].push_back(code.window.element(s));
  }
  return t;
}

nlohmann::json window_to_json(const Window& w) {
  return {{"group", w.group().name()},
          {"extents", w.extents()},
          {"origin", element_to_json(w.origin(), w.group().rank())}};
}

Window window_from_json(const nlohmann::json& j) {
  try {
    const Group g = Group::parse(j.at("group").get<std::string>());
    Element origin;
    if (j.contains("origin")) origin = element_from_json(j.at("origin"));
    return Window(g, j.at("extents").get<std::vector<std::int64_t>>(), origin);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("window: ") + ex.what());
  }
}

nlohmann::json tiling_to_json(const Quasitiling& t) {
  const int rank = t.window.group().rank();
  nlohmann::json j;
  j["window"] = window_to_json(t.window);
  auto shapes = nlohmann::json::array();
  for (const auto& s : t.shapes)
    shapes.push_back({{"folner_index", s.folner_index}, {"cells", subset_to_json(s.cells, rank)}});
  j["shapes"] = std::move(shapes);
  nlohmann::json centers = nlohmann::json::object();
  for (std::size_t i = 0; i < t.centers.size(); ++i) {
    auto cs = nlohmann::json::array();
    for (const auto& c : t.centers[i]) cs.push_back(element_to_json(c, rank));
    centers[std::to_string(i + 1)] = std::move(cs);
  }
  j["centers"] = std::move(centers);
  return j;
}

Quasitiling tiling_from_json(const nlohmann::json& j) {
  try {
    Quasitiling t;
    t.window = window_from_json(j.at("window"));
    for (const auto& s : j.at("shapes"))
      t.shapes.push_back({subset_from_json(s.at("cells")), s.value("folner_index", 0)});
    t.centers.assign(t.shapes.size(), {});
    for (const auto& [k, v] : j.at("centers").items()) {
      const int i = std::stoi(k);
      require(i >= 1 && i <= static_cast<int>(t.shapes.size()), ErrorCode::kParse, "tiling: bad shape index");
      for (const auto& c : v) t.centers[i - 1].push_back(element_from_json(c));
      std::sort(t.centers[i - 1].begin(), t.centers[i - 1].end());
    }
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("tiling: ") + ex.what());
  }
}

}  // namespace symdyn
