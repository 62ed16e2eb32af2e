#include "symdyn/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "symdyn/error.hpp"
#include "symdyn/rng.hpp"

namespace symdyn {

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// ---------------------------------------------------------------------------

SourceSpec parse_source(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, ErrorCode::kParse, "source: expected kind:parameters in '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  auto numbers = [](const std::string& s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        require(used == item.size(), ErrorCode::kParse, "source: bad number '" + item + "'");
      } catch (const std::logic_error&) {
        fail(ErrorCode::kParse, "source: bad number '" + item + "'");
      }
    }
    return out;
  };
  SourceSpec spec;
  if (kind == "bernoulli") {
    spec = SourceSpec::bernoulli(numbers(body, ','));
  } else if (kind == "uniform") {
    const auto n = numbers(body, ',');
    require(n.size() == 1 && n[0] >= 1 && n[0] == std::floor(n[0]), ErrorCode::kParse, "source: uniform:<s>");
    spec = SourceSpec::bernoulli(std::vector<double>(static_cast<std::size_t>(n[0]), 1.0 / n[0]));
  } else if (kind == "markov") {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(body);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(numbers(row, ','));
    spec = SourceSpec::markov(std::move(rows));
  } else if (kind == "constant") {
    const auto n = numbers(body, '/');
    require(n.size() == 2, ErrorCode::kParse, "source: constant:<symbol>/<alphabet>");
    spec = SourceSpec::constant(static_cast<int>(n[0]), static_cast<int>(n[1]));
  } else {
    fail(ErrorCode::kParse, "source: unknown kind '" + kind + "'");
  }
  spec.validate();
  return spec;
}

SourceSpec truncate_source(const SourceSpec& s, int l) {
  require(l >= 1, ErrorCode::kInvalidArgument, "truncate_source: l must be positive");
  if (s.alphabet() <= l) return s;
  switch (s.kind) {
    case SourceSpec::Kind::kConstant:
      return SourceSpec::constant(std::min(s.constant_symbol, l), l);
    case SourceSpec::Kind::kBernoulli: {
      std::vector<double> p(s.probs.begin(), s.probs.begin() + l);
      for (std::size_t i = static_cast<std::size_t>(l); i < s.probs.size(); ++i) p.back() += s.probs[i];
      return SourceSpec::bernoulli(std::move(p));
    }
    case SourceSpec::Kind::kMarkov:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "truncate_source: Markov sources must already fit in l symbols");
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json tiling_params_to_json(const TilingParams& p) {
  return {{"K", p.K}, {"candidate_rate", p.candidate_rate}, {"k_list", p.k_list}};
}

TilingParams tiling_params_from_json(const nlohmann::json& j) {
  TilingParams p;
  p.K = j.value("K", p.K);
  p.candidate_rate = j.value("candidate_rate", p.candidate_rate);
  p.k_list = j.value("k_list", std::vector<int>{});
  return p;
}

double entropy_of(const SourceSpec& s) { return s.entropy_rate(); }

}  // namespace

void ExperimentConfig::finalize() {
  tiling.eta = codec.eta;
  if (codec.d_gap == 0.0) {
    x_source.validate();
    y_source.validate();
    codec.d_gap = entropy_of(x_source) - entropy_of(truncate_source(y_source, codec.l));
  }
  const auto v = violations();
  if (!v.empty()) fail(ErrorCode::kInvalidArgument, "config violates " + v.front());
}

std::vector<std::string> ExperimentConfig::violations() const {
  std::vector<std::string> v;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) v.push_back(what);
  };
  Group g;
  try {
    g = Group::parse(group);
  } catch (const Error& e) {
    v.emplace_back(e.what());
    return v;
  }
  try {
    x_source.validate();
    y_source.validate();
    truncate_source(y_source, codec.l);
  } catch (const Error& e) {
    v.emplace_back(e.what());
    return v;
  }
  need(window >= 1, "window >= 1");
  need(x_source.alphabet() >= 2, "X alphabet s >= 2");
  for (const auto& s : codec.violations(g, x_source.alphabet())) v.push_back("codec: " + s);
  need(tiling.eta == codec.eta, "tiling eta equals codec eta");
  need(tiling.K >= 1, "tiling K >= 1");
  need(tiling.candidate_rate > 0.0 && tiling.candidate_rate <= 1.0, "0 < candidate_rate <= 1");
  need(delta_m > 0.0 && delta_m < 1.0, "0 < delta_m < 1");
  try {
    noise.validate();
  } catch (const Error& e) {
    v.emplace_back(e.what());
  }
  need(metric.n_max >= 1, "metric n_max >= 1");
  need(entropy_depth >= 1, "entropy_depth >= 1");
  need(afam_factor >= 1, "afam_factor >= 1");
  return v;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  return {{"group", c.group},
          {"window", c.window},
          {"x_source", source_to_json(c.x_source)},
          {"y_source", source_to_json(c.y_source)},
          {"codec", codec_params_to_json(c.codec)},
          {"tiling", tiling_params_to_json(c.tiling)},
          {"delta_m", c.delta_m},
          {"noise", noise_to_json(c.noise)},
          {"metric", {{"n_max", c.metric.n_max}}},
          {"entropy_depth", c.entropy_depth},
          {"afam_factor", c.afam_factor},
          {"seed", c.seed},
          {"out", c.out}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig c;
    c.group = j.at("group").get<std::string>();
    c.window = j.at("window").get<std::int64_t>();
    c.x_source = source_from_json(j.at("x_source"));
    c.y_source = source_from_json(j.at("y_source"));
    c.codec = codec_params_from_json(j.at("codec"));
    if (j.contains("tiling")) c.tiling = tiling_params_from_json(j.at("tiling"));
    c.tiling.eta = c.codec.eta;
    c.delta_m = j.value("delta_m", c.delta_m);
    if (j.contains("noise")) c.noise = noise_from_json(j.at("noise"));
    if (j.contains("metric")) c.metric.n_max = j.at("metric").value("n_max", c.metric.n_max);
    c.entropy_depth = j.value("entropy_depth", c.entropy_depth);
    c.afam_factor = j.value("afam_factor", c.afam_factor);
    c.seed = j.value("seed", c.seed);
    c.out = j.value("out", std::string{});
    return c;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("config: ") + ex.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kInvalidArgument, "cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, "config '" + path + "': " + ex.what());
  }
  ExperimentConfig c = config_from_json(j);
  c.finalize();
  return c;
}

std::string config_hash(const ExperimentConfig& c) {
  char buf[17];
  nlohmann::json j = config_to_json(c);
  j.erase("out");  // where reports go is not part of the experiment
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

nlohmann::json configuration_to_json(const Configuration& c) {
  auto syms = nlohmann::json::array();
  for (auto s : c.symbols) syms.push_back(static_cast<int>(s));
  return {{"window", window_to_json(c.window)}, {"alphabet", c.alphabet}, {"symbols", std::move(syms)}};
}

Configuration configuration_from_json(const nlohmann::json& j) {
  try {
    Configuration c(j.at("alphabet").get<int>(), window_from_json(j.at("window")), 1);
    const auto& syms = j.at("symbols");
    require(syms.size() == c.symbols.size(), ErrorCode::kParse, "configuration: symbol count differs from window");
    for (std::size_t i = 0; i < syms.size(); ++i) {
      const int v = syms[i].get<int>();
      require(v >= 0 && v <= c.alphabet, ErrorCode::kParse, "configuration: symbol out of range");
      c.symbols[i] = static_cast<Symbol>(v);
    }
    return c;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("configuration: ") + ex.what());
  }
}

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SYMDYN_OUT"); env != nullptr && *env != '\0') return env;
  return ".";
}

nlohmann::json provenance(const std::string& hash, std::uint64_t seed) {
  nlohmann::json versions;
  for (const char* m : {"group_core", "blocks", "quasitiling", "entropy", "markers", "codec", "perturb_dbar", "cli"})
    versions[m] = kVersion;
  return {{"config_hash", hash}, {"seed", seed}, {"versions", versions}};
}

std::string provenance_comment(const std::string& hash, std::uint64_t seed) {
  return "# symdyn " + std::string(kVersion) + " config_hash=" + hash + " seed=" + std::to_string(seed) + "\n";
}

// ---------------------------------------------------------------------------

namespace {

template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage '") + name + "': " + e.what());
  }
}

Window bounding_window(const Group& g, const Subset& s) {
  const int rank = g.rank();
  Element lo = s[0], hi = s[0];
  for (const auto& e : s)
    for (int i = 0; i < rank; ++i) {
      lo.c[i] = std::min(lo.c[i], e.c[i]);
      hi.c[i] = std::max(hi.c[i], e.c[i]);
    }
  std::vector<std::int64_t> ext;
  for (int i = 0; i < rank; ++i) ext.push_back(hi.c[i] - lo.c[i] + 1);
  return Window(g, ext, lo);
}

Assertion check_le(std::string name, double value, double bound) {
  return {std::move(name), value, bound, true, value <= bound};
}
Assertion check_ge(std::string name, double value, double bound) {
  return {std::move(name), value, bound, false, value >= bound};
}
Assertion check_true(std::string name, bool ok) { return check_ge(std::move(name), ok ? 1.0 : 0.0, 1.0); }

}  // namespace

PipelineReport run_pipeline(const ExperimentConfig& in) {
  PipelineReport r;
  r.config = in;
  ExperimentConfig& cfg = r.config;
  stage("config", [&] {
    cfg.finalize();
    return 0;
  });
  r.hash = config_hash(cfg);
  const CodecParams& cp = cfg.codec;
  const Group g = Group::parse(cfg.group);
  const Window w = Window::cube(g, cfg.window);
  const int s = cfg.x_source.alphabet();
  const SourceSpec ysrc = truncate_source(cfg.y_source, cp.l);
  const int ly = ysrc.alphabet();
  const SourceLaw xlaw(cfg.x_source, g), ylaw(ysrc, g);
  const ProductLaw xi(xlaw, ylaw);
  r.h_x = cfg.x_source.entropy_rate();
  r.h_y = ysrc.entropy_rate();

  const auto [x, y] = stage("sample", [&] {
    Rng rx(derive_seed(cfg.seed, "sample/x")), ry(derive_seed(cfg.seed, "sample/y"));
    return std::make_pair(cfg.x_source.sample(w, rx), ysrc.sample(w, ry));
  });

  TilingParams tp = cfg.tiling;
  tp.seed = derive_seed(cfg.seed, "tiling");
  const auto k_list = tiling_indices(tp);
  r.layers = k_list.size();
  const Quasitiling raw = stage("tiling", [&] { return construct_raw_quasitiling(random_candidates(w, tp), tp); });
  r.raw_tiles = raw.tile_count();

  Codebook& book = r.codebook;
  book.markers = stage("markers", [&] { return construct_markers(static_cast<int>(k_list.size()), cfg.delta_m, s, g); });
  book.k_list = k_list;
  book.s = s;
  book.l = ly;
  const MarkedTiling mt = stage("markers", [&] { return fit_markers(raw, book.markers); });
  r.dropped_tiles = mt.dropped;
  const Quasitiling& tiling = mt.tiling;

  const SmbFilter fy{r.h_y, cp.delta, FilterSide::kY, 0.0, g, {}};
  const SmbFilter fx{r.h_x, cp.delta, FilterSide::kX, 0.0, g, {}};
  const SmbFilter fj{r.h_x + r.h_y, cp.delta, FilterSide::kJoint, cp.proximity(), g, MetricParams{2}};

  auto tile_key = [&](const Configuration& c, const Subset& cells, const Element& center) {
    BlockKey k(cells.size(), '\0');
    for (std::size_t i = 0; i < cells.size(); ++i) k[i] = static_cast<char>(c[g.multiply(cells[i], center)]);
    return k;
  };

  stage("dictionary", [&] {
    for (std::size_t si = 0; si < tiling.shapes.size(); ++si) {
      const Shape& shape = tiling.shapes[si];
      const Subset& cells = shape.cells;
      ShapeAudit a;
      a.shape = si + 1;
      a.folner_index = shape.folner_index;
      a.size = cells.size();
      a.tiles = tiling.centers[si].size();
      const int marker = book.marker_of(shape.folner_index);
      require(marker > 0, ErrorCode::kInternal, "shape has no marker");

      std::vector<BlockKey> ycands;
      for (const auto& c : tiling.centers[si]) ycands.push_back(tile_key(y, cells, c));
      const BlockFamily bf = filter_blocks_smb(ylaw, cells, ycands, fy);
      require(!bf.empty(), ErrorCode::kPrecondition,
              "Y-side SMB family is empty for shape " + std::to_string(si + 1) +
                  " (parameters inconsistent with the source)");
      a.bfam = bf.blocks.size();
      a.bfam_mass = bf.mass;

      const std::size_t target = static_cast<std::size_t>(cfg.afam_factor) * bf.blocks.size();
      const std::size_t max_draws = 50 * target + 100;
      Rng rng(derive_seed(cfg.seed, "afam/" + std::to_string(si + 1)));
      const Window box = bounding_window(g, cells);
      std::vector<BlockKey> afam;
      std::map<BlockKey, std::size_t> image_index;
      std::vector<std::pair<BlockKey, std::size_t>> preimages;  // (A', index of Psi(A'))
      for (std::size_t draw = 0; draw < max_draws && afam.size() < target; ++draw) {
        const Block ap = cfg.x_source.sample(box, rng).restrict(cells);
        const BlockKey apk(ap.symbols.begin(), ap.symbols.end());
        if (!passes_smb_filter(xlaw, cells, apk, fx)) continue;
        const std::size_t j = find_marker_occurrences(ap, book.markers).size();
        if (j > static_cast<std::size_t>(cp.j_max)) continue;
        a.j_observed = std::max(a.j_observed, j);
        const Block img = psi_transform(ap, book.markers, marker);
        const BlockKey ik(img.symbols.begin(), img.symbols.end());
        auto [it, fresh] = image_index.emplace(ik, afam.size());
        if (fresh) afam.push_back(ik);
        preimages.emplace_back(apk, it->second);
      }
      require(!afam.empty(), ErrorCode::kPrecondition,
              "X-side family is empty for shape " + std::to_string(si + 1));
      a.afam = afam.size();
      a.candidates = preimages.size();

      std::set<std::pair<std::size_t, std::size_t>> edges;
      for (std::size_t b = 0; b < bf.blocks.size(); ++b)
        for (const auto& [apk, ai] : preimages)
          if (passes_smb_filter(xi, cells, combine_keys(apk, bf.blocks[b], ly), fj)) edges.emplace(b, ai);
      // Y-blocks with fewer partners than the largest X-side degree are
      // dropped from the family and later encoded like any atypical block.
      // Dropping only lowers X-side degrees, so the loop settles.
      std::vector<bool> keep(bf.blocks.size(), true);
      std::vector<std::size_t> deg_b, deg_a;
      for (;;) {
        deg_b.assign(bf.blocks.size(), 0);
        deg_a.assign(afam.size(), 0);
        for (const auto& [b, ai] : edges) {
          if (!keep[b]) continue;
          ++deg_b[b];
          ++deg_a[ai];
        }
        const std::size_t k_now = *std::max_element(deg_a.begin(), deg_a.end());
        bool dropped = false;
        for (std::size_t b = 0; b < bf.blocks.size(); ++b)
          if (keep[b] && (deg_b[b] < k_now || deg_b[b] == 0)) {
            keep[b] = false;
            dropped = true;
          }
        if (!dropped) break;
      }
      BlockFamily kept;
      kept.domain = bf.domain;
      std::vector<std::size_t> new_index(bf.blocks.size(), 0);
      for (std::size_t b = 0; b < bf.blocks.size(); ++b) {
        const double mass = ylaw.probability(cells, bf.blocks[b]);
        if (!keep[b]) {
          ++a.bfam_pruned;
          a.bfam_pruned_mass += mass;
          continue;
        }
        new_index[b] = kept.blocks.size();
        kept.blocks.push_back(bf.blocks[b]);
        kept.mass += mass;
      }
      require(!kept.empty(), ErrorCode::kPrecondition,
              "no Y-block of shape " + std::to_string(si + 1) + " has a joint-typical partner");
      std::set<std::pair<std::size_t, std::size_t>> kept_edges;
      for (const auto& [b, ai] : edges)
        if (keep[b]) kept_edges.emplace(new_index[b], ai);
      a.bfam = kept.blocks.size();
      a.bfam_mass = kept.mass;
      a.edges = kept_edges.size();
      std::size_t min_b = std::numeric_limits<std::size_t>::max();
      for (std::size_t b = 0; b < deg_b.size(); ++b)
        if (keep[b]) min_b = std::min(min_b, deg_b[b]);
      a.min_deg_b = min_b;
      a.max_deg_a = *std::max_element(deg_a.begin(), deg_a.end());
      // The smallest K meeting the upper degree condition; the lower one is
      // then checked by build_dictionary.
      a.K = a.max_deg_a;
      const double hj = r.h_x + r.h_y;
      const double n = static_cast<double>(cells.size());
      a.log2_K_theory = n * (hj - r.h_y - cp.d_gap / 3.0);
      a.log2_upper_theory = n * (hj - r.h_x + cp.d_gap / 3.0);
      a.counting = counting_bound_check(cells.size(), book.markers.d.size(), static_cast<std::uint64_t>(cp.j_max),
                                        s, cp.delta);

      Dictionary d = build_dictionary(
          cells, kept.blocks, afam,
          std::vector<std::pair<std::size_t, std::size_t>>(kept_edges.begin(), kept_edges.end()), a.K);
      d.marker = marker;
      d.check(book.markers, s);
      book.dicts.push_back(std::move(d));
      r.shapes.push_back(a);
    }
    return 0;
  });
  r.injective = true;
  for (const auto& d : book.dicts) r.injective = r.injective && d.forward.size() == d.inverse.size();

  r.xbar = stage("encode", [&] { return encode(y, tiling, book); });

  stage("audit", [&] {
    std::vector<MarkerHit> expected;
    for (std::size_t si = 0; si < tiling.shapes.size(); ++si)
      for (const auto& c : tiling.centers[si]) expected.push_back({c, book.marker_of(tiling.shapes[si].folner_index)});
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) { return a.position < b.position; });
    r.marker_audit = find_marker_occurrences(r.xbar, book.markers) == expected;
    return 0;
  });

  const DecodeResult dec = stage("decode", [&] { return decode(r.xbar, book); });

  // Per-site predictors: what y determines about x-bar, what x-bar determines about y.
  std::vector<int> zp(w.size(), s + 1), zq(w.size(), ly + 1);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (dec.known[i]) zq[i] = dec.y.symbols[i];
    if (!dec.known[i] || dec.y.symbols[i] != y.symbols[i]) ++wrong;
  }
  r.roundtrip_exact = true;
  for (const auto& t : tiles_of(tiling)) {
    const auto& cells = tiling.shapes[t.shape].cells;
    const Dictionary* d = book.find(cells);
    TileRecord rec;
    rec.center = t.center;
    rec.shape = t.shape + 1;
    rec.folner_index = tiling.shapes[t.shape].folner_index;
    rec.size = cells.size();
    rec.in_family = d->in_family(tile_key(y, cells, t.center));
    rec.decoded = true;
    rec.exact = true;
    for (const auto& f : cells) {
      const std::size_t site = w.index(g.multiply(f, t.center));
      rec.decoded = rec.decoded && dec.known[site];
      rec.exact = rec.exact && dec.known[site] && dec.y.symbols[site] == y.symbols[site];
      if (rec.in_family) zp[site] = r.xbar.symbols[site];
    }
    if (rec.in_family && !rec.exact) r.roundtrip_exact = false;
    r.tiles.push_back(rec);
  }
  r.unrecovered = static_cast<double>(wrong) / static_cast<double>(w.size());
  std::size_t covered = 0;
  for (char m : tile_mask(tiling)) covered += m ? 1 : 0;
  r.tile_fraction = static_cast<double>(covered) / static_cast<double>(w.size());

  stage("entropy", [&] {
    const EmpiricalMeasure jp = predictor_joint(g, r.xbar.symbols, s, zp, s + 1);
    const EmpiricalMeasure jq = predictor_joint(g, y.symbols, ly, zq, ly + 1);
    r.h_p_given_q = conditional_entropy(jp, Partition::x_side(s, s + 1), Partition::y_side(s, s + 1), 0);
    r.h_q_given_p = conditional_entropy(jq, Partition::x_side(ly, ly + 1), Partition::y_side(ly, ly + 1), 0);
    const double eps = 1.0 / static_cast<double>(cp.k);
    r.vkl_p_in_q = approx_inclusion_check(jp, Partition::x_side(s, s + 1), Partition::y_side(s, s + 1), eps, 0).holds;
    r.vkl_q_in_p =
        approx_inclusion_check(jq, Partition::x_side(ly, ly + 1), Partition::y_side(ly, ly + 1), eps, 0).holds;

    const EmpiricalMeasure mx = EmpiricalMeasure::from_configuration(r.xbar, cfg.entropy_depth);
    r.h_xbar = process_entropy_estimate(mx, Partition::identity(s), cfg.entropy_depth).difference_quotient;
    r.h_xbar_chain = r.h_y - r.h_q_given_p;
    r.deficit_bound = entropy_deficit_bound(r.h_y, cp.delta, cp.eta, ly);

    const EmpiricalMeasure before = EmpiricalMeasure::from_configuration(combine(x, y), cp.n0);
    const EmpiricalMeasure after = EmpiricalMeasure::from_configuration(combine(r.xbar, y), cp.n0);
    const auto& tb = before.table(cp.n0);
    const auto& ta = after.table(cp.n0);
    for (const auto& [k, p] : tb.probs) r.atom_gap = std::max(r.atom_gap, std::abs(p - ta.probability(k)));
    for (const auto& [k, p] : ta.probs) r.atom_gap = std::max(r.atom_gap, std::abs(p - tb.probability(k)));
    return 0;
  });

  const double slack = 2.0 * cp.delta + 2.0 * cp.eta;
  r.assertions = {
      check_true("dictionary_injective", r.injective),
      check_true("marker_audit", r.marker_audit),
      check_true("roundtrip_in_family", r.roundtrip_exact),
      check_le("unrecovered_fraction", r.unrecovered, slack + 0.03),
      check_le("H(P|Q)", r.h_p_given_q, slack * std::log2(static_cast<double>(s)) + 0.05),
      check_le("H(Q|P)", r.h_q_given_p, slack * std::log2(static_cast<double>(ly)) + 0.05),
      check_ge("h_xbar", r.h_xbar, r.deficit_bound - 0.05),
      check_true("vkl_P_in_Q", r.vkl_p_in_q),
      check_true("vkl_Q_in_P", r.vkl_q_in_p),
      check_le("atom_gap_F_n0", r.atom_gap, cp.eps / 2.0),
  };
  return r;
}

bool PipelineReport::pass() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

nlohmann::json PipelineReport::summary() const {
  nlohmann::json j;
  j["provenance"] = provenance(hash, config.seed);
  j["config"] = config_to_json(config);
  j["entropy"] = {{"h_x", h_x}, {"h_y", h_y}};
  j["tiling"] = {{"layers", layers},
                 {"raw_tiles", raw_tiles},
                 {"dropped_tiles", dropped_tiles},
                 {"tiles", tiles.size()},
                 {"tile_fraction", tile_fraction}};
  j["metrics"] = {{"unrecovered_fraction", unrecovered}, {"H_P_given_Q", h_p_given_q},
                  {"H_Q_given_P", h_q_given_p},          {"h_xbar", h_xbar},
                  {"h_xbar_chain_bound", h_xbar_chain},  {"entropy_deficit_bound", deficit_bound},
                  {"atom_gap", atom_gap},                {"vkl_P_in_Q", vkl_p_in_q},
                  {"vkl_Q_in_P", vkl_q_in_p}};
  auto as = nlohmann::json::array();
  for (const auto& a : assertions)
    as.push_back({{"name", a.name},
                  {"value", a.value},
                  {"bound", a.bound},
                  {"relation", a.upper ? "<=" : ">="},
                  {"pass", a.pass}});
  j["assertions"] = std::move(as);
  j["pass"] = pass();
  return j;
}

std::string PipelineReport::coverage_csv() const {
  std::ostringstream o;
  o << provenance_comment(hash, config.seed);
  o << "center,shape,folner_index,size,in_family,decoded,exact\n";
  for (const auto& t : tiles) {
    o << t.center.c[0];
    for (int i = 1; i < Group::parse(config.group).rank(); ++i) o << ' ' << t.center.c[i];
    o << ',' << t.shape << ',' << t.folner_index << ',' << t.size << ',' << t.in_family << ',' << t.decoded << ','
      << t.exact << '\n';
  }
  return o.str();
}

nlohmann::json PipelineReport::audit() const {
  nlohmann::json j;
  j["provenance"] = provenance(hash, config.seed);
  auto shapes_j = nlohmann::json::array();
  for (const auto& a : shapes)
    shapes_j.push_back({{"shape", a.shape},
                        {"folner_index", a.folner_index},
                        {"size", a.size},
                        {"tiles", a.tiles},
                        {"bfam", a.bfam},
                        {"bfam_mass", a.bfam_mass},
                        {"bfam_pruned", a.bfam_pruned},
                        {"bfam_pruned_mass", a.bfam_pruned_mass},
                        {"afam", a.afam},
                        {"x_candidates", a.candidates},
                        {"edges", a.edges},
                        {"K", a.K},
                        {"min_deg_b", a.min_deg_b},
                        {"max_deg_a", a.max_deg_a},
                        {"j_observed", a.j_observed},
                        {"log2_K_theory", a.log2_K_theory},
                        {"log2_upper_degree_theory", a.log2_upper_theory},
                        {"counting_bound",
                         {{"holds", a.counting.holds},
                          {"size_condition", a.counting.size_condition},
                          {"occurrence_condition", a.counting.occurrence_condition},
                          {"log2_lhs", a.counting.log2_lhs}}}});
  j["shapes"] = std::move(shapes_j);
  j["injective"] = injective;
  j["codebook"] = codebook_to_json(codebook);
  return j;
}

void write_reports(const PipelineReport& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream out(std::filesystem::path(dir) / name);
    require(out.good(), ErrorCode::kInvalidArgument, "cannot write " + name + " in '" + dir + "'");
    out << text;
  };
  put("summary.json", r.summary().dump(2) + "\n");
  put("coverage.csv", r.coverage_csv());
  put("dictionary_audit.json", r.audit().dump(1) + "\n");
  put("xbar.json", configuration_to_json(r.xbar).dump() + "\n");
}

}  // namespace symdyn
