#include "symdyn/verify.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "symdyn/error.hpp"
#include "symdyn/pipeline.hpp"

namespace symdyn {

namespace {

using Check = std::function<std::string(std::uint64_t)>;  // empty string = pass

std::string group_axioms(std::uint64_t seed) {
  Rng rng(seed);
  for (const char* name : {"z", "z2", "h3"}) {
    const Group g = Group::parse(name);
    auto draw = [&] {
      Element e;
      for (int i = 0; i < 3; ++i) e.c[i] = static_cast<std::int64_t>(rng.below(21)) - 10;
      for (int i = g.rank(); i < 3; ++i) e.c[i] = 0;
      return e;
    };
    for (int t = 0; t < 2000; ++t) {
      const Element a = draw(), b = draw(), c = draw();
      if (g.multiply(g.multiply(a, b), c) != g.multiply(a, g.multiply(b, c))) return std::string(name) + ": associativity";
      if (g.multiply(a, g.inverse(a)) != g.identity()) return std::string(name) + ": inverse";
    }
    Subset prev = g.folner(1);
    for (int n = 1; n <= 4; ++n) {
      const Subset f = g.folner(n);
      if (!f.contains(g.identity())) return std::string(name) + ": F_n misses e";
      if (set_inverse(g, f) != f) return std::string(name) + ": F_n not symmetric";
      if (!prev.is_subset_of(f)) return std::string(name) + ": F_n not increasing";
      prev = f;
    }
  }
  return {};
}

std::string disjointify_invariants(std::uint64_t seed) {
  const Group g = Group::parse("z2");
  const Window w = Window::cube(g, 40);
  for (int t = 0; t < 40; ++t) {
    TilingParams p;
    p.eta = 0.1;
    p.K = 1;
    // 22 layers on a 40 x 40 window: shapes F_1..F_4.
    for (int i = 0; i < tiling_layers(p.eta); ++i) p.k_list.push_back(1 + i / 6);
    p.candidate_rate = 0.3;
    p.seed = derive_seed(seed, "tiling/" + std::to_string(t));
    const Quasitiling raw = construct_raw_quasitiling(random_candidates(w, p), p);
    const Quasitiling out = disjointify(raw);
    std::vector<int> hits(w.size(), 0);
    for (const auto& tile : tiles_of(out))
      for (const auto& h : tile.cells)
        if (++hits[w.index(h)] > 1) return "overlapping output tiles";
    if (tile_union(out) != tile_union(raw)) return "union changed";
    std::map<Element, Subset> raw_cells;
    for (const auto& tile : tiles_of(raw)) raw_cells[tile.center] = tile.cells;
    for (const auto& tile : tiles_of(out)) {
      const Subset& big = raw_cells.at(tile.center);
      if (!tile.cells.is_subset_of(big)) return "output tile leaves its input tile";
      if (static_cast<double>(tile.cells.size()) < 0.9 * static_cast<double>(big.size()))
        return "output tile is not a (1 - eta)-subset";
    }
    if (disjointify(out) != out) return "not idempotent";
    if (symbolic_decode(symbolic_encode(out), out.shapes) != out) return "symbolic encoding does not round trip";
    if (tiling_from_json(tiling_to_json(out)) != out) return "JSON round trip";
  }
  return {};
}

std::string marker_uniqueness(std::uint64_t seed) {
  Rng rng(seed);
  for (const char* name : {"z", "z2"}) {
    const Group g = Group::parse(name);
    for (int s : {2, 3})
      for (int n : {1, 2, 4}) {
        const MarkerSet m = construct_markers(n, 0.2, s, g);
        std::int64_t reach = 0;
        for (const auto& x : m.d_inv_d)
          for (int i = 0; i < g.rank(); ++i) reach = std::max<std::int64_t>(reach, std::abs(x.c[i]));
        Element corner;
        for (int i = 0; i < g.rank(); ++i) corner.c[i] = -reach;
        const Window w = Window::cube(g, 2 * reach + 1).translated(corner);
        for (int t = 0; t < 300; ++t) {
          const int i = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
          const Configuration c = sample_marker_premise(m, w, g.identity(), i, rng);
          const MarkerCheck r = verify_marker_uniqueness(c, m, g.identity());
          if (r.verdict != MarkerVerdict::kHolds || r.marker != i) return std::string(name) + ": uniqueness violated";
        }
        if (markers_from_json(nlohmann::json::parse(markers_to_json(m).dump())).d != m.d) return "marker JSON";
      }
  }
  return {};
}

std::string psi_uniqueness(std::uint64_t seed) {
  Rng rng(seed);
  const Group g = Group::parse("z");
  const MarkerSet m = construct_markers(2, 0.2, 3, g);
  const Subset s = g.folner(20);
  for (int t = 0; t < 200; ++t) {
    std::vector<Symbol> sym(s.size());
    for (auto& v : sym) v = static_cast<Symbol>(1 + rng.below(rng.below(4) == 0 ? 1 : 3));
    const int i = 1 + static_cast<int>(rng.below(2));
    const Block a = psi_transform(Block(3, s, sym), m, i);
    const auto hits = find_marker_occurrences(a, m);
    if (hits.size() != 1 || hits[0].position != g.identity() || hits[0].marker != i)
      return "psi output does not have a single marker at e";
  }
  return {};
}

std::string counting_example(std::uint64_t) {
  if (!counting_bound_check(1000, 10, 2, 3, 0.1).holds) return "|S|=1000 example";
  if (!counting_bound_check(50, 0, 0, 3, 0.0).holds) return "j = |D| = 0";
  if (counting_bound_check(50, 1, 1, 3, 0.0).holds) return "delta = 0";
  return {};
}

std::string codec_exact(std::uint64_t seed) {
  ExperimentConfig c;
  c.tiling.K = 1000;
  c.seed = seed;
  const PipelineReport r = run_pipeline(c);
  if (!r.injective) return "dictionary not injective";
  if (!r.marker_audit) return "marker audit";
  if (!r.roundtrip_exact) return "round trip on in-family tiles";
  const Codebook back = codebook_from_json(nlohmann::json::parse(codebook_to_json(r.codebook).dump()));
  if (back.dicts.size() != r.codebook.dicts.size()) return "codebook JSON";
  const ExperimentConfig rt = config_from_json(nlohmann::json::parse(config_to_json(r.config).dump()));
  if (config_to_json(rt).dump() != config_to_json(r.config).dump()) return "config JSON";
  return {};
}

std::string identities(std::uint64_t seed) {
  const Group g = Group::parse("z");
  const Window w = Window::cube(g, 4096);
  Rng rng(seed);
  const Configuration x = SourceSpec::bernoulli({0.7, 0.3}).sample(w, rng);
  if (perturb(x, NoiseParams{0.0, 2, seed}) != x) return "perturb with eps = 0";
  const EmpiricalMeasure m = EmpiricalMeasure::from_configuration(x, 3);
  if (dbar_estimate(m, m, 3).value != 0.0) return "dbar(m, m)";
  const Agreement a = joining_agreement(dbar_estimate(m, m, 2).coupling, 2);
  if (std::abs(a.diagonal - 1.0) > 1e-12) return "identity coupling agreement";
  return {};
}

std::string statistical_smb(std::uint64_t seed) {
  const Group g = Group::parse("z");
  Rng rng(seed);
  const SourceSpec src = SourceSpec::bernoulli({0.7, 0.3});
  const Configuration c = src.sample(Window::cube(g, 1 << 16), rng);
  const EmpiricalMeasure m = EmpiricalMeasure::from_configuration(c, 6);
  const SmbReport r = smb_check(m, src.entropy_rate(), 0.3, 6);
  if (!r.pass) return "band mass " + fmt(r.mass);
  return {};
}

std::string statistical_perturb(std::uint64_t seed) {
  const Group g = Group::parse("z");
  const Window w = Window::cube(g, 1 << 16);
  Rng rng(seed);
  const Configuration x = SourceSpec::bernoulli({0.9, 0.1}).sample(w, rng);
  const Configuration y = perturb(x, NoiseParams{0.2, 2, derive_seed(seed, "y")});
  const Configuration z = combine(x, y);
  const NoiseParams p{0.3, 2, derive_seed(seed, "noise")};
  EmpiricalMeasure before = EmpiricalMeasure::from_configuration(z, 4);
  EmpiricalMeasure after = EmpiricalMeasure::from_configuration(perturb_joint(z, 2, p), 4);
  before.set_factors(2, 2);
  after.set_factors(2, 2);
  const PerturbationReport r = verify_perturbation_bounds(before, after, p, 4);
  if (!r.pass()) return "perturbation bounds";
  return {};
}

std::string statistical_dbar(std::uint64_t seed) {
  const Group g = Group::parse("z");
  const Window w = Window::cube(g, 10000);
  Rng r1(derive_seed(seed, "p")), r2(derive_seed(seed, "q"));
  const auto a = EmpiricalMeasure::from_configuration(SourceSpec::bernoulli({0.5, 0.5}).sample(w, r1), 4);
  const auto b = EmpiricalMeasure::from_configuration(SourceSpec::bernoulli({0.4, 0.6}).sample(w, r2), 4);
  const double v = dbar_estimate(a, b, 4).value;
  if (std::abs(v - 0.1) > 0.02) return "dbar " + fmt(v);
  return {};
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed) {
  const std::vector<std::pair<std::string, Check>> exact = {
      {"group_axioms", group_axioms},         {"disjointify", disjointify_invariants},
      {"marker_uniqueness", marker_uniqueness}, {"psi_single_marker", psi_uniqueness},
      {"counting_bound", counting_example},   {"codec_exact", codec_exact},
      {"identities", identities}};
  const std::vector<std::pair<std::string, Check>> statistical = {
      {"smb_band", statistical_smb}, {"perturbation", statistical_perturb}, {"dbar", statistical_dbar}};
  require(suite == "exact" || suite == "statistical" || suite == "all", ErrorCode::kInvalidArgument,
          "verify: suite must be exact, statistical or all");
  std::vector<std::pair<std::string, Check>> run;
  if (suite != "statistical") run.insert(run.end(), exact.begin(), exact.end());
  if (suite != "exact") run.insert(run.end(), statistical.begin(), statistical.end());
  std::vector<CheckResult> out;
  for (const auto& [name, f] : run) {
    CheckResult r{name, false, {}};
    try {
      r.detail = f(derive_seed(seed, name));
      r.pass = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace symdyn
