// symdyn command line driver. Every subcommand writes its reports into the
// output directory (--out, then $SYMDYN_OUT, then ".") and exits 0 on
// success, 1 on usage errors and 2 when an embedded assertion fails.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "symdyn/codec.hpp"
#include "symdyn/entropy.hpp"
#include "symdyn/error.hpp"
#include "symdyn/markers.hpp"
#include "symdyn/perturb_dbar.hpp"
#include "symdyn/pipeline.hpp"
#include "symdyn/quasitiling.hpp"
#include "symdyn/verify.hpp"

namespace {

using namespace symdyn;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  std::string out;
  std::string group = "z";
  std::int64_t window = 0;
};

std::string hash_of(const nlohmann::json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

void put(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name);
  require(out.good(), ErrorCode::kInvalidArgument, "cannot write " + name + " in '" + dir + "'");
  out << text;
  std::cout << "wrote " << (std::filesystem::path(dir) / name).string() << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kInvalidArgument, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- folner ---------------------------------------------------------------

int cmd_folner(const Common& c, int n_max) {
  require(n_max >= 1, ErrorCode::kInvalidArgument, "folner: --nmax must be >= 1");
  const Group g = Group::parse(c.group);
  const Subset gens = g.folner(1);
  const nlohmann::json params = {{"group", g.name()}, {"nmax", n_max}};
  std::string csv = provenance_comment(hash_of(params), c.seed) + "n,size,defect\n";
  for (int n = 1; n <= n_max; ++n) {
    const Subset f = g.folner(n);
    csv += std::to_string(n) + ',' + std::to_string(f.size()) + ',' + fmt(invariance_defect(g, f, gens)) + '\n';
  }
  put(resolve_out_dir(c.out), "folner.csv", csv);
  return kExitPass;
}

// --- tile -----------------------------------------------------------------

int cmd_tile(const Common& c, TilingParams p, int n) {
  const Group g = Group::parse(c.group);
  const std::int64_t side = c.window > 0 ? c.window : 256;
  p.seed = derive_seed(c.seed, "tiling");
  const Window w = Window::cube(g, side);
  const Quasitiling t = construct_quasitiling(w, p);

  nlohmann::json params = {{"group", g.name()}, {"window", side}, {"eta", p.eta}, {"K", p.K},
                           {"candidate_rate", p.candidate_rate}, {"n", n}};
  const std::string hash = hash_of(params);
  nlohmann::json j = tiling_to_json(t);
  j["provenance"] = provenance(hash, c.seed);
  j["params"] = params;

  int margin = 0;
  for (const auto& s : t.shapes) margin = std::max(margin, s.folner_index);
  std::string csv = provenance_comment(hash, c.seed) + "n,covering_density,interior_density,margin,tiles\n";
  for (int k = 1; k <= n; ++k)
    csv += std::to_string(k) + ',' + fmt(covering_density(t, k)) + ',' + fmt(interior_covering_density(t, k, margin)) +
           ',' + std::to_string(margin) + ',' + std::to_string(t.tile_count()) + '\n';

  const std::string dir = resolve_out_dir(c.out);
  put(dir, "tiling.json", j.dump() + "\n");
  put(dir, "density.csv", csv);
  return kExitPass;
}

// --- markers --------------------------------------------------------------

int cmd_markers(const Common& c, int count, double delta_m, int s, const std::string& source) {
  const Group g = Group::parse(c.group);
  const MarkerSet m = construct_markers(count, delta_m, s, g);
  m.check_invariants();
  nlohmann::json params = {{"group", g.name()}, {"n", count}, {"delta_m", delta_m}, {"s", s}};
  nlohmann::json j = markers_to_json(m);
  std::vector<double> uniform(static_cast<std::size_t>(s), 1.0 / s);
  j["budget_uniform"] = marker_budget(m, SourceLaw(SourceSpec::bernoulli(uniform), g));
  if (!source.empty()) {
    const SourceSpec src = parse_source(source);
    require(src.alphabet() == s, ErrorCode::kAlphabetMismatch, "markers: --source alphabet differs from --s");
    j["budget_source"] = marker_budget(m, SourceLaw(src, g));
    params["source"] = source;
  }
  j["provenance"] = provenance(hash_of(params), c.seed);
  put(resolve_out_dir(c.out), "markers.json", j.dump(1) + "\n");
  return kExitPass;
}

// --- entropy --------------------------------------------------------------

int cmd_entropy(const Common& c, const std::string& measure_path, const std::string& source, int n_max,
                const std::string& save) {
  require(measure_path.empty() != source.empty(), ErrorCode::kInvalidArgument,
          "entropy: give exactly one of --measure or --source");
  EmpiricalMeasure m;
  nlohmann::json params;
  if (!measure_path.empty()) {
    m = measure_from_json(nlohmann::json::parse(read_file(measure_path)));
    params = {{"measure", measure_path}};
  } else {
    const Group g = Group::parse(c.group);
    const std::int64_t side = c.window > 0 ? c.window : (g.rank() == 1 ? 65536 : 256);
    const SourceSpec src = parse_source(source);
    Rng rng(derive_seed(c.seed, "sample"));
    m = EmpiricalMeasure::from_configuration(src.sample(Window::cube(g, side), rng), n_max,
                                             MeasureSource{static_cast<std::uint64_t>(side), c.seed, source});
    params = {{"group", g.name()}, {"window", side}, {"source", source}, {"nmax", n_max}};
  }
  const std::string hash = hash_of(params);
  const int top = std::min(n_max, m.n_max());
  const Partition whole = Partition::identity(m.alphabet());
  std::string csv = provenance_comment(hash, c.seed) + "n,sites,H_n,H_n_per_site,difference_quotient";
  if (m.factors()) csv += ",H_P_given_Q,H_Q_given_P";
  csv += '\n';
  for (int n = 1; n <= top; ++n) {
    const ProcessEntropy e = process_entropy_estimate(m, whole, n);
    csv += std::to_string(n) + ',' + std::to_string(e.sites) + ',' + fmt(e.block_entropy) + ',' + fmt(e.per_site) +
           ',' + fmt(e.difference_quotient);
    if (m.factors()) {
      const auto [s, l] = *m.factors();
      const Partition p = Partition::x_side(s, l), q = Partition::y_side(s, l);
      csv += ',' + fmt(conditional_entropy(m, p, q, n)) + ',' + fmt(conditional_entropy(m, q, p, n));
    }
    csv += '\n';
  }
  const std::string dir = resolve_out_dir(c.out);
  put(dir, "entropy.csv", csv);
  if (!save.empty()) {
    std::ofstream out(save);
    require(out.good(), ErrorCode::kInvalidArgument, "cannot write '" + save + "'");
    out << measure_to_json(m).dump() << '\n';
  }
  return kExitPass;
}

// --- code -----------------------------------------------------------------

int cmd_code(ExperimentConfig cfg) {
  cfg.finalize();
  const PipelineReport r = run_pipeline(cfg);
  write_reports(r, resolve_out_dir(cfg.out));
  for (const auto& a : r.assertions)
    std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << " value=" << fmt(a.value) << (a.upper ? " <= " : " >= ")
              << fmt(a.bound) << '\n';
  return r.pass() ? kExitPass : kExitFail;
}

// --- perturb --------------------------------------------------------------

int cmd_perturb(const Common& c, const std::string& source, const std::vector<double>& eps_list, double y_noise,
                int n) {
  const Group g = Group::parse(c.group);
  const std::int64_t side = c.window > 0 ? c.window : 65536;
  const SourceSpec src = parse_source(source);
  const int s = src.alphabet();
  const Window w = Window::cube(g, side);
  Rng rng(derive_seed(c.seed, "sample"));
  const Configuration x = src.sample(w, rng);
  // Y is a noisy copy of x so the joint measure is not a product.
  const Configuration y = perturb(x, NoiseParams{y_noise, s, derive_seed(c.seed, "y")});
  const Configuration z = combine(x, y);
  EmpiricalMeasure before = EmpiricalMeasure::from_configuration(z, n);
  before.set_factors(s, s);

  const nlohmann::json params = {{"group", g.name()}, {"window", side}, {"source", source},
                                 {"eps", eps_list},   {"y_noise", y_noise}, {"n", n}};
  std::string csv = provenance_comment(hash_of(params), c.seed) +
                    "eps,distance,distance_limit,h_before,h_after,bound,margin,y_drift,pass\n";
  bool all = true;
  for (double eps : eps_list) {
    const NoiseParams p{eps, s, derive_seed(c.seed, "noise/" + fmt(eps))};
    p.validate();
    EmpiricalMeasure after = EmpiricalMeasure::from_configuration(perturb_joint(z, s, p), n);
    after.set_factors(s, s);
    const PerturbationReport r = verify_perturbation_bounds(before, after, p, n);
    all = all && r.pass();
    csv += fmt(eps) + ',' + fmt(r.distance) + ',' + fmt(r.distance_limit) + ',' + fmt(r.h_before) + ',' +
           fmt(r.h_after) + ',' + fmt(r.h_required) + ',' + fmt(r.h_after - r.h_required) + ',' + fmt(r.y_drift) +
           ',' + (r.pass() ? "1" : "0") + '\n';
  }
  put(resolve_out_dir(c.out), "perturb.csv", csv);
  return all ? kExitPass : kExitFail;
}

// --- dbar -----------------------------------------------------------------

int cmd_dbar(const Common& c, double p, double q, int n) {
  require(p >= 0 && p <= 1 && q >= 0 && q <= 1, ErrorCode::kInvalidArgument, "dbar: p and q must lie in [0, 1]");
  const Group g = Group::parse(c.group);
  const std::int64_t side = c.window > 0 ? c.window : 10000;
  const Window w = Window::cube(g, side);
  Rng r1(derive_seed(c.seed, "p")), r2(derive_seed(c.seed, "q"));
  const auto a = EmpiricalMeasure::from_configuration(SourceSpec::bernoulli({1 - p, p}).sample(w, r1), n);
  const auto b = EmpiricalMeasure::from_configuration(SourceSpec::bernoulli({1 - q, q}).sample(w, r2), n);
  const DbarResult d = dbar_estimate(a, b, n);
  const nlohmann::json params = {{"group", g.name()}, {"window", side}, {"p", p}, {"q", q}, {"n", n}};
  std::string csv = provenance_comment(hash_of(params), c.seed) + "p,q,n,value,tv_bound,abs_p_minus_q\n";
  csv += fmt(p) + ',' + fmt(q) + ',' + std::to_string(n) + ',' + fmt(d.value) + ',' + fmt(d.tv_bound) + ',' +
         fmt(std::abs(p - q)) + '\n';
  put(resolve_out_dir(c.out), "dbar.csv", csv);
  std::cout << "dbar = " << fmt(d.value) << '\n';
  return kExitPass;
}

// --- verify ---------------------------------------------------------------

int cmd_verify(const Common& c, const std::string& suite) {
  const auto results = run_verify_suite(suite, c.seed);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) std::cout << ": " << r.detail;
    std::cout << '\n';
  }
  return all ? kExitPass : kExitFail;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kUnknownGroup:
      return kExitUsage;
    default:
      return kExitFail;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symdyn: finite-window symbolic dynamics experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  Common c;
  app.add_option("--config", c.config, "JSON experiment config");
  app.add_option("--seed", c.seed, "global seed");
  app.add_option("--out", c.out, "output directory (default $SYMDYN_OUT or .)");
  app.add_option("--group", c.group, "z, z2 or h3");
  app.add_option("--window", c.window, "side of the cube window");

  int folner_n = 6;
  auto* folner = app.add_subcommand("folner", "Folner sets: sizes and invariance defects");
  folner->add_option("--nmax", folner_n, "largest n");

  TilingParams tp;
  int tile_n = 4;
  auto* tile = app.add_subcommand("tile", "greedy quasitiling, tiling.json + density.csv");
  tile->add_option("--eta", tp.eta, "disjointness / covering parameter")->capture_default_str();
  tile->add_option("--K", tp.K, "smallest Folner index")->capture_default_str();
  tile->add_option("--candidate-rate", tp.candidate_rate, "probability a site is offered as a center");
  tile->add_option("--n", tile_n, "largest n for the density report")->capture_default_str();

  int marker_n = 2, marker_s = 2;
  double delta_m = 1e-3;
  std::string marker_source;
  auto* markers = app.add_subcommand("markers", "marker blocks, markers.json");
  markers->add_option("--n", marker_n, "number of markers")->capture_default_str();
  markers->add_option("--delta-m", delta_m, "marker measure budget")->capture_default_str();
  markers->add_option("--s", marker_s, "alphabet size")->capture_default_str();
  markers->add_option("--source", marker_source, "also report the budget under this source");

  std::string measure_path, entropy_source, save_measure;
  int entropy_n = 6;
  auto* entropy = app.add_subcommand("entropy", "block entropies, entropy.csv");
  entropy->add_option("--measure", measure_path, "serialized EmpiricalMeasure (JSON)");
  entropy->add_option("--source", entropy_source, "sample this source instead, e.g. bernoulli:0.3,0.7");
  entropy->add_option("--nmax", entropy_n, "largest depth")->capture_default_str();
  entropy->add_option("--save-measure", save_measure, "write the sampled measure here");

  auto* code = app.add_subcommand("code", "full coding pipeline from a config");

  std::string perturb_source = "bernoulli:0.9,0.1";
  std::vector<double> eps_list{0.1, 0.3, 0.5};
  double y_noise = 0.2;
  int perturb_n = 4;
  auto* perturb_cmd = app.add_subcommand("perturb", "entropy-raising perturbation, perturb.csv");
  perturb_cmd->add_option("--source", perturb_source, "X source")->capture_default_str();
  perturb_cmd->add_option("--eps", eps_list, "noise levels")->delimiter(',');
  perturb_cmd->add_option("--y-noise", y_noise, "Y is x with this much noise")->capture_default_str();
  perturb_cmd->add_option("--n", perturb_n, "depth")->capture_default_str();

  double dbar_p = 0.5, dbar_q = 0.6;
  int dbar_n = 4;
  auto* dbar = app.add_subcommand("dbar", "d-bar estimate between two Bernoulli measures, dbar.csv");
  dbar->add_option("--p", dbar_p, "P(symbol 2) for the first measure")->capture_default_str();
  dbar->add_option("--q", dbar_q, "P(symbol 2) for the second measure")->capture_default_str();
  dbar->add_option("--n", dbar_n, "depth")->capture_default_str();

  std::string suite = "exact";
  auto* verify = app.add_subcommand("verify", "invariant suite");
  verify->add_option("--suite", suite, "exact, statistical or all")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  }

  try {
    ExperimentConfig cfg;
    if (!c.config.empty()) cfg = load_config(c.config);
    if (app.count("--seed") > 0 || c.config.empty()) cfg.seed = c.seed;
    else c.seed = cfg.seed;
    if (app.count("--group") > 0) cfg.group = c.group;
    else c.group = cfg.group;
    if (app.count("--window") > 0) cfg.window = c.window;
    if (app.count("--out") > 0) cfg.out = c.out;
    else c.out = cfg.out;

    if (*folner) return cmd_folner(c, folner_n);
    if (*tile) return cmd_tile(c, tp, tile_n);
    if (*markers) return cmd_markers(c, marker_n, delta_m, marker_s, marker_source);
    if (*entropy) return cmd_entropy(c, measure_path, entropy_source, entropy_n, save_measure);
    if (*code) return cmd_code(cfg);
    if (*perturb_cmd) return cmd_perturb(c, perturb_source, eps_list, y_noise, perturb_n);
    if (*dbar) return cmd_dbar(c, dbar_p, dbar_q, dbar_n);
    if (*verify) return cmd_verify(c, suite);
  } catch (const Error& e) {
    std::cerr << "symdyn: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "symdyn: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
