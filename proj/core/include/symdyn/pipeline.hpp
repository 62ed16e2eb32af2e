#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symdyn/codec.hpp"
#include "symdyn/perturb_dbar.hpp"

namespace symdyn {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  std::string group = "z";
  std::int64_t window = 16384;  // side of the cube window
  SourceSpec x_source = SourceSpec::bernoulli({0.25, 0.25, 0.25, 0.25});
  SourceSpec y_source = SourceSpec::bernoulli({0.5, 0.3, 0.2});
  CodecParams codec;
  TilingParams tiling;
  double delta_m = 1e-3;
  NoiseParams noise;
  MetricParams metric;
  int entropy_depth = 2;     // depth of the entropy estimate of x-bar
  int afam_factor = 2;       // X-candidates drawn per Y-block and shape
  std::uint64_t seed = 1;
  std::string out;           // empty: use $SYMDYN_OUT or "."

  /// Fills d_gap from the sources when it is 0, then checks every invariant.
  void finalize();
  std::vector<std::string> violations() const;
};

nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);
/// Reads and validates a config file; violated invariants raise kInvalidArgument.
ExperimentConfig load_config(const std::string& path);

std::string config_hash(const ExperimentConfig& c);

/// "bernoulli:0.5,0.5", "markov:0.9,0.1;0.1,0.9" or "constant:1/2".
SourceSpec parse_source(const std::string& text);
/// Q^(l): symbols >= l merged into l. Markov sources must already fit.
SourceSpec truncate_source(const SourceSpec& s, int l);

nlohmann::json configuration_to_json(const Configuration& c);
Configuration configuration_from_json(const nlohmann::json& j);

struct Assertion {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool upper = true;  // value <= bound when true, value >= bound otherwise
  bool pass = false;
};

struct ShapeAudit {
  std::size_t shape = 0;
  int folner_index = 0;
  std::size_t size = 0;
  std::size_t tiles = 0;
  std::size_t bfam = 0;
  std::size_t afam = 0;
  std::size_t candidates = 0;
  std::size_t edges = 0;
  std::size_t K = 0;
  std::size_t min_deg_b = 0;
  std::size_t max_deg_a = 0;
  std::size_t j_observed = 0;
  double log2_K_theory = 0.0;
  double log2_upper_theory = 0.0;
  double bfam_mass = 0.0;
  std::size_t bfam_pruned = 0;  // Y-blocks dropped for lack of partners
  double bfam_pruned_mass = 0.0;
  CountingBound counting;
};

struct TileRecord {
  Element center;
  std::size_t shape = 0;
  int folner_index = 0;
  std::size_t size = 0;
  bool in_family = false;
  bool decoded = false;
  bool exact = false;
};

struct PipelineReport {
  ExperimentConfig config;
  std::string hash;
  double h_x = 0.0, h_y = 0.0;
  std::size_t layers = 0;
  std::size_t raw_tiles = 0, dropped_tiles = 0;
  double tile_fraction = 0.0;
  std::vector<ShapeAudit> shapes;
  std::vector<TileRecord> tiles;
  bool injective = false;
  bool marker_audit = false;
  bool roundtrip_exact = false;
  double unrecovered = 0.0;
  double h_p_given_q = 0.0;
  double h_q_given_p = 0.0;
  double h_xbar = 0.0;
  double h_xbar_chain = 0.0;  // h_nu - H(Q|P), the chain-rule lower bound
  double deficit_bound = 0.0;
  double atom_gap = 0.0;      // max |xi(A) - xi_bar(A)| over F_n0 atoms
  bool vkl_p_in_q = false;
  bool vkl_q_in_p = false;
  std::vector<Assertion> assertions;
  Codebook codebook;
  Configuration xbar;

  bool pass() const;
  nlohmann::json summary() const;
  std::string coverage_csv() const;
  nlohmann::json audit() const;
};

/// Runs every stage; module errors are rethrown with the stage named.
PipelineReport run_pipeline(const ExperimentConfig& cfg);

/// Writes summary.json, coverage.csv, dictionary_audit.json and xbar.json.
void write_reports(const PipelineReport& r, const std::string& dir);

/// Output directory: explicit flag, then $SYMDYN_OUT, then ".".
std::string resolve_out_dir(const std::string& flag);

/// Provenance block shared by every report.
nlohmann::json provenance(const std::string& hash, std::uint64_t seed);
/// The same as a leading '#' line for CSV reports.
std::string provenance_comment(const std::string& hash, std::uint64_t seed);

/// Fixed-format number for CSV output (shortest round trip).
std::string fmt(double v);

}  // namespace symdyn
