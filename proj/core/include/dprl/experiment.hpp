// Copyright 2026 The dprl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPRL_EXPERIMENT_HPP_
#define DPRL_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dprl/attacks.hpp"
#include "dprl/corruption.hpp"
#include "dprl/train.hpp"

namespace dprl {

/// Dataset source. Generated sources (blobs, glyphs) split off the last
/// test_fraction of the generated samples as the test set; IDX sources load
/// explicit train/test file pairs.
struct DatasetConfig {
  enum class Source { kBlobs, kGlyphs, kIdx };
  Source source = Source::kGlyphs;
  std::uint64_t seed = 42;  // generation seed, independent of run seeds

  // blobs
  std::size_t n_per_class = 200;
  std::size_t classes = 3;
  std::size_t dim = 64;
  double margin = 0.2;
  double blob_std = 0.0;  // 0: margin / 4

  // glyphs
  std::size_t image_size = 28;

  // idx
  std::string train_images, train_labels, test_images, test_labels;

  double test_fraction = 0.2;
  std::size_t train_limit = 0;  // 0: no cap
  std::size_t test_limit = 0;

  bool operator==(const DatasetConfig&) const = default;
};

struct TrainerConfig {
  enum class Kind { kSgd, kDpSgd, kCheckpoint };
  Kind kind = Kind::kSgd;
  std::string tag;
  DpSgdConfig params;  // base SgdConfig fields used for kSgd
  std::string checkpoint_path;

  bool operator==(const TrainerConfig&) const = default;
};

struct FgsmSweepConfig {
  std::vector<double> eps_grid;     // empty: 0 to 0.3 step 0.02
  std::vector<double> sigma_grid;   // extra DP-SGD variants per sigma
  std::vector<double> c_grid;       // extra DP-SGD variants per clip bound
  bool decoupled = false;           // c_grid variants keep noise at sigma
  std::size_t sample_limit = 0;
  bool operator==(const FgsmSweepConfig&) const = default;
};

struct PgdTableConfig {
  std::vector<PgdSetting> settings;  // empty: Table-style default grid
  std::size_t sample_limit = 0;
  bool operator==(const PgdTableConfig&) const = default;
};

struct PgdFlipConfig {
  double epsilon = 0.1;
  double alpha = 0.01;
  std::size_t max_steps = 100;
  std::size_t sample_limit = 200;
  bool operator==(const PgdFlipConfig&) const = default;
};

struct DeepfoolHistConfig {
  std::size_t sample_limit = 0;
  bool operator==(const DeepfoolHistConfig&) const = default;
};

struct CurvatureConfig {
  std::size_t samples = 20;
  std::size_t top_m = 15;
  bool operator==(const CurvatureConfig&) const = default;
};

struct CrossSectionConfig {
  std::size_t samples = 3;
  std::size_t resolution = 21;
  double half_extent = 0.0;  // 0: 2x the sample's deepfool l2 distance
  bool operator==(const CrossSectionConfig&) const = default;
};

struct CorruptionTableConfig {
  std::vector<CorruptionSpec> kinds;  // empty: default suite
  std::size_t sample_limit = 0;
  bool operator==(const CorruptionTableConfig&) const = default;
};

struct ClipPlateauConfig {
  std::vector<double> clip_grid = {1.0, 3.0, 10.0};
  double sigma = 1.3;
  std::vector<double> eps_grid;  // empty: 0 to 0.3 step 0.02
  double plateau_lo = 0.2;
  double plateau_hi = 0.3;
  std::size_t sample_limit = 0;
  bool operator==(const ClipPlateauConfig&) const = default;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  std::string architecture = "mlp_synth";
  std::vector<TrainerConfig> trainers;
  std::vector<std::uint64_t> seeds = {1};
  std::string output_dir = "out";
  int threads = 0;  // 0: keep the process-wide setting

  std::optional<FgsmSweepConfig> fgsm_sweep;
  std::optional<PgdTableConfig> pgd_table;
  std::optional<PgdFlipConfig> pgd_flip;
  std::optional<DeepfoolHistConfig> deepfool_hist;
  std::optional<CurvatureConfig> curvature;
  std::optional<CrossSectionConfig> cross_section;
  std::optional<CorruptionTableConfig> corruption_table;
  std::optional<ClipPlateauConfig> clip_plateau_sweep;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the JSON config document; errors carry the offending field path.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin);

/// Canonical JSON rendering; parse(serialize(cfg)) == cfg.
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a over the canonical rendering.
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct SuiteResult {
  std::string name;
  bool ok = true;
  std::string error;  // set when ok is false
  std::vector<std::string> files;  // relative to output_dir, all existing
};

struct RobustnessReport {
  std::filesystem::path output_dir;
  std::uint64_t config_hash_value = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<SuiteResult> suites;
  double wall_clock_seconds = 0.0;
};

/// Trains one model per trainer per seed, runs the selected suites, and
/// writes per-seed CSV/SVG artifacts, cross-seed means under mean/, and
/// manifest.json. Deterministic per (config, seed): CSV and SVG bytes are
/// identical across re-runs and thread counts. Suite failures are recorded
/// in the manifest without aborting the remaining suites.
RobustnessReport run_experiment(const ExperimentConfig& cfg);
RobustnessReport run_experiment(const std::filesystem::path& config_path);

/// The 0, 0.02, ..., 0.30 grid used when a sweep omits eps_grid.
std::vector<double> default_eps_grid();

/// Table-style default PGD grid: eps in {0.3, 0.2, 0.1} x steps {40, 30},
/// alpha 0.01.
std::vector<PgdSetting> default_pgd_settings();

/// Loads the dataset pair described by the config.
void load_dataset_pair(const DatasetConfig& cfg, Dataset* train_out,
                       Dataset* test_out);

}  // namespace dprl

#endif  // DPRL_EXPERIMENT_HPP_
