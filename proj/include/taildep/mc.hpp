#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taildep/hyperparams.hpp"
#include "taildep/simgen.hpp"

namespace taildep {

/// One hyperparameter configuration of a study: either a fixed (k, kappa)
/// pair with k given absolutely or as a fraction of n, or the data-adaptive
/// rule with its constants.
struct HyperSetting {
    HyperParams::Mode mode = HyperParams::Mode::fixed;
    std::size_t k_abs = 0;    // fixed: absolute k (takes precedence when > 0)
    double k_frac = 0.0;      // fixed: k = floor(k_frac * n)
    double kappa = 0.1;       // fixed kappa
    double c_k = 0.25;        // adaptive constants
    double c_kappa = 0.75;
    double r = 1.0;

    HyperParams resolve(std::size_t n, std::size_t d) const;
    std::string label() const;
};

/// One cell of the factorial design.
struct StudyCell {
    std::size_t n = 0, d = 0, K = 0;
    ModelKind kind = ModelKind::linear;
    bool noise = false;
};

/// Full factorial Monte Carlo study over n x d x K x model, with a list of
/// hyperparameter settings applied to every replicate.
struct StudyConfig {
    std::vector<std::size_t> n_values, d_values, k_values;
    double eta = 0.2;
    std::size_t s = 4;
    std::vector<std::pair<ModelKind, bool>> models;  // (kind, noise)
    double factor_alpha = 1.0;
    double noise_alpha = 2.0;
    std::vector<HyperSetting> hyper;
    std::size_t replicates = 100;
    std::uint64_t master_seed = 0;

    void validate() const;
    /// Cell enumeration order: n outermost, then d, then K, then model.
    std::vector<StudyCell> cells() const;
};

/// Parses a StudyConfig from a JSON file / JSON text. See README for the
/// schema. Validation problems throw parameter_error, unreadable or
/// malformed files throw io_error.
StudyConfig load_study_config(const std::string& path);
StudyConfig parse_study_config(const std::string& json_text);

/// One row of the per-replicate record stream.
struct ReplicateRecord {
    std::size_t cell_index = 0, hyper_index = 0, replicate = 0;
    std::uint64_t seed = 0;
    StudyCell cell;
    double eta = 0.0;
    std::size_t s = 0;
    std::string hyper_mode;
    std::size_t k_used = 0;
    double kappa_used = 0.0;
    bool k_rec = false, s_rec = false, i_rec = false;
    std::optional<double> tfnp, tfpp, loss;
    std::int64_t millis = 0;
};

/// Per-(cell, hyper-setting) means.
struct CellAggregate {
    std::size_t cell_index = 0, hyper_index = 0;
    StudyCell cell;
    std::string hyper_mode;
    std::size_t replicates = 0;
    double k_rec_rate = 0.0, s_rec_rate = 0.0, i_rec_rate = 0.0;
    std::size_t aligned_count = 0;  // replicates with recovered K
    std::optional<double> mean_tfnp, mean_tfpp, mean_loss;
};

struct McReport {
    std::vector<ReplicateRecord> records;
    std::vector<CellAggregate> aggregates;
};

/// Runs the whole study on a pool of `threads` workers (0 = hardware
/// concurrency) and writes records.csv and aggregate.json into out_dir.
/// Replicate seeds are derived as derive_seed(master_seed, cell_index,
/// replicate_index); all statistical output is byte-identical for any thread
/// count. The millis column is measured wall time and is the only
/// non-deterministic field.
McReport run_study(const StudyConfig& config, std::size_t threads, const std::string& out_dir);

/// Header and formatting of the record stream, shared with the CLI.
std::string record_csv_header();
std::string record_csv_row(const ReplicateRecord& r);

}  // namespace taildep
