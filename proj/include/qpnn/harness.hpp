#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qpnn/tasks.hpp"
#include "qpnn/trainer.hpp"

namespace qpnn::lab {

// One experiment grid: every combination of layer count, loss level and
// Kerr phase becomes a cell that gets `trials` in-situ training runs, a
// matched offline run and one loss-limit computation.
struct ExperimentConfig {
  std::string task = "bsa";
  std::vector<int> layer_range = {2};
  std::vector<double> alpha_list = {0.0};   // dB/cm
  std::vector<double> varphi_list = {3.14159265358979323846};
  int trials = 50;
  std::uint64_t base_seed = 1;
  std::string objective_kind = "unconditional";
  std::string output_dir = "runs";

  void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& file);
void save_config(const ExperimentConfig& config,
                 const std::filesystem::path& file);

struct RunOptions {
  int jobs = 1;
  OptimizerConfig optimizer;
  int offline_restarts = 20;  // reference solutions stop early once converged
  bool verbose = false;
};

struct RunStats {
  int completed = 0;
  int skipped = 0;  // records that already existed
};

// Directory name of one cell, also the seed namespace for its trials.
std::string cell_tag(const std::string& task, int layers, double alpha,
                     double varphi, const std::string& objective);

// Run everything the config asks for, skipping records already on disk so
// an interrupted run resumes where it stopped. Record files are written
// atomically (temp file, then rename).
RunStats run_experiment(const ExperimentConfig& config,
                        const RunOptions& options);

// One line of the analysis table.
struct SummaryRow {
  std::string task;
  int layers = 0;
  double alpha = 0.0;
  double varphi = 0.0;
  std::string metric;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int n_success = 0;
  int n_trials = 0;
  int plateau_n = 0;
};

// Read the records a run produced and distill them: per cell, the success
// cut from the offline distribution, lognormal fits over the successful
// trials (f_unc, f_con, p_cb), beta fits over the best plateau (the _max
// metrics), and reference rows for offline, loss limit and the fixed-gate
// baseline where it applies.
std::vector<SummaryRow> analyze_experiment(const ExperimentConfig& config);

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::filesystem::path& file);

// In-situ fidelities of one cell, in trial order, read back from disk.
// Used when two cells must be compared directly.
std::vector<double> cell_in_situ_fidelities(const ExperimentConfig& config,
                                            int layers, double alpha,
                                            double varphi);
std::vector<double> cell_offline_fidelities(const ExperimentConfig& config,
                                            int layers, double alpha,
                                            double varphi);

}  // namespace qpnn::lab
