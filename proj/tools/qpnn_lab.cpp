#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpnn/harness.hpp"
#include "qpnn/stats.hpp"
#include "qpnn/tasks.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

qpnn::ObjectiveKind objective_from(const std::string& name) {
  return name == "con" || name == "conditional"
             ? qpnn::ObjectiveKind::conditional
             : qpnn::ObjectiveKind::unconditional;
}

void print_metrics(const qpnn::MetricsReport& m,
                   const std::vector<std::string>& labels) {
  std::printf("f_unc  %.8f\nf_con  %.8f\np_cb   %.8f\n", m.f_unc, m.f_con,
              m.p_cb);
  for (std::size_t i = 0; i < m.per_pair.size(); ++i) {
    const auto& pm = m.per_pair[i];
    const std::string label =
        i < labels.size() ? labels[i] : std::to_string(i);
    std::printf("  %-6s f_unc %.8f  f_con %.8f  p_cb %.8f%s\n", label.c_str(),
                pm.f_unc, pm.f_con, pm.p_cb,
                pm.degenerate ? "  (degenerate)" : "");
  }
}

void write_trace_csv(const std::vector<double>& trace,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iteration,best_infidelity\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << i + 1 << ',' << trace[i] << '\n';
}

// shared flags for the grid-style subcommands
struct GridArgs {
  std::string task = "bsa";
  std::vector<int> layers = {2};
  int trials = 50;
  std::uint64_t seed = 1;
  std::string objective = "unc";
  std::string out = "runs";
  int jobs = 1;
  std::string config_file;
  double ftol = 1e-6;
  int max_evals = 20000;
};

void add_grid_flags(CLI::App* cmd, GridArgs& args) {
  cmd->add_option("--task", args.task, "task name (bsa or ghz)");
  cmd->add_option("--layers", args.layers, "layer counts to cover");
  cmd->add_option("--trials", args.trials, "training runs per grid cell");
  cmd->add_option("--seed", args.seed, "base seed for the whole grid");
  cmd->add_option("--objective", args.objective, "unc or con")
      ->check(CLI::IsMember({"unc", "con", "unconditional", "conditional"}));
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--jobs", args.jobs, "parallel workers");
  cmd->add_option("--config", args.config_file,
                  "JSON experiment config (overrides the other flags)");
  cmd->add_option("--ftol", args.ftol, "optimizer stall tolerance");
  cmd->add_option("--max-evals", args.max_evals, "optimizer budget per run");
}

int run_grid(const GridArgs& args, std::vector<double> alphas,
             std::vector<double> varphis) {
  qpnn::lab::ExperimentConfig config;
  if (!args.config_file.empty()) {
    config = qpnn::lab::load_config(args.config_file);
  } else {
    config.task = args.task;
    config.layer_range = args.layers;
    config.alpha_list = std::move(alphas);
    config.varphi_list = std::move(varphis);
    config.trials = args.trials;
    config.base_seed = args.seed;
    config.objective_kind =
        objective_from(args.objective) == qpnn::ObjectiveKind::conditional
            ? "conditional"
            : "unconditional";
    config.output_dir = args.out;
  }
  qpnn::lab::RunOptions options;
  options.jobs = args.jobs;
  options.optimizer.ftol_abs = args.ftol;
  options.optimizer.max_evals = args.max_evals;
  options.verbose = true;
  const qpnn::lab::RunStats st = qpnn::lab::run_experiment(config, options);
  std::printf("completed %d record(s), %d already present, output in %s\n",
              st.completed, st.skipped, config.output_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"training laboratory for lossy photonic mesh networks"};
  app.require_subcommand(1);

  // train: one in-situ run
  std::string t_task = "bsa", t_objective = "unc", t_out;
  int t_layers = 2, t_max_evals = 20000;
  double t_alpha = 0.0, t_varphi = kPi, t_ftol = 1e-6;
  std::uint64_t t_seed = 1;
  bool t_ideal = false;
  auto* train = app.add_subcommand("train", "train one network instance");
  train->add_option("--task", t_task, "task name (bsa or ghz)");
  train->add_option("--layers", t_layers, "mesh layers");
  train->add_option("--alpha", t_alpha, "mean propagation loss in dB/cm");
  train->add_option("--varphi", t_varphi, "Kerr phase in radians");
  train->add_option("--seed", t_seed, "trial seed");
  train->add_option("--objective", t_objective, "unc or con")
      ->check(CLI::IsMember({"unc", "con", "unconditional", "conditional"}));
  train->add_option("--out", t_out, "write the convergence trace CSV here");
  train->add_option("--ftol", t_ftol, "optimizer stall tolerance");
  train->add_option("--max-evals", t_max_evals, "optimizer budget");
  train->add_flag("--ideal", t_ideal, "train without imperfections");

  // sweep-loss / sweep-nl: experiment grids
  GridArgs loss_args, nl_args;
  std::vector<double> loss_alphas = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  double loss_varphi = kPi;
  auto* sweep_loss = app.add_subcommand(
      "sweep-loss", "trial grid over propagation loss levels");
  add_grid_flags(sweep_loss, loss_args);
  sweep_loss->add_option("--alpha", loss_alphas, "loss levels in dB/cm");
  sweep_loss->add_option("--varphi", loss_varphi, "Kerr phase in radians");

  std::vector<double> nl_varphis = {kPi / 100, kPi / 4, kPi / 2, kPi};
  double nl_alpha = 0.3;
  auto* sweep_nl = app.add_subcommand(
      "sweep-nl", "trial grid over Kerr phase values");
  add_grid_flags(sweep_nl, nl_args);
  sweep_nl->add_option("--varphi", nl_varphis, "Kerr phases in radians");
  sweep_nl->add_option("--alpha", nl_alpha, "loss level in dB/cm");

  // loss-limit: the no-imperfection performance ceiling
  std::string ll_task = "bsa", ll_out;
  int ll_layers = 2, ll_max_evals = 20000;
  double ll_alpha = 0.3, ll_varphi = kPi, ll_ftol = 1e-6;
  std::uint64_t ll_seed = 1;
  auto* ll = app.add_subcommand(
      "loss-limit", "fidelity ceiling imposed by propagation loss");
  ll->add_option("--task", ll_task, "task name (bsa or ghz)");
  ll->add_option("--layers", ll_layers, "mesh layers");
  ll->add_option("--alpha", ll_alpha, "mean propagation loss in dB/cm");
  ll->add_option("--varphi", ll_varphi, "Kerr phase in radians");
  ll->add_option("--seed", ll_seed, "seed for the ideal training");
  ll->add_option("--out", ll_out, "write the result JSON here");
  ll->add_option("--ftol", ll_ftol, "optimizer stall tolerance");
  ll->add_option("--max-evals", ll_max_evals, "optimizer budget");

  // baseline-fredkin: the fixed-circuit reference curve
  double bf_varphi = kPi;
  int bf_points = 0;
  std::string bf_out;
  auto* bf = app.add_subcommand(
      "baseline-fredkin",
      "Bell analysis fidelity of the fixed Fredkin construction");
  bf->add_option("--varphi", bf_varphi, "Kerr phase in radians");
  bf->add_option("--points", bf_points,
                 "emit a CSV over [0, pi] with this many points");
  bf->add_option("--out", bf_out, "write the CSV here instead of stdout");

  // series: chained success rate
  double se_fidelity = 0.0;
  int se_nodes = 10;
  auto* series = app.add_subcommand(
      "series", "success probability of identical nodes in series");
  series->add_option("--fidelity", se_fidelity, "per-node success rate")
      ->required();
  series->add_option("--nodes", se_nodes, "number of nodes");

  // analyze: records -> summary.csv
  std::string an_dir = "runs", an_config, an_out;
  auto* analyze =
      app.add_subcommand("analyze", "summarize an experiment's records");
  analyze->add_option("--dir", an_dir,
                      "experiment directory (holds config.json)");
  analyze->add_option("--config", an_config, "explicit config JSON path");
  analyze->add_option("--out", an_out, "summary CSV path");

  // snapshot: occupation profile through the network
  std::string sn_task = "bsa", sn_objective = "unc", sn_out;
  int sn_layers = 2, sn_pair = 0, sn_max_evals = 20000;
  double sn_alpha = 0.3, sn_varphi = kPi;
  std::uint64_t sn_seed = 1;
  bool sn_ideal = false;
  auto* snapshot = app.add_subcommand(
      "snapshot", "mode occupation stage by stage for a trained network");
  snapshot->add_option("--task", sn_task, "task name (bsa or ghz)");
  snapshot->add_option("--layers", sn_layers, "mesh layers");
  snapshot->add_option("--alpha", sn_alpha, "mean propagation loss in dB/cm");
  snapshot->add_option("--varphi", sn_varphi, "Kerr phase in radians");
  snapshot->add_option("--seed", sn_seed, "trial seed");
  snapshot->add_option("--objective", sn_objective, "unc or con")
      ->check(CLI::IsMember({"unc", "con", "unconditional", "conditional"}));
  snapshot->add_option("--pair", sn_pair, "training pair to inject");
  snapshot->add_option("--out", sn_out, "write the CSV here instead of stdout");
  snapshot->add_option("--max-evals", sn_max_evals, "optimizer budget");
  snapshot->add_flag("--ideal", sn_ideal, "train without imperfections");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const qpnn::TrainingSet set = qpnn::training_set_for(t_task);
      const qpnn::NetworkArch arch =
          qpnn::arch_for(t_task, t_layers, t_alpha, t_varphi);
      qpnn::OptimizerConfig oc;
      oc.ftol_abs = t_ftol;
      oc.max_evals = t_max_evals;
      qpnn::TrainOutcome out;
      if (t_ideal) {
        qpnn::QPNNInstance net = qpnn::make_ideal_instance(arch);
        out = qpnn::train_instance(net, set, objective_from(t_objective), oc,
                                   t_seed);
      } else {
        out = qpnn::train_in_situ(arch, set, objective_from(t_objective), oc,
                                  t_seed);
      }
      std::printf("infidelity %.3e after %d evaluations (%s)\n",
                  out.infidelity, out.evaluations,
                  out.reason == qpnn::StopReason::converged
                      ? "converged"
                      : "budget exhausted");
      print_metrics(out.metrics, set.labels);
      if (!t_out.empty()) {
        write_trace_csv(out.trace, t_out);
        std::printf("trace written to %s\n", t_out.c_str());
      }
    } else if (sweep_loss->parsed()) {
      return run_grid(loss_args, loss_alphas, {loss_varphi});
    } else if (sweep_nl->parsed()) {
      return run_grid(nl_args, {nl_alpha}, nl_varphis);
    } else if (ll->parsed()) {
      const qpnn::TrainingSet set = qpnn::training_set_for(ll_task);
      const qpnn::NetworkArch arch =
          qpnn::arch_for(ll_task, ll_layers, ll_alpha, ll_varphi);
      qpnn::OptimizerConfig oc;
      oc.ftol_abs = ll_ftol;
      oc.max_evals = ll_max_evals;
      const qpnn::LossLimitOutcome out =
          qpnn::loss_limit(arch, set, oc, ll_seed);
      std::printf("ideal_fidelity     %.10f\n", out.ideal_fidelity);
      std::printf("layer_transmission %.10f\n", out.layer_transmission);
      std::printf("limit              %.10f\n", out.limit);
      if (!ll_out.empty()) {
        std::ofstream f(ll_out);
        f << "{\n  \"ideal_fidelity\": " << out.ideal_fidelity
          << ",\n  \"layer_transmission\": " << out.layer_transmission
          << ",\n  \"limit\": " << out.limit << "\n}\n";
      }
    } else if (bf->parsed()) {
      if (bf_points > 0) {
        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!bf_out.empty()) {
          file.open(bf_out);
          os = &file;
        }
        *os << "varphi_rad,fidelity\n";
        for (int i = 0; i < bf_points; ++i) {
          const double v = kPi * i / (bf_points - 1);
          *os << v << ',' << qpnn::fredkin_bsa_fidelity(v) << '\n';
        }
      } else {
        std::printf("%.10f\n", qpnn::fredkin_bsa_fidelity(bf_varphi));
      }
    } else if (series->parsed()) {
      const double rate = qpnn::series_success_rate(se_fidelity, se_nodes);
      const double bound =
          qpnn::series_success_rate(qpnn::linear_optical_bound(), se_nodes);
      std::printf("series_rate        %.6e\n", rate);
      std::printf("linear_bound_rate  %.6e\n", bound);
    } else if (analyze->parsed()) {
      const std::string cfg_path =
          !an_config.empty()
              ? an_config
              : (std::filesystem::path(an_dir) / "config.json").string();
      const qpnn::lab::ExperimentConfig config =
          qpnn::lab::load_config(cfg_path);
      const auto rows = qpnn::lab::analyze_experiment(config);
      const std::string out_path =
          !an_out.empty()
              ? an_out
              : (std::filesystem::path(config.output_dir) / "summary.csv")
                    .string();
      qpnn::lab::write_summary_csv(rows, out_path);
      std::printf("%zu summary rows written to %s\n", rows.size(),
                  out_path.c_str());
    } else if (snapshot->parsed()) {
      const qpnn::TrainingSet set = qpnn::training_set_for(sn_task);
      if (sn_pair < 0 || sn_pair >= static_cast<int>(set.pairs.size()))
        throw std::invalid_argument("pair index out of range");
      const qpnn::NetworkArch arch =
          qpnn::arch_for(sn_task, sn_layers, sn_alpha, sn_varphi);
      qpnn::OptimizerConfig oc;
      oc.max_evals = sn_max_evals;
      qpnn::QPNNInstance net =
          sn_ideal ? qpnn::make_ideal_instance(arch)
                   : qpnn::make_sampled_instance(
                         arch, qpnn::derive_seed(sn_seed, "imperfections"));
      const qpnn::TrainOutcome out =
          qpnn::train_instance(net, set, objective_from(sn_objective), oc,
                               qpnn::derive_seed(sn_seed, "init"));
      net.set_parameters(out.params);
      const auto stages = net.occupation_profile(set.pairs[sn_pair].input);

      std::ofstream file;
      std::ostream* os = &std::cout;
      if (!sn_out.empty()) {
        file.open(sn_out);
        os = &file;
      }
      *os << "stage,mode";
      for (int k = 0; k <= arch.photons; ++k) *os << ",p" << k;
      *os << ",lost_norm\n";
      for (const auto& st : stages)
        for (int j = 0; j < arch.modes; ++j) {
          *os << st.label << ',' << j;
          for (int k = 0; k <= arch.photons; ++k)
            *os << ',' << st.occupation(j, k);
          *os << ',' << st.lost_norm << '\n';
        }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
