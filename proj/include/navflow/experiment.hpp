#pragma once

#include <functional>
#include <optional>

#include "navflow/config.hpp"

namespace navflow {

struct SummaryRow {
    double s = 0.0;
    double lhs = 0.0;
    double lhs_se = 0.0;
    double lambda_hat = 0.0;
    double lambda_hat_se = 0.0;
    double rhs = 0.0;
    double rel_err = 0.0;
    double event_fail_freq = 0.0;
};

struct ExperimentResult {
    std::vector<ReplicateStats> rows;
    std::vector<SummaryRow> summary;
    std::optional<PowerFit> fit;
    double rhs = 0.0;
};

// One fully simulated replicate: pattern, forest and per-node traffic.
struct SimulatedReplicate {
    PointPattern pattern;
    NavigationForest forest;
    std::vector<double> rates;
    std::vector<double> delta;
};

SimulatedReplicate simulate_replicate(const ExperimentConfig& cfg, double s, int replicate);
ReplicateStats run_replicate(const ExperimentConfig& cfg, double s, int replicate);

// Full experiment over cfg.s_list with cfg.replicates per scale. Replicate i
// always uses rng stream (master_seed, i); results are gathered by index, so
// any thread count produces identical output.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads);

struct LinkDensityRow {
    double s = 0.0;
    Point x;
    double lambda_hat = 0.0;
    double lambda_hat_se = 0.0;
    double lambda_at_x = 0.0;
};
std::vector<LinkDensityRow> run_linkdensity(const ExperimentConfig& cfg, unsigned threads);

struct DeadEndRow {
    double rho = 0.0;
    double s = 0.0;
    int replicate = 0;
    double dead_end_frac = 0.0;
};
std::vector<DeadEndRow> run_deadends(const ExperimentConfig& cfg, unsigned threads);

std::string render_experiment_svg(const ExperimentConfig& cfg);

std::string replicates_csv(std::span<const ReplicateStats> rows);
std::string summary_csv(std::span<const SummaryRow> rows);
std::string fit_csv(const PowerFit& fit);
std::string linkdensity_csv(std::span<const LinkDensityRow> rows);
std::string deadends_csv(std::span<const DeadEndRow> rows);

// Writes replicates.csv / summary.csv (and fit.csv, pattern.svg when present)
// under cfg.out_dir; throws io_error on filesystem failure.
void write_experiment_files(const ExperimentConfig& cfg, const ExperimentResult& result);
void write_text_file(const std::string& dir, const std::string& name, const std::string& text);

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace navflow
