#pragma once

#include "kac/params.hpp"
#include "kac/particle.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kac {

struct ExperimentConfig {
    ModelParams params{1.0, 1.0, 1.0, 1.0};
    RescalingMode mode = RescalingMode::BetaMeanField;
    std::vector<std::int64_t> N_list{64};
    std::vector<std::int64_t> M_list{10000, 100000, 1000000};
    double horizon = 4.0;
    double t_min = 0.0;          // first checkpoint (fits exclude earlier times)
    int replicas = 100;
    std::uint64_t seed = 20270809;
    int checkpoints = 9;
    int grid_cells = 20;         // phase diagram resolution
    int m_samples = 2000;        // generator pairing states per N
    double events_target = 1e6;  // exact-rescaling energy soak
    double f0_variance_factor = 4.0;
    double m2_start_factor = 2.0; // solver starts from variance m2_start_factor * E
    // solver grid settings (0 means pick automatically)
    double xi_max = 0.0;
    int n_xi = 2049;
    int n_theta = 128;
    int n_steps = 4000;
    double v_max = 0.0;
    int n_v = 4001;
    double threshold = 0.0; // 0 means the experiment's documented default
    std::string out_dir;
    std::string format = "csv";
    bool assert_pass = false;
};

// key = value file; '#' starts a comment. Unknown keys are rejected.
ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base = {});
void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string config_to_json(const ExperimentConfig& cfg);

struct ReplicaRow {
    int replica;
    std::int64_t n;  // particle/sample count dimension (0 when unused)
    int checkpoint;
    double time;     // checkpoint time, or auxiliary abscissa
    double value;
};

struct SeriesPoint {
    std::int64_t n;
    int checkpoint;
    double time;
    double mean;
    double se;
    double target; // NaN when no pointwise target exists
};

struct RunRecord {
    std::string experiment;
    ExperimentConfig config;
    std::vector<ReplicaRow> rows;
    std::vector<SeriesPoint> series;
    std::map<std::string, double> scalars;
    std::vector<std::string> checks; // one human-readable PASS/FAIL line each
    bool pass = true;
    double wall_ms = 0.0;
};

// Aggregate rows into per-(n, checkpoint) mean/SE series, in row order.
std::vector<SeriesPoint> aggregate_rows(const std::vector<ReplicaRow>& rows);

RunRecord run_contraction(const ExperimentConfig& cfg);
RunRecord run_energy_identity(const ExperimentConfig& cfg);
RunRecord run_poc_sweep(const ExperimentConfig& cfg);
RunRecord run_equilibration(const ExperimentConfig& cfg);
RunRecord run_phase_diagram(const ExperimentConfig& cfg);
RunRecord run_moment_threshold(const ExperimentConfig& cfg);
RunRecord run_sphere_chaos(const ExperimentConfig& cfg);
RunRecord run_generator_check(const ExperimentConfig& cfg);
RunRecord run_kbar_check(const ExperimentConfig& cfg);
RunRecord run_stationary(const ExperimentConfig& cfg);
RunRecord run_simulate(const ExperimentConfig& cfg);

// Baseline configurations used by the acceptance suite and as CLI defaults.
ExperimentConfig default_config(const std::string& experiment);

// run.json + replicas.csv (or replicas.json) under dir.
void write_run(const RunRecord& record, const std::string& dir, const std::string& format);

inline constexpr const char* kVersionTag = "0.1.0";

} // namespace kac
