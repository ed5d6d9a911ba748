#include "kac/experiments.hpp"

#include "kac/errors.hpp"
#include "kac/stats.hpp"
#include "run_util.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

namespace kac {

namespace detail {

std::pair<std::vector<double>, std::vector<double>> middle80(
    const std::vector<double>& x, const std::vector<double>& y) {
    const int k = static_cast<int>(x.size());
    const int skip = k >= 10 ? k / 10 : (k >= 5 ? 1 : 0);
    std::vector<double> xs(x.begin() + skip, x.end() - skip);
    std::vector<double> ys(y.begin() + skip, y.end() - skip);
    return {std::move(xs), std::move(ys)};
}

} // namespace detail

std::vector<SeriesPoint> aggregate_rows(const std::vector<ReplicaRow>& rows) {
    // group by (n, checkpoint), preserving first-appearance order
    std::vector<SeriesPoint> out;
    std::map<std::pair<std::int64_t, int>, std::size_t> index;
    std::vector<std::vector<double>> buckets;
    for (const auto& row : rows) {
        const auto key = std::make_pair(row.n, row.checkpoint);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, out.size());
            out.push_back({row.n, row.checkpoint, row.time, 0.0, 0.0,
                           std::numeric_limits<double>::quiet_NaN()});
            buckets.emplace_back();
            it = index.find(key);
        }
        buckets[it->second].push_back(row.value);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto ms = mean_se(buckets[i]);
        out[i].mean = ms.mean;
        out[i].se = ms.se;
    }
    return out;
}

ExperimentConfig default_config(const std::string& experiment) {
    ExperimentConfig c;
    c.out_dir = "runs/" + experiment;
    if (experiment == "contract") {
        c.N_list = {64};
        c.horizon = 4.0;
        c.replicas = 10000;
        c.checkpoints = 17;
        c.threshold = 0.05;
    } else if (experiment == "energy") {
        c.N_list = {32};
        c.horizon = 3.0;
        c.replicas = 4000;
        c.checkpoints = 10;
        c.events_target = 1e6;
    } else if (experiment == "poc") {
        c.N_list = {32, 64, 128, 256, 512, 1024};
        c.horizon = 3.0;
        c.replicas = 200;
        c.checkpoints = 5;
    } else if (experiment == "equilibrate") {
        c.t_min = 0.5;
        c.horizon = 6.0;
        c.checkpoints = 12;
        c.threshold = 0.10;
        c.N_list = {64, 256};
        c.replicas = 200;
    } else if (experiment == "phase") {
        c.grid_cells = 20;
    } else if (experiment == "moments") {
        c.params = ModelParams(0.0, 1.0, 2.0, 1.0);
        c.M_list = {10000, 100000, 1000000};
        c.replicas = 16;
        c.horizon = 12.0;
        c.threshold = 0.20;
    } else if (experiment == "sphere") {
        c.N_list = {64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384};
        c.replicas = 200;
        c.threshold = -0.4;
    } else if (experiment == "genchk") {
        c.params = ModelParams(0.0, 1.0, 1.0, 0.5);
        c.mode = RescalingMode::AlphaExact;
        c.N_list = {64, 128, 256, 512, 1024, 2048, 4096};
        c.m_samples = 2000;
    } else if (experiment == "kbar") {
        c.params = ModelParams(1.0, 1.0, 1.0, 0.7);
    } else if (experiment == "stationary") {
        // defaults to E = T; acceptance drives other parameter sets
    } else if (experiment == "simulate") {
        c.N_list = {16};
        c.horizon = 5.0;
        c.checkpoints = 6;
    } else {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }
    return c;
}

void write_run(const RunRecord& record, const std::string& dir, const std::string& format) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    nlohmann::json j;
    j["version"] = kVersionTag;
    j["experiment"] = record.experiment;
    j["config"] = nlohmann::json::parse(config_to_json(record.config));
    j["scalars"] = record.scalars;
    j["checks"] = record.checks;
    j["pass"] = record.pass;
    j["wall_ms"] = record.wall_ms;
    nlohmann::json series = nlohmann::json::array();
    for (const auto& s : record.series) {
        nlohmann::json p;
        p["n"] = s.n;
        p["checkpoint"] = s.checkpoint;
        p["time"] = s.time;
        p["mean"] = s.mean;
        p["se"] = s.se;
        if (std::isfinite(s.target)) p["target"] = s.target;
        series.push_back(std::move(p));
    }
    j["series"] = std::move(series);
    {
        std::ofstream out(dir + "/run.json");
        if (!out) throw std::runtime_error("cannot open " + dir + "/run.json");
        out << j.dump(2) << "\n";
    }

    if (format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : record.rows)
            rows.push_back({{"replica", r.replica}, {"n", r.n}, {"checkpoint", r.checkpoint},
                            {"time", r.time}, {"value", r.value}});
        std::ofstream out(dir + "/replicas.json");
        out << rows.dump() << "\n";
    } else {
        std::ofstream out(dir + "/replicas.csv");
        out << "replica,n,checkpoint,time,value\n";
        out.precision(17);
        for (const auto& r : record.rows)
            out << r.replica << "," << r.n << "," << r.checkpoint << "," << r.time << ","
                << r.value << "\n";
    }
}

} // namespace kac
