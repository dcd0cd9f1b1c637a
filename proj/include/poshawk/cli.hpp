#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace poshawk {

/// Effective run configuration: defaults, overridden by a flat key=value
/// config file, overridden by CLI flags. Echoed on every run.
struct CliConfig {
    std::string events_path;
    std::string calendar_path;
    std::string model_in;
    std::string model_out;
    std::string out_path;
    std::string svg_path;
    std::string epoch = "2019-01-07T00:00:00";
    std::string timezone = "UTC";
    std::string kernel_mode = "paper";
    std::string future_integral = "causal";
    std::string phat_contributors = "history";
    std::string models = "hawkes,nhpp,regression";
    double window_s = 14400;
    double ridge = 1e-6;
    double gradient_tol = 1e-8;
    double early_window_s = 3600;
    double horizon_hours = 24;
    int n_realizations = 30;
    int train_days = 30;
    int block_days = 15;
    int eval_days = 8;
    int synth_days = 90;
    std::uint64_t seed = 1;

    void apply_kv(const std::string& key, const std::string& value);
    std::string echo() const;
};

/// Entry point used by the poshawk binary and by tests.
/// Exit codes: 0 success, 1 numeric/model failure, 2 I/O or config failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace poshawk
