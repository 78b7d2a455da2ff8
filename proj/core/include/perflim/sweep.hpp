#pragma once

#include <iosfwd>
#include <optional>

#include "perflim/run_config.hpp"

namespace perflim {

struct SweepRow {
    std::vector<std::pair<std::string, double>> swept;
    double ju_zero_direction_term = 0.0;
    double ju_szero_term = 0.0;
    double ju_log_integral_term = 0.0;
    double ju_star = 0.0;
    double jv_star = 0.0;
    double j_star = 0.0;
    std::optional<double> oracle_j;
    std::optional<double> oracle_gap;
    std::optional<double> mc_estimate;
    std::optional<double> mc_stderr;
    std::optional<double> snr_stabilizability;
    std::optional<double> snr_tracking_total;  // may be +inf
    std::string error;
};

struct SweepResult {
    std::vector<std::string> columns;
    std::vector<SweepRow> rows;
    bool any_error = false;
};

// Evaluate every sweep point (parallel pool, deterministic row order).
SweepResult run_sweep(const RunConfig& cfg, int jobs,
                      std::optional<uint64_t> seed_override = std::nullopt);

// 17-significant-digit comma-separated output with a mandatory header.
void write_csv(const SweepResult& r, std::ostream& out);

// Companion plot script for the emitted CSV.
std::string gnuplot_script(const RunConfig& cfg, const std::string& csv_name);

struct TrendReport {
    bool pass = false;
    std::string message;
};

// Verify that j_star is weakly nondecreasing along `param` within every
// group of the other swept values. Reports the first violation.
TrendReport check_trend(std::istream& csv, const std::string& param);

} // namespace perflim
