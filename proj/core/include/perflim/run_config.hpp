#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace perflim {

// Declarative description of one study: plant and channel templates, the
// index weight, up to two swept parameters, and optional certification
// settings. Parsed from a single JSON document with a version field;
// unknown fields are rejected.
struct PlantSpec {
    enum class Kind { gain_zero_integrator, rational };
    Kind kind = Kind::gain_zero_integrator;
    double k = 2.0;                 // (s - k) / (s (s + 1))
    std::vector<double> num, den;   // ascending coefficients
};

struct FilterSpec {
    enum class Kind { unity, lowpass1, rational };
    Kind kind = Kind::unity;
    double cutoff = 1.0;            // c / (s + c)
    std::vector<double> num, den;
};

struct SweepSpec {
    std::string param;              // k, epsilon, f, h, sigma, gamma
    std::vector<double> grid;       // finite, strictly monotone
};

struct OracleSpec {
    bool enable = false;
    int m = 20;
    double lambda = 1.0;
    bool mc_enable = false;
    int mc_runs = 200;
    double mc_horizon = 200.0;
    double mc_dt = 1e-3;
    uint64_t mc_seed = 12345;
};

struct OutputSpec {
    std::string csv = "results.csv";
    bool gnuplot = false;
};

struct RunConfig {
    int version = 1;
    PlantSpec plant;
    FilterSpec f, h;
    std::vector<double> sigma{1.0};
    std::vector<double> gamma{0.0};
    double epsilon = 0.0;
    std::vector<SweepSpec> sweeps;
    OracleSpec oracle;
    OutputSpec output;

    static RunConfig parse(const std::string& json_text);
    static RunConfig parse_file(const std::string& path);
    std::string serialize() const;  // canonical form; parse(serialize()) == *this
    void validate() const;          // raises usage_error with field diagnostics
};

} // namespace perflim
