#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "perflim/errors.hpp"
#include "perflim/sweep.hpp"

namespace fs = std::filesystem;
using namespace perflim;

namespace {

int default_jobs() {
    if (const char* env = std::getenv("PERFLIM_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool force_oracle,
            int jobs, std::optional<uint64_t> seed) {
    RunConfig cfg;
    try {
        cfg = RunConfig::parse_file(config_path);
    } catch (const Error& e) {
        std::cerr << "perflim: " << e.what() << "\n";
        return 2;
    }
    if (force_oracle) cfg.oracle.enable = true;

    SweepResult result;
    try {
        result = run_sweep(cfg, jobs, seed);
    } catch (const Error& e) {
        std::cerr << "perflim: " << e.what() << "\n";
        return e.code() == Errc::usage_error ? 2 : 3;
    }

    fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path csv_path = dir / cfg.output.csv;
    {
        std::ofstream out(csv_path);
        if (!out) {
            std::cerr << "perflim: cannot write " << csv_path << "\n";
            return 3;
        }
        write_csv(result, out);
    }
    std::cout << "wrote " << csv_path.string() << " (" << result.rows.size() << " rows)\n";
    if (cfg.output.gnuplot) {
        const fs::path gp = csv_path.string() + ".gp";
        std::ofstream out(gp);
        out << gnuplot_script(cfg, csv_path.filename().string());
        std::cout << "wrote " << gp.string() << "\n";
    }
    if (result.any_error) {
        for (const auto& row : result.rows)
            if (!row.error.empty()) {
                std::cerr << "perflim: sweep point failed: " << row.error << "\n";
                break;
            }
        return 3;
    }
    return 0;
}

int cmd_check_trend(const std::string& csv_path, const std::string& param) {
    std::ifstream in(csv_path);
    if (!in) {
        std::cerr << "perflim: cannot read " << csv_path << "\n";
        return 2;
    }
    try {
        TrendReport rep = check_trend(in, param);
        std::cout << (rep.pass ? "PASS: " : "FAIL: ") << rep.message << "\n";
        return rep.pass ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "perflim: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form and certified tracking-performance limits over noisy channels"};
    app.require_subcommand(1);

    std::string config_path, out_dir, csv_path, param;
    bool force_oracle = false;
    int jobs = default_jobs();
    std::optional<uint64_t> seed;
    uint64_t seed_value = 0;

    auto* run = app.add_subcommand("run", "evaluate a sweep configuration");
    run->add_option("config", config_path, "JSON configuration file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--oracle", force_oracle, "enable the finite-basis certification");
    run->add_option("--jobs", jobs, "parallel sweep evaluations (default: PERFLIM_JOBS or cores)");
    auto* seed_opt = run->add_option("--seed", seed_value, "Monte-Carlo seed override");

    auto* trend = app.add_subcommand("check-trend", "verify monotonicity of j_star in a CSV");
    trend->add_option("csv", csv_path, "CSV produced by 'run'")->required();
    trend->add_option("--param", param, "swept parameter to check")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (*seed_opt) seed = seed_value;
    if (run->parsed()) return cmd_run(config_path, out_dir, force_oracle, jobs, seed);
    return cmd_check_trend(csv_path, param);
}
