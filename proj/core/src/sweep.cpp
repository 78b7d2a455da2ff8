#include "perflim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "perflim/errors.hpp"
#include "perflim/monte_carlo.hpp"
#include "perflim/oracle.hpp"
#include "perflim/performance.hpp"
#include "perflim/snr.hpp"

namespace perflim {

namespace {

struct PointValues {
    double k, epsilon, f_cut, h_cut, sigma_scale, gamma_scale;
};

Rational filter_rational(const FilterSpec& spec, double cutoff_override) {
    switch (spec.kind) {
        case FilterSpec::Kind::unity: return Rational(1.0);
        case FilterSpec::Kind::lowpass1: {
            const double c = cutoff_override;
            return Rational(Polynomial(c), Polynomial({c, 1.0}));
        }
        case FilterSpec::Kind::rational:
            return Rational(Polynomial::from_real(spec.num), Polynomial::from_real(spec.den));
    }
    raise(Errc::usage_error, "unreachable filter kind");
}

Rational plant_rational(const PlantSpec& spec, double k) {
    if (spec.kind == PlantSpec::Kind::gain_zero_integrator)
        return Rational(Polynomial({-k, 1.0}), Polynomial({0.0, 1.0, 1.0}));
    return Rational(Polynomial::from_real(spec.num), Polynomial::from_real(spec.den));
}

SweepRow evaluate_point(const RunConfig& cfg, const PointValues& pv,
                        const std::vector<std::pair<std::string, double>>& swept,
                        std::optional<uint64_t> seed_override) {
    SweepRow row;
    row.swept = swept;
    try {
        const int l = static_cast<int>(cfg.sigma.size());
        const Rational P = plant_rational(cfg.plant, pv.k);
        const Rational Fr = filter_rational(cfg.f, pv.f_cut);
        const Rational Hr = filter_rational(cfg.h, pv.h_cut);

        ChannelModel ch;
        {
            std::vector<Rational> fd(static_cast<size_t>(l), Fr);
            std::vector<Rational> hd(static_cast<size_t>(l), Hr);
            ch.F = RationalMatrix::diagonal(fd);
            ch.H = RationalMatrix::diagonal(hd);
        }
        ch.sigma = Eigen::VectorXd(l);
        ch.gamma = Eigen::VectorXd(l);
        for (int i = 0; i < l; ++i) {
            ch.sigma(i) = cfg.sigma[static_cast<size_t>(i)] * pv.sigma_scale;
            ch.gamma(i) = cfg.gamma[static_cast<size_t>(i)] * pv.gamma_scale;
        }

        RationalMatrix plant = l == 1 ? RationalMatrix(P)
                                      : RationalMatrix::diagonal(std::vector<Rational>(
                                            static_cast<size_t>(l), P));

        const PerfBreakdown perf = tracking_performance(plant, ch, pv.epsilon);
        row.ju_zero_direction_term = perf.ju_zero_direction_term;
        row.ju_szero_term = perf.ju_szero_term;
        row.ju_log_integral_term = perf.ju_log_integral_term;
        row.ju_star = perf.ju_star;
        row.jv_star = perf.jv_star;
        row.j_star = perf.j_star;

        if (cfg.oracle.enable && l == 1) {
            OracleProblem prob = make_oracle_problem(plant, ch, pv.epsilon);
            OracleResult r = optimize_finite_basis(prob, cfg.oracle.m, cfg.oracle.lambda);
            row.oracle_j = r.j_value;
            row.oracle_gap = r.j_value - perf.j_star;
            if (cfg.oracle.mc_enable) {
                MonteCarloSettings st;
                st.runs = cfg.oracle.mc_runs;
                st.horizon = cfg.oracle.mc_horizon;
                st.dt = cfg.oracle.mc_dt;
                st.seed = seed_override ? *seed_override : cfg.oracle.mc_seed;
                MonteCarloStats mc = monte_carlo_j(prob, r, st);
                row.mc_estimate = mc.estimate;
                row.mc_stderr = mc.standard_error;
            }
        }

        if (l == 1) {
            row.snr_stabilizability = required_snr_for_stabilization(P, Fr, Hr);
            try {
                row.snr_tracking_total =
                    *row.snr_stabilizability + tracking_snr_penalty(P, Fr, Hr);
            } catch (const Error& e) {
                if (e.code() == Errc::not_in_h2)
                    row.snr_tracking_total = std::numeric_limits<double>::infinity();
                else
                    throw;
            }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

SweepResult run_sweep(const RunConfig& cfg, int jobs, std::optional<uint64_t> seed_override) {
    cfg.validate();
    SweepResult out;
    for (const auto& s : cfg.sweeps) out.columns.push_back(s.param);

    // cross product, outer sweep first
    std::vector<std::vector<std::pair<std::string, double>>> points;
    if (cfg.sweeps.empty()) {
        points.push_back({});
    } else if (cfg.sweeps.size() == 1) {
        for (double v : cfg.sweeps[0].grid) points.push_back({{cfg.sweeps[0].param, v}});
    } else {
        for (double a : cfg.sweeps[0].grid)
            for (double b : cfg.sweeps[1].grid)
                points.push_back({{cfg.sweeps[0].param, a}, {cfg.sweeps[1].param, b}});
    }

    out.rows.resize(points.size());
    std::atomic<size_t> next{0};
    const int njobs = std::max(1, jobs);
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) break;
            PointValues pv{cfg.plant.k, cfg.epsilon, cfg.f.cutoff, cfg.h.cutoff, 1.0, 1.0};
            for (const auto& [name, v] : points[i]) {
                if (name == "k") pv.k = v;
                else if (name == "epsilon") pv.epsilon = v;
                else if (name == "f") pv.f_cut = v;
                else if (name == "h") pv.h_cut = v;
                else if (name == "sigma") pv.sigma_scale = v;
                else if (name == "gamma") pv.gamma_scale = v;
            }
            out.rows[i] = evaluate_point(cfg, pv, points[i], seed_override);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < njobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (const auto& r : out.rows)
        if (!r.error.empty()) out.any_error = true;
    return out;
}

void write_csv(const SweepResult& r, std::ostream& out) {
    for (const auto& c : r.columns) out << c << ',';
    out << "ju_zero_direction_term,ju_szero_term,ju_log_integral_term,ju_star,jv_star,j_star";
    bool have_oracle = false, have_mc = false, have_snr = false;
    for (const auto& row : r.rows) {
        if (row.oracle_j) have_oracle = true;
        if (row.mc_estimate) have_mc = true;
        if (row.snr_stabilizability) have_snr = true;
    }
    if (have_oracle) out << ",oracle_j,oracle_gap";
    if (have_mc) out << ",mc_estimate,mc_stderr";
    if (have_snr) out << ",snr_stabilizability,snr_tracking_total";
    out << ",error\n";

    for (const auto& row : r.rows) {
        for (const auto& [name, v] : row.swept) out << format_number(v) << ',';
        out << format_number(row.ju_zero_direction_term) << ','
            << format_number(row.ju_szero_term) << ','
            << format_number(row.ju_log_integral_term) << ','
            << format_number(row.ju_star) << ',' << format_number(row.jv_star) << ','
            << format_number(row.j_star);
        if (have_oracle)
            out << ',' << (row.oracle_j ? format_number(*row.oracle_j) : "")
                << ',' << (row.oracle_gap ? format_number(*row.oracle_gap) : "");
        if (have_mc)
            out << ',' << (row.mc_estimate ? format_number(*row.mc_estimate) : "")
                << ',' << (row.mc_stderr ? format_number(*row.mc_stderr) : "");
        if (have_snr)
            out << ',' << (row.snr_stabilizability ? format_number(*row.snr_stabilizability) : "")
                << ','
                << (row.snr_tracking_total ? format_number(*row.snr_tracking_total) : "");
        out << ',' << row.error << '\n';
    }
}

std::string gnuplot_script(const RunConfig& cfg, const std::string& csv_name) {
    std::ostringstream out;
    out << "set datafile separator ','\n";
    out << "set key autotitle columnhead\n";
    out << "set grid\n";
    const size_t nsweep = cfg.sweeps.size();
    if (nsweep == 0) {
        out << "# single point; nothing to plot\n";
        return out.str();
    }
    const size_t jcol = nsweep + 6;  // j_star column, 1-based
    if (nsweep == 1) {
        out << "set xlabel '" << cfg.sweeps[0].param << "'\n";
        out << "set ylabel 'optimal index'\n";
        out << "plot '" << csv_name << "' using 1:" << jcol << " with linespoints\n";
    } else {
        out << "set xlabel '" << cfg.sweeps[0].param << "'\n";
        out << "set ylabel '" << cfg.sweeps[1].param << "'\n";
        out << "set zlabel 'optimal index'\n";
        out << "splot '" << csv_name << "' using 1:2:" << jcol << " with points\n";
    }
    return out.str();
}

TrendReport check_trend(std::istream& csv, const std::string& param) {
    std::string header;
    if (!std::getline(csv, header))
        raise(Errc::usage_error, "empty CSV");
    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    int pcol = -1, jcol = -1;
    for (size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == param) pcol = static_cast<int>(i);
        if (cols[i] == "j_star") jcol = static_cast<int>(i);
    }
    if (jcol < 0) raise(Errc::usage_error, "CSV lacks a j_star column");
    if (pcol < 0) raise(Errc::usage_error, "unknown parameter '" + param + "'");
    // group key: all swept columns before j_star terms except `param`
    const int first_value_col = jcol - 5;  // swept columns precede the six terms

    std::map<std::string, std::vector<std::pair<double, double>>> groups;
    std::string line;
    int lineno = 1;
    while (std::getline(csv, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (static_cast<int>(fields.size()) <= jcol)
            raise(Errc::usage_error, "short CSV row at line " + std::to_string(lineno));
        std::string key;
        for (int i = 0; i < first_value_col; ++i)
            if (i != pcol) key += fields[static_cast<size_t>(i)] + "|";
        groups[key].emplace_back(std::stod(fields[static_cast<size_t>(pcol)]),
                                 std::stod(fields[static_cast<size_t>(jcol)]));
    }

    for (auto& [key, pts] : groups) {
        std::sort(pts.begin(), pts.end());
        for (size_t i = 1; i < pts.size(); ++i) {
            const double prev = pts[i - 1].second, cur = pts[i].second;
            if (cur < prev - 1e-9 * std::max(1.0, std::abs(prev))) {
                TrendReport rep;
                rep.pass = false;
                std::ostringstream msg;
                msg << "j_star decreases along " << param << " between " << pts[i - 1].first
                    << " and " << pts[i].first << " (" << prev << " -> " << cur << ")";
                if (!key.empty()) msg << " at group " << key;
                rep.message = msg.str();
                return rep;
            }
        }
    }
    TrendReport rep;
    rep.pass = true;
    rep.message = "j_star weakly nondecreasing in " + param;
    return rep;
}

} // namespace perflim
