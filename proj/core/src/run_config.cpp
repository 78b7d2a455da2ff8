#include "perflim/run_config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "perflim/errors.hpp"

namespace perflim {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    raise(Errc::usage_error, "config field '" + where + "': " + what);
}

void expect_keys(const ordered_json& j, const std::string& where,
                 const std::set<std::string>& allowed) {
    if (!j.is_object()) bad(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) bad(where + "." + it.key(), "unknown field");
}

std::vector<double> number_list(const ordered_json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) bad(where, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) bad(where, "expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

PlantSpec parse_plant(const ordered_json& j) {
    PlantSpec p;
    expect_keys(j, "plant", {"type", "k", "num", "den"});
    const std::string type = j.value("type", "");
    if (type == "gain_zero_integrator") {
        p.kind = PlantSpec::Kind::gain_zero_integrator;
        if (!j.contains("k") || !j["k"].is_number()) bad("plant.k", "required number");
        p.k = j["k"].get<double>();
        if (j.contains("num") || j.contains("den"))
            bad("plant", "num/den are only valid with type 'rational'");
    } else if (type == "rational") {
        p.kind = PlantSpec::Kind::rational;
        if (!j.contains("num") || !j.contains("den"))
            bad("plant", "rational plants need num and den");
        p.num = number_list(j["num"], "plant.num");
        p.den = number_list(j["den"], "plant.den");
        if (j.contains("k")) bad("plant.k", "only valid with type 'gain_zero_integrator'");
    } else {
        bad("plant.type", "expected 'gain_zero_integrator' or 'rational'");
    }
    return p;
}

FilterSpec parse_filter(const ordered_json& j, const std::string& where) {
    FilterSpec f;
    expect_keys(j, where, {"type", "cutoff", "num", "den"});
    const std::string type = j.value("type", "");
    if (type == "unity") {
        f.kind = FilterSpec::Kind::unity;
    } else if (type == "lowpass1") {
        f.kind = FilterSpec::Kind::lowpass1;
        if (!j.contains("cutoff") || !j["cutoff"].is_number())
            bad(where + ".cutoff", "required number");
        f.cutoff = j["cutoff"].get<double>();
        if (!(f.cutoff > 0.0)) bad(where + ".cutoff", "must be positive");
    } else if (type == "rational") {
        f.kind = FilterSpec::Kind::rational;
        if (!j.contains("num") || !j.contains("den"))
            bad(where, "rational filters need num and den");
        f.num = number_list(j["num"], where + ".num");
        f.den = number_list(j["den"], where + ".den");
    } else {
        bad(where + ".type", "expected 'unity', 'lowpass1', or 'rational'");
    }
    return f;
}

ordered_json plant_json(const PlantSpec& p) {
    ordered_json j;
    if (p.kind == PlantSpec::Kind::gain_zero_integrator) {
        j["type"] = "gain_zero_integrator";
        j["k"] = p.k;
    } else {
        j["type"] = "rational";
        j["num"] = p.num;
        j["den"] = p.den;
    }
    return j;
}

ordered_json filter_json(const FilterSpec& f) {
    ordered_json j;
    switch (f.kind) {
        case FilterSpec::Kind::unity: j["type"] = "unity"; break;
        case FilterSpec::Kind::lowpass1:
            j["type"] = "lowpass1";
            j["cutoff"] = f.cutoff;
            break;
        case FilterSpec::Kind::rational:
            j["type"] = "rational";
            j["num"] = f.num;
            j["den"] = f.den;
            break;
    }
    return j;
}

} // namespace

RunConfig RunConfig::parse(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        raise(Errc::usage_error, std::string("config is not valid JSON: ") + e.what());
    }
    expect_keys(j, "(root)",
                {"version", "plant", "channel", "epsilon", "sweep", "oracle", "output"});
    RunConfig c;
    if (!j.contains("version") || !j["version"].is_number_integer())
        bad("version", "required integer");
    c.version = j["version"].get<int>();
    if (c.version != 1) bad("version", "only version 1 is understood");

    if (!j.contains("plant")) bad("plant", "required");
    c.plant = parse_plant(j["plant"]);

    if (!j.contains("channel")) bad("channel", "required");
    const auto& ch = j["channel"];
    expect_keys(ch, "channel", {"f", "h", "sigma", "gamma"});
    c.f = ch.contains("f") ? parse_filter(ch["f"], "channel.f") : FilterSpec{};
    c.h = ch.contains("h") ? parse_filter(ch["h"], "channel.h") : FilterSpec{};
    if (!ch.contains("sigma")) bad("channel.sigma", "required");
    c.sigma = number_list(ch["sigma"], "channel.sigma");
    if (!ch.contains("gamma")) bad("channel.gamma", "required");
    c.gamma = number_list(ch["gamma"], "channel.gamma");

    if (!j.contains("epsilon") || !j["epsilon"].is_number()) bad("epsilon", "required number");
    c.epsilon = j["epsilon"].get<double>();

    c.sweeps.clear();
    if (j.contains("sweep")) {
        if (!j["sweep"].is_array()) bad("sweep", "expected an array");
        for (size_t i = 0; i < j["sweep"].size(); ++i) {
            const auto& s = j["sweep"][i];
            const std::string where = "sweep[" + std::to_string(i) + "]";
            expect_keys(s, where, {"param", "grid"});
            SweepSpec sp;
            if (!s.contains("param") || !s["param"].is_string()) bad(where + ".param", "required");
            sp.param = s["param"].get<std::string>();
            sp.grid = number_list(s.contains("grid") ? s["grid"] : ordered_json(), where + ".grid");
            c.sweeps.push_back(sp);
        }
    }

    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        expect_keys(o, "oracle", {"enable", "m", "lambda", "monte_carlo"});
        c.oracle.enable = o.value("enable", false);
        c.oracle.m = o.value("m", 20);
        c.oracle.lambda = o.value("lambda", 1.0);
        if (o.contains("monte_carlo")) {
            const auto& mc = o["monte_carlo"];
            expect_keys(mc, "oracle.monte_carlo", {"enable", "runs", "horizon", "dt", "seed"});
            c.oracle.mc_enable = mc.value("enable", false);
            c.oracle.mc_runs = mc.value("runs", 200);
            c.oracle.mc_horizon = mc.value("horizon", 200.0);
            c.oracle.mc_dt = mc.value("dt", 1e-3);
            c.oracle.mc_seed = mc.value("seed", uint64_t(12345));
        }
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        expect_keys(o, "output", {"csv", "gnuplot"});
        c.output.csv = o.value("csv", std::string("results.csv"));
        c.output.gnuplot = o.value("gnuplot", false);
    }
    c.validate();
    return c;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::usage_error, "cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string RunConfig::serialize() const {
    ordered_json j;
    j["version"] = version;
    j["plant"] = plant_json(plant);
    j["channel"]["f"] = filter_json(f);
    j["channel"]["h"] = filter_json(h);
    j["channel"]["sigma"] = sigma;
    j["channel"]["gamma"] = gamma;
    j["epsilon"] = epsilon;
    j["sweep"] = ordered_json::array();
    for (const auto& s : sweeps) {
        ordered_json sj;
        sj["param"] = s.param;
        sj["grid"] = s.grid;
        j["sweep"].push_back(sj);
    }
    j["oracle"]["enable"] = oracle.enable;
    j["oracle"]["m"] = oracle.m;
    j["oracle"]["lambda"] = oracle.lambda;
    j["oracle"]["monte_carlo"]["enable"] = oracle.mc_enable;
    j["oracle"]["monte_carlo"]["runs"] = oracle.mc_runs;
    j["oracle"]["monte_carlo"]["horizon"] = oracle.mc_horizon;
    j["oracle"]["monte_carlo"]["dt"] = oracle.mc_dt;
    j["oracle"]["monte_carlo"]["seed"] = oracle.mc_seed;
    j["output"]["csv"] = output.csv;
    j["output"]["gnuplot"] = output.gnuplot;
    return j.dump(2) + "\n";
}

void RunConfig::validate() const {
    static const std::set<std::string> params{"k", "epsilon", "f", "h", "sigma", "gamma"};
    if (sweeps.size() > 2) bad("sweep", "at most two swept parameters");
    std::set<std::string> seen;
    for (const auto& s : sweeps) {
        if (!params.count(s.param))
            bad("sweep.param", "'" + s.param + "' is not a sweepable parameter");
        if (seen.count(s.param)) bad("sweep.param", "'" + s.param + "' swept twice");
        seen.insert(s.param);
        if (s.grid.size() < 1) bad("sweep.grid", "empty grid");
        const bool inc = s.grid.size() < 2 || s.grid[1] > s.grid[0];
        for (size_t i = 1; i < s.grid.size(); ++i) {
            if (!std::isfinite(s.grid[i])) bad("sweep.grid", "non-finite grid value");
            if (inc ? (s.grid[i] <= s.grid[i - 1]) : (s.grid[i] >= s.grid[i - 1]))
                bad("sweep.grid", "grid must be strictly monotone");
        }
        if (s.param == "k" && plant.kind != PlantSpec::Kind::gain_zero_integrator)
            bad("sweep.param", "'k' requires the gain_zero_integrator plant template");
        if (s.param == "f" && f.kind != FilterSpec::Kind::lowpass1)
            bad("sweep.param", "'f' requires a lowpass1 bandwidth block");
        if (s.param == "h" && h.kind != FilterSpec::Kind::lowpass1)
            bad("sweep.param", "'h' requires a lowpass1 coloring block");
    }
    if (sigma.size() != gamma.size()) bad("channel", "sigma and gamma sizes differ");
    for (double v : sigma)
        if (!(v > 0.0)) bad("channel.sigma", "entries must be positive");
    for (double v : gamma)
        if (v < 0.0) bad("channel.gamma", "entries must be nonnegative");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) bad("epsilon", "must lie in [0, 1]");
    if (oracle.enable) {
        if (oracle.m < 1) bad("oracle.m", "must be >= 1");
        if (!(oracle.lambda > 0.0)) bad("oracle.lambda", "must be positive");
    }
    if (oracle.mc_enable && !oracle.enable)
        bad("oracle.monte_carlo.enable", "needs oracle.enable");
}

} // namespace perflim
