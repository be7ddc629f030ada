#include "qbd/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "qbd/core/constants.hpp"

namespace qbd::cli {

namespace {

std::string join_issues(const std::vector<std::string>& list) {
    std::string s = "config validation failed:";
    for (const auto& m : list) s += "\n  - " + m;
    return s;
}

class Reader {
public:
    Reader(const json& doc, std::vector<std::string>& issues, std::string prefix = "")
        : doc_(doc), issues_(issues), prefix_(std::move(prefix)) {
        if (!doc.is_object()) issues_.push_back(prefix_.empty() ? "root: expected an object"
                                                                : prefix_ + ": expected an object");
    }

    ~Reader() {
        if (!doc_.is_object()) return;
        for (auto it = doc_.begin(); it != doc_.end(); ++it) {
            if (!seen_.count(it.key()))
                issues_.push_back(path(it.key()) + ": unknown key");
        }
    }

    bool has(const std::string& key) {
        return doc_.is_object() && doc_.contains(key);
    }

    void mark(const std::string& key) { seen_.insert(key); }

    template <typename T>
    void get(const std::string& key, T& out) {
        if (!has(key)) return;
        seen_.insert(key);
        try {
            out = doc_.at(key).get<T>();
        } catch (const std::exception&) {
            issues_.push_back(path(key) + ": wrong type");
        }
    }

    json sub(const std::string& key) {
        seen_.insert(key);
        return doc_.is_object() && doc_.contains(key) ? doc_.at(key) : json::object();
    }

    std::string path(const std::string& key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

private:
    const json& doc_;
    std::vector<std::string>& issues_;
    std::string prefix_;
    std::set<std::string> seen_;
};

} // namespace

ConfigError::ConfigError(std::vector<std::string> list)
    : std::runtime_error(join_issues(list)), issues(std::move(list)) {}

RunConfig parse_config(const json& doc) {
    std::vector<std::string> issues;
    RunConfig cfg;
    {
        Reader root(doc, issues);
        {
            const json pj = root.sub("params");
            Reader r(pj, issues, "params");
            r.get("m", cfg.params.m);
            r.get("gamma", cfg.params.gamma);
            r.get("tau", cfg.params.tau);
            r.get("T", cfg.params.T);
            r.get("hbar", cfg.params.hbar);
            r.get("d", cfg.params.d);
        }
        root.get("units", cfg.units);
        {
            const json tj = root.sub("time_grid");
            Reader r(tj, issues, "time_grid");
            r.get("t0", cfg.time_grid.t0);
            r.get("dt", cfg.time_grid.dt);
            r.get("n", cfg.time_grid.n);
        }
        {
            const json sj = root.sub("space_grid");
            Reader r(sj, issues, "space_grid");
            r.get("length", cfg.space_grid.length);
            r.get("points", cfg.space_grid.points);
            r.get("periodic", cfg.space_grid.periodic);
        }
        {
            const json pj = root.sub("potential");
            Reader r(pj, issues, "potential");
            r.get("type", cfg.potential_type);
            r.get("k", cfg.harmonic_k);
            r.get("center", cfg.harmonic_center);
            r.get("a", cfg.dw_a);
            r.get("b", cfg.dw_b);
            r.get("file", cfg.tabulated_file);
            r.get("order", cfg.tabulated_order);
        }
        {
            const json nj = root.sub("noise");
            Reader r(nj, issues, "noise");
            if (r.has("cutoff")) {
                const json c = nj.at("cutoff");
                if (c.is_string() && c.get<std::string>() == "auto") {
                    cfg.cutoff_auto = true;
                    r.mark("cutoff");
                } else {
                    cfg.cutoff_auto = false;
                    r.get("cutoff", cfg.cutoff);
                }
            }
            r.get("realizations", cfg.realizations);
            r.get("bands", cfg.bands);
        }
        {
            const json lj = root.sub("langevin");
            Reader r(lj, issues, "langevin");
            r.get("burn_in", cfg.burn_in);
            r.get("hist_bins", cfg.hist_bins);
            r.get("hist_halfwidth", cfg.hist_halfwidth);
        }
        {
            const json pj = root.sub("pde");
            Reader r(pj, issues, "pde");
            r.get("dt", cfg.pde_dt);
            r.get("t_end", cfg.t_end);
            r.get("p_max", cfg.p_max);
            r.get("np", cfg.np);
            r.get("quantum_correction", cfg.quantum_correction);
            r.get("radiation_correction", cfg.radiation_correction);
            r.get("save_every", cfg.save_every);
            r.get("init_temp_factor", cfg.init_temp_factor);
        }
        {
            const json sj = root.sub("sweep");
            Reader r(sj, issues, "sweep");
            r.get("key", cfg.sweep_key);
            r.get("start", cfg.sweep_start);
            r.get("stop", cfg.sweep_stop);
            r.get("steps", cfg.sweep_steps);
        }
        root.get("seed", cfg.seed);
        root.get("threads", cfg.threads);
        root.get("out", cfg.out_dir);
    }

    if (cfg.units != "reduced" && cfg.units != "si")
        issues.push_back("units: must be \"reduced\" or \"si\"");
    if (cfg.units == "si") {
        // temperature arrives in kelvin; stored internally as thermal energy
        cfg.params.T *= constants().kB_SI;
        cfg.units = "reduced";
    }
    try {
        cfg.params.validate();
    } catch (const std::exception& e) {
        issues.push_back(e.what());
    }
    try {
        cfg.time_grid.validate();
    } catch (const std::exception& e) {
        issues.push_back(std::string("time_grid: ") + e.what());
    }
    try {
        cfg.space_grid.validate();
    } catch (const std::exception& e) {
        issues.push_back(std::string("space_grid: ") + e.what());
    }
    static const std::set<std::string> kinds{"free", "harmonic", "double_well", "tabulated"};
    if (!kinds.count(cfg.potential_type))
        issues.push_back("potential.type: must be free|harmonic|double_well|tabulated");
    if (cfg.potential_type == "tabulated" && cfg.tabulated_file.empty())
        issues.push_back("potential.file: required for tabulated potentials");
    if (cfg.tabulated_order != 1 && cfg.tabulated_order != 3)
        issues.push_back("potential.order: must be 1 or 3");
    if (!cfg.cutoff_auto && !(cfg.cutoff >= 0.0))
        issues.push_back("noise.cutoff: must be >= 0 or \"auto\"");
    if (cfg.realizations < 1) issues.push_back("noise.realizations: must be >= 1");
    if (cfg.bands < 1) issues.push_back("noise.bands: must be >= 1");
    if (cfg.np < 5 || cfg.np % 2 == 0) issues.push_back("pde.np: must be odd and >= 5");
    if (!(cfg.t_end > 0.0)) issues.push_back("pde.t_end: must be > 0");
    if (!(cfg.init_temp_factor > 0.0)) issues.push_back("pde.init_temp_factor: must be > 0");
    if (cfg.threads < 1) issues.push_back("threads: must be >= 1");
    if (!cfg.sweep_key.empty()) {
        if (cfg.sweep_key != "theta" && cfg.sweep_key != "omega")
            issues.push_back("sweep.key: must be theta or omega");
        if (!(cfg.sweep_start > 0.0) || !(cfg.sweep_stop > cfg.sweep_start))
            issues.push_back("sweep: need 0 < start < stop");
        if (cfg.sweep_steps < 2) issues.push_back("sweep.steps: must be >= 2");
    }

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

json to_json(const RunConfig& cfg) {
    json doc;
    doc["params"] = {{"m", cfg.params.m},   {"gamma", cfg.params.gamma},
                     {"tau", cfg.params.tau}, {"T", cfg.params.T},
                     {"hbar", cfg.params.hbar}, {"d", cfg.params.d}};
    doc["units"] = cfg.units;
    doc["time_grid"] = {{"t0", cfg.time_grid.t0}, {"dt", cfg.time_grid.dt}, {"n", cfg.time_grid.n}};
    doc["space_grid"] = {{"length", cfg.space_grid.length},
                         {"points", cfg.space_grid.points},
                         {"periodic", cfg.space_grid.periodic}};
    json pot{{"type", cfg.potential_type}};
    if (cfg.potential_type == "harmonic") {
        pot["k"] = cfg.harmonic_k;
        pot["center"] = cfg.harmonic_center;
    } else if (cfg.potential_type == "double_well") {
        pot["a"] = cfg.dw_a;
        pot["b"] = cfg.dw_b;
    } else if (cfg.potential_type == "tabulated") {
        pot["file"] = cfg.tabulated_file;
        pot["order"] = cfg.tabulated_order;
    }
    doc["potential"] = pot;
    json noise;
    if (cfg.cutoff_auto)
        noise["cutoff"] = "auto";
    else
        noise["cutoff"] = cfg.cutoff;
    noise["realizations"] = cfg.realizations;
    noise["bands"] = cfg.bands;
    doc["noise"] = noise;
    doc["langevin"] = {{"burn_in", cfg.burn_in},
                       {"hist_bins", cfg.hist_bins},
                       {"hist_halfwidth", cfg.hist_halfwidth}};
    doc["pde"] = {{"dt", cfg.pde_dt},
                  {"t_end", cfg.t_end},
                  {"p_max", cfg.p_max},
                  {"np", cfg.np},
                  {"quantum_correction", cfg.quantum_correction},
                  {"radiation_correction", cfg.radiation_correction},
                  {"save_every", cfg.save_every},
                  {"init_temp_factor", cfg.init_temp_factor}};
    if (!cfg.sweep_key.empty())
        doc["sweep"] = {{"key", cfg.sweep_key},
                        {"start", cfg.sweep_start},
                        {"stop", cfg.sweep_stop},
                        {"steps", cfg.sweep_steps}};
    doc["seed"] = cfg.seed;
    doc["threads"] = cfg.threads;
    doc["out"] = cfg.out_dir;
    return doc;
}

langevin::Potential build_potential(const RunConfig& cfg) {
    if (cfg.potential_type == "harmonic") {
        langevin::Harmonic h;
        h.k = cfg.harmonic_k;
        h.center = {cfg.harmonic_center, cfg.harmonic_center, cfg.harmonic_center};
        return h;
    }
    if (cfg.potential_type == "double_well") return langevin::DoubleWell{cfg.dw_a, cfg.dw_b};
    if (cfg.potential_type == "tabulated") {
        std::ifstream in(cfg.tabulated_file);
        if (!in) throw ConfigError({"potential.file: cannot open " + cfg.tabulated_file});
        langevin::Tabulated t;
        t.order = cfg.tabulated_order;
        std::vector<double> xs, us;
        double x, u;
        while (in >> x >> u) {
            xs.push_back(x);
            us.push_back(u);
        }
        if (xs.size() < 4) throw ConfigError({"potential.file: need at least 4 samples"});
        const double h0 = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (std::fabs(xs[i] - xs[i - 1] - h0) > 1e-9 * std::fabs(h0))
                throw ConfigError({"potential.file: samples must be uniformly spaced"});
        t.grid = SpaceGrid{xs.back() - xs.front(), xs.size(), false};
        t.values = std::move(us);
        return t;
    }
    return langevin::Free{};
}

} // namespace qbd::cli
