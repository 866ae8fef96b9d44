#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynmap/errors.hpp"
#include "dynmap/harness.hpp"
#include "dynmap/io.hpp"

namespace fs = std::filesystem;
using namespace dynmap;

namespace {

struct Common {
    std::string config;
    std::string preset;
    std::string out;
    std::string tau_c;
    std::optional<double> t_ref;
    std::optional<std::size_t> workers;
    std::string maps;
    bool dump_eta = false;
};

void add_common(CLI::App* sub, Common& c, bool accepts_maps) {
    auto* cfg = sub->add_option("--config", c.config, "INI model file");
    auto* preset = sub->add_option("--preset", c.preset, "built-in model instead of a config file");
    cfg->excludes(preset);
    sub->add_option("--out", c.out, "output directory (default: config value or .)");
    sub->add_option("--tau-c", c.tau_c, "comma-separated cutoff times");
    sub->add_option("--t-ref", c.t_ref, "reference evaluation time");
    sub->add_option("--workers", c.workers, "parallel tau_c jobs")->check(CLI::PositiveNumber);
    sub->add_flag("--dump-eta", c.dump_eta, "write influence coefficients to eta.csv");
    if (accepts_maps) sub->add_option("--maps", c.maps, "reuse a DMAP file instead of propagating");
}

SweepConfig resolve(const Common& c) {
    SweepConfig cfg;
    if (!c.config.empty()) cfg = load_config(c.config);
    else if (!c.preset.empty()) cfg = preset_config(c.preset);
    else throw ConfigError("either --config or --preset is required");
    if (!c.out.empty()) cfg.output_dir = c.out;
    if (!c.tau_c.empty()) {
        cfg.tau_c.clear();
        std::stringstream ss(c.tau_c);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                cfg.tau_c.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("cannot parse tau_c entry '" + item + "'");
            }
        }
    }
    if (c.t_ref) cfg.t_ref = *c.t_ref;
    if (c.workers) cfg.workers = *c.workers;
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const SweepConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output_dir);
    std::ofstream out(cfg.output_dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + (cfg.output_dir / name).string());
    return out;
}

void maybe_dump_eta(const Common& c, const SweepConfig& cfg, std::size_t horizon) {
    if (!c.dump_eta) return;
    if (cfg.model.propagator != PropagatorKind::quapi) {
        std::cerr << "warning: --dump-eta ignored for propagators without influence coefficients\n";
        return;
    }
    auto out = open_out(cfg, "eta.csv");
    write_eta_csv(out, model_eta(cfg, horizon));
}

DynamicalMapSeries short_maps(const Common& c, const SweepConfig& cfg) {
    if (c.maps.empty()) return generate_maps(cfg, cfg.n_short);
    DynamicalMapSeries series = io::read_dmap(c.maps);
    if (std::abs(series.dt() - cfg.dt) > 1e-12 * cfg.dt) throw ConfigError("DMAP time step differs from config dt");
    return series;
}

std::vector<ObservablePoint> observe(const std::vector<Matrix>& states, const SweepConfig& cfg) {
    return observable_series(states, cfg.observable, cfg.dt);
}

int cmd_generate(const Common& c) {
    const SweepConfig cfg = resolve(c);
    const auto maps = generate_maps(cfg, cfg.n_short);
    fs::create_directories(cfg.output_dir);
    io::write_dmap(cfg.output_dir / "maps.dmap", maps);
    maybe_dump_eta(c, cfg, cfg.n_short);
    return 0;
}

int cmd_ttm(const Common& c) {
    const SweepConfig cfg = resolve(c);
    const auto maps = short_maps(c, cfg);
    const auto tensors = decompose(maps);
    fs::create_directories(cfg.output_dir);
    io::write_container(cfg.output_dir / "tensors.tten",
                        io::MapContainer{std::string(io::kMagicTensors), tensors.dt, tensors.t0, tensors.tensors});
    {
        auto out = open_out(cfg, "tensor_norms.csv");
        write_profile_csv(out, tensor_norm_profile(tensors), "norm");
    }
    std::vector<std::vector<ObservablePoint>> series;
    for (double tau : cfg.tau_c) {
        series.push_back(observe(extrapolate(tensors, cfg.initial_state, cfg.steps_for(tau), cfg.n_ref()), cfg));
    }
    auto out = open_out(cfg, "ttm_extrapolation.csv");
    write_extrapolation_csv(out, cfg.tau_c, series);
    return 0;
}

int cmd_tl(const Common& c) {
    const SweepConfig cfg = resolve(c);
    const auto maps = short_maps(c, cfg);
    const auto local = local_maps(maps, cfg.singular_threshold);
    fs::create_directories(cfg.output_dir);
    io::write_container(cfg.output_dir / "local_maps.lmap",
                        io::MapContainer{std::string(io::kMagicLocalMaps), local.dt, local.t0, local.maps});
    {
        auto out = open_out(cfg, "flags.csv");
        write_flags_csv(out, local);
    }
    {
        auto out = open_out(cfg, "stationarity.csv");
        write_profile_csv(out, stationarity_profile(local), "stationarity");
    }
    std::vector<double> taus;
    std::vector<std::vector<ObservablePoint>> series;
    for (double tau : cfg.tau_c) {
        try {
            series.push_back(
                observe(extrapolate_tl(local, cfg.initial_state, cfg.steps_for(tau), cfg.n_ref(), cfg.tl_options), cfg));
            taus.push_back(tau);
        } catch (const StationaryMapFlagged& e) {
            std::cerr << "warning: tau_c = " << io::format_double(tau) << " skipped: " << e.what() << '\n';
        }
    }
    auto out = open_out(cfg, "tl_extrapolation.csv");
    write_extrapolation_csv(out, taus, series);
    return 0;
}

int cmd_rates(const Common& c) {
    const SweepConfig cfg = resolve(c);
    const auto maps = short_maps(c, cfg);
    const auto local = local_maps(maps, cfg.singular_threshold);
    auto out = open_out(cfg, "rates.csv");
    write_rates_csv(out, rate_series(local, cfg.settings), maps.dim());
    return 0;
}

int cmd_singvals(const Common& c) {
    const SweepConfig cfg = resolve(c);
    const auto maps = short_maps(c, cfg);
    auto out = open_out(cfg, "singular_values.csv");
    write_singular_values_csv(out, maps, cfg.singular_threshold);
    return 0;
}

int cmd_compare(const Common& c) {
    const SweepConfig cfg = resolve(c);
    const CompareResult result = run_compare(cfg);
    write_compare_outputs(cfg, result);
    maybe_dump_eta(c, cfg, cfg.n_ref());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extrapolation of non-Markovian dynamical maps: transfer tensors vs time-local maps"};
    app.require_subcommand(1);

    Common common;
    struct Entry {
        const char* name;
        const char* help;
        bool maps;
        int (*run)(const Common&);
    };
    const std::vector<Entry> entries = {
        {"generate", "propagate short-time maps and write maps.dmap", false, cmd_generate},
        {"ttm", "transfer-tensor decomposition and extrapolation", true, cmd_ttm},
        {"tl", "time-local maps and extrapolation", true, cmd_tl},
        {"rates", "canonical Lindblad rates of the time-local maps", true, cmd_rates},
        {"singvals", "singular values of the dynamical maps", true, cmd_singvals},
        {"compare", "full tau_c sweep with both extrapolation methods", false, cmd_compare},
    };
    std::vector<CLI::App*> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, common, e.maps);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (subs[i]->parsed()) return entries[i].run(common);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
