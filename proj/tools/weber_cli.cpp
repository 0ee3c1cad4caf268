// weber: field maps, u_M curves, atom ensembles and self-checks for vector
// Weber beams acting on two-level atoms.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weber/config.hpp"
#include "weber/io.hpp"
#include "weber/pipeline.hpp"

namespace fs = std::filesystem;
using namespace weber;

namespace {

enum Exit { ok = 0, usage = 1, validation = 2, numerical = 3 };

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    int threads = 0;
};

RunConfig resolve(const Common& c)
{
    RunConfig cfg = c.config_path.empty() ? parse_config("") : load_config(c.config_path);
    for (const auto& o : c.overrides) apply_override(cfg, o);
    if (c.seed_set) cfg.cloud.seed = c.seed;
    if (!c.out.empty()) cfg.output.directory = c.out;
    if (c.threads > 0) cfg.sim.threads = c.threads;
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name)
{
    fs::create_directories(cfg.output.directory);
    std::string path = (fs::path(cfg.output.directory) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
    return out;
}

void write_json(const RunConfig& cfg, const std::string& name, const nlohmann::json& j)
{
    open_out(cfg, name) << j.dump(2) << '\n';
}

int cmd_field_map(const RunConfig& cfg)
{
    PreparedBeam beam = prepare_beam(cfg);
    {
        auto out = open_out(cfg, "field_map.csv");
        write_field_map(out, cfg, beam);
    }
    auto meta = run_metadata(cfg, beam.spec.amplitude_scale, "field-map");
    meta["u_M"] = beam.u_m;
    write_json(cfg, "field_map.meta.json", meta);
    std::cout << "field map " << cfg.field_map.nx << "x" << cfg.field_map.ny << " -> " << cfg.output.directory
              << "/field_map.csv\n";
    return ok;
}

int cmd_um_curve(const RunConfig& cfg)
{
    auto curve = um_curve(cfg);
    {
        auto out = open_out(cfg, "um_curve.csv");
        write_um_curve(out, curve);
    }
    write_json(cfg, "um_curve.meta.json", run_metadata(cfg, 0.0, "um-curve"));
    std::cout << curve.size() << " points -> " << cfg.output.directory << "/um_curve.csv\n";
    return ok;
}

int cmd_simulate(const RunConfig& cfg)
{
    PreparedBeam beam = prepare_beam(cfg);
    SimulationOutput sim = simulate(cfg, beam);
    if (cfg.output.trajectories) {
        auto out = open_out(cfg, "trajectories.csv");
        write_trajectories(out, sim.ensemble, cfg.setup, beam.spec);
    }
    {
        auto out = open_out(cfg, "energy_curve.csv");
        write_energy_curve(out, sim.ensemble);
    }
    if (cfg.output.summary) {
        nlohmann::json j = run_metadata(cfg, beam.spec.amplitude_scale, "simulate");
        j["summary"] = ensemble_summary(sim.ensemble, sim.map);
        write_json(cfg, "summary.json", j);
    }
    const auto& e = sim.ensemble;
    std::cout << e.atoms.size() << " atoms: dark_deflected " << e.count(Outcome::dark_deflected) << ", bright_strong "
              << e.count(Outcome::bright_strong) << ", focused_channel " << e.count(Outcome::focused_channel)
              << ", weak " << e.count(Outcome::weak) << ", failed " << e.failed << "\n";
    return e.failed > 0 ? numerical : ok;
}

int cmd_validate(const RunConfig& cfg)
{
    auto checks = validate_run(cfg);
    nlohmann::json j = run_metadata(cfg, 0.0, "validate");
    bool all = true;
    for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        all = all && c.passed;
    }
    write_json(cfg, "validation.json", j);
    return all ? ok : validation;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Vector Weber beams and cold-atom deflection"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "Sectioned key-value config file")->check(CLI::ExistingFile);
        sub->add_option("--set", common.overrides, "Override, e.g. --set beam.irradiance=6");
        sub->add_option("--seed", common.seed, "Cloud seed")->each([&common](const std::string&) { common.seed_set = true; });
        sub->add_option("--out", common.out, "Output directory");
        sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    };
    auto* fm = app.add_subcommand("field-map", "Intensity and psi on a grid (CSV)");
    auto* um = app.add_subcommand("um-curve", "u_M as a function of the order a (CSV)");
    auto* sim = app.add_subcommand("simulate", "Atom cloud through the beam");
    auto* val = app.add_subcommand("validate", "Oracle and invariant checks");
    for (auto* s : {fm, um, sim, val}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    RunConfig cfg;
    try {
        cfg = resolve(common);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return usage;
    }
    for (const auto& w : cfg.setup.warnings()) std::cerr << "warning: " << w << "\n";

    try {
        if (fm->parsed()) return cmd_field_map(cfg);
        if (um->parsed()) return cmd_um_curve(cfg);
        if (sim->parsed()) return cmd_simulate(cfg);
        if (val->parsed()) return cmd_validate(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return usage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return usage;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return numerical;
    }
    return usage;
}
