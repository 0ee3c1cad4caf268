#include "weber/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#ifndef WEBER_VERSION
#define WEBER_VERSION "unknown"
#endif

namespace weber {

const char* const version_string = WEBER_VERSION;

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), columns_(header.size())
{
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::operator<<(double v)
{
    out_ << (filled_++ ? "," : "") << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::operator<<(std::uint64_t v)
{
    out_ << (filled_++ ? "," : "") << v;
    return *this;
}

void CsvWriter::end_row()
{
    if (filled_ != columns_) throw std::logic_error("CsvWriter: row has the wrong number of columns");
    out_ << '\n';
    filled_ = 0;
}

void write_trajectories(std::ostream& out, const EnsembleResult& result, const PhysicalSetup& setup,
                        const BeamSpec& spec)
{
    CsvWriter csv(out, {"atom_id", "t", "x", "y", "z", "vx", "vy", "vz", "theta_d", "A_atomic", "Kx_uK", "Kyz_uK"});
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const TrajectoryRecord& rec = result.records[i];
        ObservableSeries obs = observables(rec, setup, spec);
        for (std::size_t k = 0; k < rec.samples.size(); ++k) {
            const AtomState& s = rec.samples[k];
            csv << static_cast<std::uint64_t>(i) << s.time << s.position[0] << s.position[1] << s.position[2]
                << s.velocity[0] << s.velocity[1] << s.velocity[2] << obs.theta_d[k] << obs.a_atomic[k]
                << obs.kx_uK[k] << obs.kyz_uK[k];
            csv.end_row();
        }
    }
}

void write_energy_curve(std::ostream& out, const EnsembleResult& result)
{
    CsvWriter csv(out, {"t", "Kx_uK", "Kyz_uK"});
    for (std::size_t j = 0; j < result.curve_t.size(); ++j) {
        csv << result.curve_t[j] << result.curve_kx[j] << result.curve_kyz[j];
        csv.end_row();
    }
}

void write_um_curve(std::ostream& out, const std::vector<std::pair<double, double>>& curve)
{
    CsvWriter csv(out, {"a", "u_M"});
    for (auto [a, um] : curve) {
        csv << a << um;
        csv.end_row();
    }
}

double quantile(std::vector<double> values, double q)
{
    if (values.empty()) return std::nan("");
    std::sort(values.begin(), values.end());
    double pos = q * (values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

nlohmann::json run_metadata(const RunConfig& config, double amplitude_scale, const std::string& command)
{
    nlohmann::json j;
    j["command"] = command;
    j["version"] = version_string;
    j["seed"] = config.cloud.seed;
    j["amplitude_scale_V_per_m"] = amplitude_scale;
    j["irradiance_convention"] = "peak of c eps0 |E|^2 / 2 over the calibration grid";
    j["config"] = emit_config(config);
    j["natural_units"] = {
        {"length_m", config.setup.length_unit()},
        {"time_s", config.setup.time_unit()},
        {"hbar", config.setup.hbar_natural()},
        {"gravity", config.setup.gravity_natural()},
        {"detuning", detuning_natural(config.setup)},
    };
    j["warnings"] = config.setup.warnings();
    return j;
}

namespace {

nlohmann::json stats(const std::vector<double>& v)
{
    if (v.empty()) return {{"n", 0}};
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return {{"n", v.size()},
            {"mean", mean},
            {"std", v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0},
            {"min", *std::min_element(v.begin(), v.end())},
            {"max", *std::max_element(v.begin(), v.end())}};
}

nlohmann::json quantiles(const std::vector<double>& v)
{
    nlohmann::json j = nlohmann::json::object();
    for (double q : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) j[format_double(q)] = v.empty() ? nullptr : nlohmann::json(quantile(v, q));
    return j;
}

}  // namespace

nlohmann::json ensemble_summary(const EnsembleResult& result, const ArrivalMap& map)
{
    nlohmann::json j;
    nlohmann::json counts = nlohmann::json::object();
    for (Outcome o : {Outcome::dark_deflected, Outcome::bright_strong, Outcome::focused_channel, Outcome::weak,
                      Outcome::failed})
        counts[std::string(to_string(o))] = result.count(o);
    j["counts"] = counts;

    std::vector<double> final_abs, max_abs, dark_max, outer_final, kx, kyz_dark, kyz_other;
    for (const AtomSummary& a : result.atoms) {
        if (a.outcome == Outcome::failed) continue;
        final_abs.push_back(std::abs(a.final_theta));
        max_abs.push_back(a.max_abs_theta);
        double ay = std::abs(a.arrival_y);
        if (ay > 1.0 && ay < map.dark_limit) dark_max.push_back(a.max_abs_theta);
        if (ay > 80.0 && ay < 150.0) outer_final.push_back(std::abs(a.final_theta));
        kx.push_back(a.final_kx);
        (ay < map.dark_limit ? kyz_dark : kyz_other).push_back(a.final_kyz);
    }
    j["theta_d"] = {{"final_abs", quantiles(final_abs)},
                    {"max_abs", quantiles(max_abs)},
                    {"dark_zone_max_abs", quantiles(dark_max)},
                    {"outer_band_final_abs", quantiles(outer_final)}};
    j["energy_uK"] = {{"final_kx", stats(kx)}, {"final_kyz_dark", stats(kyz_dark)}, {"final_kyz_other", stats(kyz_other)}};
    j["geometry"] = {{"u_M", map.u_m}, {"dark_limit", map.dark_limit}, {"bright_y", map.bright_y}};

    long accepted = 0, rejected = 0, exited = 0;
    for (const TrajectoryRecord& r : result.records) {
        accepted += r.accepted_steps;
        rejected += r.rejected_steps;
        exited += r.exited ? 1 : 0;
    }
    j["diagnostics"] = {
        {"atoms", result.atoms.size()},
        {"failed", result.failed},
        {"exited", exited},
        {"accepted_steps", accepted},
        {"rejected_steps", rejected},
        {"force_evaluations", result.total_evaluations},
        {"sentinel_evaluations", result.sentinel_evaluations},
        {"sentinel_fraction",
         result.total_evaluations ? double(result.sentinel_evaluations) / result.total_evaluations : 0.0},
        {"max_abs_z_excursion", result.max_abs_z},
    };
    return j;
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace weber
