#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "weber/config.hpp"
#include "weber/dynamics.hpp"

namespace weber {

extern const char* const version_string;

// Numbers go through format_double, so every value reads back bit for bit.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);
    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(std::uint64_t v);
    void end_row();

private:
    std::ostream& out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

void write_trajectories(std::ostream& out, const EnsembleResult& result, const PhysicalSetup& setup,
                        const BeamSpec& spec);
// Ensemble means of K_x and K_yz versus time.
void write_energy_curve(std::ostream& out, const EnsembleResult& result);
void write_um_curve(std::ostream& out, const std::vector<std::pair<double, double>>& curve);

// Resolved config, seed, version and calibration, attached to every output.
nlohmann::json run_metadata(const RunConfig& config, double amplitude_scale, const std::string& command);

// Per-class counts, theta_d quantiles, energy statistics and diagnostics.
nlohmann::json ensemble_summary(const EnsembleResult& result, const ArrivalMap& map);

// Linear-interpolated quantile of an unsorted sample; q in [0, 1]. NaN if empty.
double quantile(std::vector<double> values, double q);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace weber
