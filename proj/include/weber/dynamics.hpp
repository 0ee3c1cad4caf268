#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "weber/beam.hpp"
#include "weber/force.hpp"
#include "weber/units.hpp"

namespace weber {

struct AtomState {
    Vec3 position{};  // lambda
    Vec3 velocity{};  // lambda Gamma
    double time = 0.0;
};

struct CloudConfig {
    int n_atoms = 1000;
    double x0 = 150.0;
    double y_min = -150.0, y_max = 150.0;
    double z_min = -10.0, z_max = 10.0;
    double speed_x = -0.6e-3;     // lambda Gamma
    double perp_ratio_cap = 0.1;  // v_perp <= cap |v_x|
    double a_atomic_cap = 150.0;  // |L_z P_y| at release, units hbar^2 k_perp
    double temperature_equiv = 1.5;  // microkelvin, reporting only
    std::uint64_t seed = 1729;

    void validate() const;
};

// Counter-based generator: output j of atom i is a pure function of
// (seed, i, j), so sampling does not depend on scheduling.
class AtomStream {
public:
    AtomStream(std::uint64_t seed, std::uint64_t atom) : key_(mix(seed ^ mix(atom + 0x9e3779b97f4a7c15ULL))) {}
    std::uint64_t next() { return mix(key_ + 0xd1b54a32d192ed03ULL * ++counter_); }
    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Release states for the cloud; atom i depends only on (seed, i).
std::vector<AtomState> sample_cloud(const CloudConfig& config, const BeamSpec& spec, const PhysicalSetup& setup);
AtomState sample_atom(const CloudConfig& config, const BeamSpec& spec, const PhysicalSetup& setup, std::uint64_t index);

// L_z P_y per unit mass^2, in units of hbar^2 k_perp.
double a_atomic(const AtomState& s, double hbar_natural, double kperp);

// Optical force plus gravity along -x. The field pointer must outlive the context.
struct DynamicsContext {
    const ScalarField* field = nullptr;
    BeamSpec spec;
    ForceModel model;
    double gravity = 0.0;  // lambda Gamma^2
    double x_window_min = -std::numeric_limits<double>::infinity();
    double x_window_max = std::numeric_limits<double>::infinity();
    bool optical = true;

    static DynamicsContext make(const ScalarField& field, const BeamSpec& calibrated, const PhysicalSetup& setup,
                                DipoleBranch branch = DipoleBranch::plus,
                                ForceDenominator denominator = ForceDenominator::as_printed);
};

struct Acceleration {
    Vec3 a{};
    bool sentinel = false;
};

Acceleration acceleration(const AtomState& state, const DynamicsContext& ctx);

struct SimParams {
    double t_max = 2.1e5;   // 1/Gamma
    double tol = 1e-8;
    double x_exit = -150.0;  // lambda
    double cadence = 500.0;  // output interval, 1/Gamma
    double initial_step = 1.0;
};

enum class TrajectoryStatus { ok, step_underflow, non_finite, invalid };
std::string_view to_string(TrajectoryStatus s);

struct TrajectoryRecord {
    std::vector<AtomState> samples;  // initial, every cadence, final
    TrajectoryStatus status = TrajectoryStatus::ok;
    long accepted_steps = 0;
    long rejected_steps = 0;
    long force_evaluations = 0;
    long sentinel_evaluations = 0;
    bool exited = false;  // stopped at x_exit rather than t_max
};

// Dormand-Prince 5(4) with PI step-size control and cubic Hermite dense output.
// Throws std::invalid_argument if tol is outside [1e-12, 1e-4] or t_max <= 0.
TrajectoryRecord integrate(const AtomState& initial, const SimParams& params, const DynamicsContext& ctx);

struct ObservableSeries {
    std::vector<double> t, theta_d, a_atomic, kx_uK, kyz_uK;
};

// theta_d = atan2(y - y0, |x - x0|): deviation of the displacement from the
// release point relative to the fall direction; 0 at release.
ObservableSeries observables(const TrajectoryRecord& record, const PhysicalSetup& setup, const BeamSpec& spec);

enum class Outcome { dark_deflected, bright_strong, focused_channel, weak, failed };
std::string_view to_string(Outcome o);

struct ClassifyParams {
    double dark_theta = 0.05;        // rad
    double bright_halfwidth = 2.0;   // lambda
    double bright_fraction = 0.5;    // of the brightest point on the arrival line
    double focus_min_shrink = 2.0;   // lambda
};

// Geometry of the arrival line x = x0 used by the outcome taxonomy.
struct ArrivalMap {
    double u_m = 0.0;
    double dark_limit = 0.0;         // 2 u_M^2
    std::vector<double> bright_y;    // local intensity maxima on x = x0
};

ArrivalMap arrival_map(const ScalarField& field, double u_m, double x0, double y_min, double y_max,
                       const ClassifyParams& params, double dy = 0.05);

Outcome classify(const TrajectoryRecord& record, const ObservableSeries& obs, const ArrivalMap& map,
                 const ClassifyParams& params);

struct AtomSummary {
    std::uint64_t id = 0;
    double arrival_y = 0.0;
    double final_theta = 0.0;
    double max_abs_theta = 0.0;
    double initial_a = 0.0, final_a = 0.0;
    double final_kx = 0.0, final_kyz = 0.0;
    double max_abs_z = 0.0;
    double y_at_crossing = std::numeric_limits<double>::quiet_NaN();  // y when x first < 0
    double time_peak_transverse_accel = std::numeric_limits<double>::quiet_NaN();
    Outcome outcome = Outcome::weak;
};

struct EnsembleResult {
    std::vector<TrajectoryRecord> records;
    std::vector<AtomSummary> atoms;
    // Ensemble means at t = k * cadence, over atoms still in flight.
    std::vector<double> curve_t, curve_kx, curve_kyz;
    long total_evaluations = 0;
    long sentinel_evaluations = 0;
    int failed = 0;
    double max_abs_z = 0.0;

    int count(Outcome o) const;
};

// Trajectories run on `threads` workers; results are identical for any count.
EnsembleResult run_ensemble(const std::vector<AtomState>& cloud, const DynamicsContext& ctx, const SimParams& params,
                            const PhysicalSetup& setup, const ArrivalMap& map, const ClassifyParams& classify_params,
                            int threads = 1);

}  // namespace weber
