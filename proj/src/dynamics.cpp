#include "weber/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace weber {

namespace {

using State6 = std::array<double, 6>;

State6 pack(const AtomState& s)
{
    return {s.position[0], s.position[1], s.position[2], s.velocity[0], s.velocity[1], s.velocity[2]};
}

AtomState unpack(const State6& y, double t)
{
    return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}, t};
}

bool all_finite(const State6& y)
{
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

// Cubic Hermite between (y0, f0) at theta = 0 and (y1, f1) at theta = 1, step h.
State6 hermite(const State6& y0, const State6& f0, const State6& y1, const State6& f1, double h, double th)
{
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    const double h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th);
    const double h11 = th * th * (th - 1);
    State6 out;
    for (int i = 0; i < 6; ++i) out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    return out;
}

}  // namespace

void CloudConfig::validate() const
{
    if (n_atoms < 1) throw std::invalid_argument("cloud.n_atoms must be positive");
    if (!(y_max >= y_min) || !(z_max >= z_min)) throw std::invalid_argument("cloud bands are empty");
    if (!(speed_x < 0.0)) throw std::invalid_argument("cloud.speed_x must be negative (falling along -x)");
    if (!(perp_ratio_cap >= 0.0 && perp_ratio_cap <= 0.1))
        throw std::invalid_argument("cloud.perp_ratio_cap must lie in [0, 0.1] so that |v_x| >= 10 v_perp");
    if (!(a_atomic_cap >= 0.0)) throw std::invalid_argument("cloud.a_atomic_cap must be non-negative");
}

std::uint64_t AtomStream::mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double a_atomic(const AtomState& s, double hbar_natural, double kperp)
{
    const double lz = s.position[0] * s.velocity[1] - s.position[1] * s.velocity[0];
    return lz * s.velocity[1] / (hbar_natural * hbar_natural * kperp);
}

AtomState sample_atom(const CloudConfig& config, const BeamSpec& spec, const PhysicalSetup& setup,
                      std::uint64_t index)
{
    AtomStream rng(config.seed, index);
    AtomState s;
    s.position = {config.x0, config.y_min + (config.y_max - config.y_min) * rng.uniform(),
                  config.z_min + (config.z_max - config.z_min) * rng.uniform()};
    const double vx = config.speed_x;
    const double mag = rng.uniform() * config.perp_ratio_cap * std::abs(vx);
    const double phi = 2.0 * pi * rng.uniform();
    double vy = mag * std::cos(phi), vz = mag * std::sin(phi);

    // Keep |L_z P_y| under the cap by rotating v_perp towards z. Bound used:
    // |x| vy^2 + |y vx| |vy| <= C, which implies |(x vy - y vx) vy| <= C.
    const double hb = setup.hbar_natural();
    const double c = config.a_atomic_cap * hb * hb * spec.kperp();
    const double ax = std::abs(s.position[0]), yv = std::abs(s.position[1] * vx);
    double w_max;
    if (ax > 0.0)
        w_max = (-yv + std::sqrt(yv * yv + 4.0 * ax * c)) / (2.0 * ax);
    else
        w_max = yv > 0.0 ? c / yv : INFINITY;
    if (std::abs(vy) > w_max) {
        vy = std::copysign(w_max, vy);
        vz = std::copysign(std::sqrt(std::max(0.0, mag * mag - vy * vy)), vz);
    }
    s.velocity = {vx, vy, vz};
    return s;
}

std::vector<AtomState> sample_cloud(const CloudConfig& config, const BeamSpec& spec, const PhysicalSetup& setup)
{
    config.validate();
    std::vector<AtomState> out;
    out.reserve(config.n_atoms);
    for (int i = 0; i < config.n_atoms; ++i) out.push_back(sample_atom(config, spec, setup, i));
    return out;
}

DynamicsContext DynamicsContext::make(const ScalarField& field, const BeamSpec& calibrated, const PhysicalSetup& setup,
                                      DipoleBranch branch, ForceDenominator denominator)
{
    DynamicsContext ctx;
    ctx.field = &field;
    ctx.spec = calibrated;
    ctx.model = ForceModel::make(calibrated, setup, branch, denominator);
    ctx.gravity = setup.gravity_natural();
    ctx.optical = calibrated.amplitude_scale != 0.0;
    return ctx;
}

Acceleration acceleration(const AtomState& state, const DynamicsContext& ctx)
{
    Acceleration out;
    out.a = {-ctx.gravity, 0.0, 0.0};
    const double x = state.position[0];
    if (!ctx.optical || x < ctx.x_window_min || x > ctx.x_window_max) return out;
    CartesianDerivs d = ctx.field->at(x, state.position[1]);
    auto gg = coupling_and_gradient(ctx.model, ctx.spec, d, state.position[2]);
    CouplingSample s = log_gradient(ctx.model, gg, state.velocity);
    ForceResult f = mean_force(s, state.velocity, ctx.model);
    out.sentinel = f.sentinel;
    for (int i = 0; i < 3; ++i) out.a[i] += f.force[i];
    return out;
}

std::string_view to_string(TrajectoryStatus s)
{
    switch (s) {
    case TrajectoryStatus::ok: return "ok";
    case TrajectoryStatus::step_underflow: return "step_underflow";
    case TrajectoryStatus::non_finite: return "non_finite";
    case TrajectoryStatus::invalid: return "invalid";
    }
    return "?";
}

TrajectoryRecord integrate(const AtomState& initial, const SimParams& params, const DynamicsContext& ctx)
{
    if (!(params.tol >= 1e-12 && params.tol <= 1e-4)) throw std::invalid_argument("tol must lie in [1e-12, 1e-4]");
    if (!(params.t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (!(params.cadence > 0.0)) throw std::invalid_argument("output cadence must be positive");

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2, (void)c3, (void)c4, (void)c5;  // autonomous system

    TrajectoryRecord rec;
    State6 y = pack(initial);
    double t = initial.time;
    const double t_end = initial.time + params.t_max;
    if (!all_finite(y)) {
        rec.status = TrajectoryStatus::non_finite;
        rec.samples.push_back(initial);
        return rec;
    }

    auto rhs = [&](const State6& s) {
        AtomState st = unpack(s, 0.0);
        Acceleration acc = acceleration(st, ctx);
        ++rec.force_evaluations;
        if (acc.sentinel) ++rec.sentinel_evaluations;
        return State6{s[3], s[4], s[5], acc.a[0], acc.a[1], acc.a[2]};
    };

    // Absolute floors per component: one wavelength for positions, the
    // release speed for velocities.
    const double vscale = std::max(1e-6, std::hypot(initial.velocity[0], initial.velocity[1], initial.velocity[2]));
    const double floor_[6] = {1.0, 1.0, 1.0, vscale, vscale, vscale};

    rec.samples.push_back(initial);
    double next_out = t + params.cadence;

    State6 k1 = rhs(y), k2, k3, k4, k5, k6, k7, tmp, ynew;
    double h = std::min(params.initial_step, params.t_max);
    double err_old = 1e-4;
    bool reject_prev = false;

    while (t < t_end) {
        if (t + h > t_end) h = t_end - t;
        if (h < 1e-12 * std::max(1.0, std::abs(t))) {
            rec.status = TrajectoryStatus::step_underflow;
            break;
        }
        for (int i = 0; i < 6; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        k2 = rhs(tmp);
        for (int i = 0; i < 6; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs(tmp);
        for (int i = 0; i < 6; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs(tmp);
        for (int i = 0; i < 6; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs(tmp);
        for (int i = 0; i < 6; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = rhs(tmp);
        for (int i = 0; i < 6; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        k7 = rhs(ynew);

        if (!all_finite(ynew) || !all_finite(k7)) {
            rec.status = TrajectoryStatus::non_finite;
            break;
        }

        double err = 0.0;
        for (int i = 0; i < 6; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = params.tol * (std::max(std::abs(y[i]), std::abs(ynew[i])) + floor_[i]);
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / 6.0);

        if (err <= 1.0) {
            // Dense output and the exit-plane check use the cubic Hermite.
            const double t_new = t + h;
            bool exit_now = ynew[0] < params.x_exit;
            double t_stop = t_new;
            State6 y_stop = ynew;
            if (exit_now) {
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 60; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (hermite(y, k1, ynew, k7, h, mid)[0] < params.x_exit)
                        hi = mid;
                    else
                        lo = mid;
                }
                t_stop = t + hi * h;
                y_stop = hermite(y, k1, ynew, k7, h, hi);
            }
            while (next_out < t_stop) {
                rec.samples.push_back(unpack(hermite(y, k1, ynew, k7, h, (next_out - t) / h), next_out));
                next_out += params.cadence;
            }
            ++rec.accepted_steps;
            if (exit_now) {
                rec.exited = true;
                y = y_stop;
                t = t_stop;
                break;
            }
            y = ynew;
            t = t_new;
            k1 = k7;

            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_old, 0.4 / 5.0);
            fac = std::clamp(fac, 0.2, 10.0);
            if (reject_prev) fac = std::min(fac, 1.0);
            h *= fac;
            err_old = std::max(err, 1e-4);
            reject_prev = false;
        } else {
            ++rec.rejected_steps;
            h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
            reject_prev = true;
        }
    }
    rec.samples.push_back(unpack(y, t));
    return rec;
}

ObservableSeries observables(const TrajectoryRecord& record, const PhysicalSetup& setup, const BeamSpec& spec)
{
    if (record.samples.empty()) throw std::invalid_argument("observables: empty trajectory");
    ObservableSeries o;
    const AtomState& s0 = record.samples.front();
    const double hb = setup.hbar_natural(), kp = spec.kperp();
    for (const AtomState& s : record.samples) {
        o.t.push_back(s.time);
        double dx = s.position[0] - s0.position[0], dy = s.position[1] - s0.position[1];
        o.theta_d.push_back(std::atan2(dy, std::abs(dx)));
        o.a_atomic.push_back(a_atomic(s, hb, kp));
        o.kx_uK.push_back(setup.kinetic_microkelvin(s.velocity[0]));
        o.kyz_uK.push_back(setup.kinetic_microkelvin(std::hypot(s.velocity[1], s.velocity[2])));
    }
    return o;
}

std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::dark_deflected: return "dark_deflected";
    case Outcome::bright_strong: return "bright_strong";
    case Outcome::focused_channel: return "focused_channel";
    case Outcome::weak: return "weak";
    case Outcome::failed: return "failed";
    }
    return "?";
}

ArrivalMap arrival_map(const ScalarField& field, double u_m, double x0, double y_min, double y_max,
                       const ClassifyParams& params, double dy)
{
    ArrivalMap map;
    map.u_m = u_m;
    map.dark_limit = 2.0 * u_m * u_m;
    const BeamSpec& spec = field.spec();
    std::vector<double> ys, intensity;
    for (double y = y_min; y <= y_max + 0.5 * dy; y += dy) {
        auto e = e_shape(spec, field.at(x0, y));
        ys.push_back(y);
        intensity.push_back(std::norm(e[0]) + std::norm(e[1]) + std::norm(e[2]));
    }
    double peak = 0.0;
    for (double v : intensity) peak = std::max(peak, v);
    for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
        if (intensity[i] > intensity[i - 1] && intensity[i] >= intensity[i + 1] &&
            intensity[i] >= params.bright_fraction * peak)
            map.bright_y.push_back(ys[i]);
    }
    return map;
}

Outcome classify(const TrajectoryRecord& record, const ObservableSeries& obs, const ArrivalMap& map,
                 const ClassifyParams& params)
{
    if (record.status != TrajectoryStatus::ok) return Outcome::failed;
    const double arrival = record.samples.front().position[1];
    const double final_theta = std::abs(obs.theta_d.back());
    if (std::abs(arrival) < map.dark_limit && final_theta > params.dark_theta) return Outcome::dark_deflected;
    bool on_bright = std::any_of(map.bright_y.begin(), map.bright_y.end(),
                                 [&](double yb) { return std::abs(arrival - yb) <= params.bright_halfwidth; });
    if (on_bright && final_theta > params.dark_theta) return Outcome::bright_strong;
    for (const AtomState& s : record.samples) {
        if (s.position[0] < 0.0) {
            double y_cross = std::abs(s.position[1]);
            double y_end = std::abs(record.samples.back().position[1]);
            if (y_end < y_cross - params.focus_min_shrink) return Outcome::focused_channel;
            break;
        }
    }
    return Outcome::weak;
}

int EnsembleResult::count(Outcome o) const
{
    return static_cast<int>(std::count_if(atoms.begin(), atoms.end(), [o](const AtomSummary& a) { return a.outcome == o; }));
}

EnsembleResult run_ensemble(const std::vector<AtomState>& cloud, const DynamicsContext& ctx, const SimParams& params,
                            const PhysicalSetup& setup, const ArrivalMap& map, const ClassifyParams& classify_params,
                            int threads)
{
    if (cloud.empty()) throw std::invalid_argument("run_ensemble: empty cloud");
    EnsembleResult result;
    result.records.resize(cloud.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cloud.size(); i = next++) {
            try {
                result.records[i] = integrate(cloud[i], params, ctx);
            } catch (const std::exception&) {
                TrajectoryRecord r;
                r.status = TrajectoryStatus::invalid;
                r.samples.push_back(cloud[i]);
                result.records[i] = std::move(r);
            }
        }
    };
    threads = std::max(1, threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Fixed-order reduction.
    const double hb = setup.hbar_natural(), kp = ctx.spec.kperp();
    std::size_t n_curve = static_cast<std::size_t>(params.t_max / params.cadence) + 1;
    std::vector<double> sum_kx(n_curve, 0.0), sum_kyz(n_curve, 0.0);
    std::vector<int> n_at(n_curve, 0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const TrajectoryRecord& rec = result.records[i];
        result.total_evaluations += rec.force_evaluations;
        result.sentinel_evaluations += rec.sentinel_evaluations;
        ObservableSeries obs = observables(rec, setup, ctx.spec);
        AtomSummary a;
        a.id = i;
        a.arrival_y = rec.samples.front().position[1];
        a.final_theta = obs.theta_d.back();
        a.initial_a = a_atomic(rec.samples.front(), hb, kp);
        a.final_a = obs.a_atomic.back();
        a.final_kx = obs.kx_uK.back();
        a.final_kyz = obs.kyz_uK.back();
        double peak_accel = -1.0;
        for (std::size_t k = 0; k < rec.samples.size(); ++k) {
            const AtomState& s = rec.samples[k];
            a.max_abs_theta = std::max(a.max_abs_theta, std::abs(obs.theta_d[k]));
            a.max_abs_z = std::max(a.max_abs_z, std::abs(s.position[2] - rec.samples.front().position[2]));
            if (std::isnan(a.y_at_crossing) && s.position[0] < 0.0) a.y_at_crossing = s.position[1];
            if (k > 0) {
                double dt = s.time - rec.samples[k - 1].time;
                if (dt > 0.0) {
                    double ay = std::abs(s.velocity[1] - rec.samples[k - 1].velocity[1]) / dt;
                    if (ay > peak_accel) {
                        peak_accel = ay;
                        a.time_peak_transverse_accel = 0.5 * (s.time + rec.samples[k - 1].time);
                    }
                }
            }
        }
        a.outcome = classify(rec, obs, map, classify_params);
        if (a.outcome == Outcome::failed) ++result.failed;
        result.max_abs_z = std::max(result.max_abs_z, a.max_abs_z);
        for (std::size_t k = 0; k < rec.samples.size(); ++k) {
            double rel = rec.samples[k].time - rec.samples.front().time;
            double idx = rel / params.cadence;
            std::size_t j = static_cast<std::size_t>(std::llround(idx));
            if (std::abs(idx - j) > 1e-9 || j >= n_curve) continue;
            sum_kx[j] += obs.kx_uK[k];
            sum_kyz[j] += obs.kyz_uK[k];
            ++n_at[j];
        }
        result.atoms.push_back(a);
    }
    for (std::size_t j = 0; j < n_curve; ++j) {
        if (n_at[j] == 0) continue;
        result.curve_t.push_back(j * params.cadence);
        result.curve_kx.push_back(sum_kx[j] / n_at[j]);
        result.curve_kyz.push_back(sum_kyz[j] / n_at[j]);
    }
    return result;
}

}  // namespace weber
