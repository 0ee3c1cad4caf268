#include "weber/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "weber/io.hpp"

namespace weber {

const ScalarField& PreparedBeam::field() const
{
    if (table) return *table;
    return *direct;
}

PreparedBeam prepare_beam(const RunConfig& config)
{
    config.validate();
    PreparedBeam out;
    out.spec = config.beam;
    out.direct = std::make_unique<DirectField>(out.spec);
    if (config.sim.use_grid) {
        // Cover calibration, field-map and flight regions.
        Window cover = config.sim.calibration;
        auto grow = [&cover](double x0, double x1, double y0, double y1) {
            cover.x_min = std::min(cover.x_min, x0);
            cover.x_max = std::max(cover.x_max, x1);
            cover.y_min = std::min(cover.y_min, y0);
            cover.y_max = std::max(cover.y_max, y1);
        };
        const Window& m = config.field_map.window;
        grow(m.x_min, m.x_max, m.y_min, m.y_max);
        const CloudConfig& c = config.cloud;
        grow(std::min(config.sim.x_exit, c.x0), std::max(config.sim.x_exit, c.x0), c.y_min - 50.0, c.y_max + 50.0);
        out.table = std::make_unique<FieldTable>(FieldTable::covering(out.spec, cover, config.sim.grid_step));
    }
    out.spec.amplitude_scale =
        calibrate_amplitude(out.spec, out.field(), config.sim.calibration, config.sim.calibration_grid);
    out.u_m = find_um(out.spec);
    return out;
}

DynamicsContext make_context(const RunConfig& config, const PreparedBeam& beam)
{
    DynamicsContext ctx = DynamicsContext::make(beam.field(), beam.spec, config.setup, config.sim.dipole_branch,
                                                config.sim.force_denominator);
    ctx.x_window_min = config.sim.x_window_min;
    ctx.x_window_max = config.sim.x_window_max;
    return ctx;
}

void write_field_map(std::ostream& out, const RunConfig& config, const PreparedBeam& beam)
{
    const Window& w = config.field_map.window;
    const int nx = config.field_map.nx, ny = config.field_map.ny;
    const double scale2 = beam.spec.amplitude_scale * beam.spec.amplitude_scale;
    const double to_w_cm2 = 0.5 * si::c * si::eps0 * 1e-4;
    CsvWriter csv(out, {"x_lambda", "y_lambda", "intensity_W_cm2", "re_psi", "im_psi"});
    for (int i = 0; i < nx; ++i) {
        double x = w.x_min + (w.x_max - w.x_min) * i / (nx - 1);
        for (int j = 0; j < ny; ++j) {
            double y = w.y_min + (w.y_max - w.y_min) * j / (ny - 1);
            CartesianDerivs d = beam.field().at(x, y);
            auto e = e_shape(beam.spec, d);
            double e2 = std::norm(e[0]) + std::norm(e[1]) + std::norm(e[2]);
            csv << x << y << to_w_cm2 * scale2 * e2 << d.psi.real() << d.psi.imag();
            csv.end_row();
        }
    }
}

std::vector<std::pair<double, double>> um_curve(const RunConfig& config)
{
    config.validate();
    std::vector<std::pair<double, double>> out;
    const UmCurveConfig& c = config.um_curve;
    const long n = std::lround(std::floor((c.a_max - c.a_min) / c.a_step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        BeamSpec spec = config.beam;
        spec.order_a = c.a_min + i * c.a_step;
        out.emplace_back(spec.order_a, find_um(spec));
    }
    return out;
}

SimulationOutput simulate(const RunConfig& config, const PreparedBeam& beam)
{
    SimulationOutput out;
    DynamicsContext ctx = make_context(config, beam);
    out.cloud = sample_cloud(config.cloud, beam.spec, config.setup);
    out.map = arrival_map(beam.field(), beam.u_m, config.cloud.x0, config.cloud.y_min, config.cloud.y_max,
                          config.classify);
    out.ensemble =
        run_ensemble(out.cloud, ctx, config.sim_params(), config.setup, out.map, config.classify, config.sim.threads);
    return out;
}

namespace {

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

// Fixed probe set: two rings, ten points, no point on a nodal axis.
std::vector<CartesianPoint> probe_points()
{
    std::vector<CartesianPoint> pts;
    for (int i = 0; i < 10; ++i) {
        double r = i < 5 ? 3.7 : 23.3;
        double phi = 0.41 + 1.23 * i;
        pts.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
    return pts;
}

}  // namespace

std::vector<CheckResult> validate_run(const RunConfig& config)
{
    std::vector<CheckResult> checks;
    PreparedBeam beam = prepare_beam(config);

    {
        // Hypergeometric psi against the angular spectrum, one fitted constant.
        std::vector<cplx> direct, spectral;
        for (auto p : probe_points()) {
            direct.push_back(scalar_psi(beam.spec, cart_to_parabolic(p.x, p.y)).psi);
            spectral.push_back(scalar_psi_spectrum(beam.spec, p.x, p.y).value);
        }
        cplx num = 0.0;
        double den = 0.0, norm = 0.0, res = 0.0;
        for (std::size_t i = 0; i < direct.size(); ++i) {
            num += std::conj(spectral[i]) * direct[i];
            den += std::norm(spectral[i]);
        }
        cplx c = num / den;
        for (std::size_t i = 0; i < direct.size(); ++i) {
            res += std::norm(direct[i] - c * spectral[i]);
            norm += std::norm(direct[i]);
        }
        double rel = std::sqrt(res / norm);
        checks.push_back({"angular_spectrum_oracle", rel <= 1e-6, "relative residual " + fmt(rel)});
    }

    {
        double worst = 0.0, worst_mirror = 0.0;
        for (int i = 0; i < 50; ++i) {
            double x = -180.0 + 7.3 * i, y = 140.0 * std::sin(1.7 * i);
            CartesianDerivs t = beam.field().at(x, y);
            CartesianDerivs d = beam.direct->at(x, y);
            CartesianDerivs m = beam.direct->at(x, -y);
            double scale = std::abs(d.psi) + std::abs(d.dx) + std::abs(d.dy) + 1e-300;
            worst = std::max(worst, (std::abs(t.psi - d.psi) + std::abs(t.dx - d.dx) + std::abs(t.dy - d.dy)) / scale);
            worst_mirror = std::max(worst_mirror, std::abs(std::abs(d.psi) - std::abs(m.psi)) / (std::abs(d.psi) + 1e-300));
        }
        checks.push_back({"table_vs_direct", worst <= 1e-6, "max relative difference " + fmt(worst)});
        checks.push_back({"mirror_symmetry", worst_mirror <= 1e-9, "max relative |psi| asymmetry " + fmt(worst_mirror)});
    }

    {
        DynamicsContext ctx = make_context(config, beam);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            double x = 120.0 - 11.0 * i, y = 60.0 * std::cos(0.9 * i);
            auto gg = coupling_and_gradient(ctx.model, beam.spec, beam.field().at(x, y), 0.3 * i);
            CouplingSample s = log_gradient(ctx.model, gg, {0.0, 0.0, 0.0});
            if (s.sentinel) continue;
            worst = std::max(worst, std::abs(s.p_prime - s.p) / s.p);
        }
        checks.push_back({"rest_saturation", worst <= 1e-12, "max |p'(v=0) - p| / p = " + fmt(worst)});
    }

    {
        CloudConfig cloud = config.cloud;
        auto a = sample_cloud(cloud, beam.spec, config.setup);
        auto b = sample_cloud(cloud, beam.spec, config.setup);
        bool same = true, capped = true;
        for (std::size_t i = 0; i < a.size(); ++i) {
            same = same && a[i].position == b[i].position && a[i].velocity == b[i].velocity;
            double vp = std::hypot(a[i].velocity[1], a[i].velocity[2]);
            capped = capped && std::abs(a[i].velocity[0]) >= 10.0 * vp * (1.0 - 1e-12);
        }
        checks.push_back({"cloud_determinism", same, same ? "identical" : "differs between runs"});
        checks.push_back({"velocity_cap", capped, capped ? "|vx| >= 10 v_perp for all atoms" : "cap violated"});
    }

    if (beam.table && config.sim.direct_check_fraction > 0.0) {
        // Rerun a subsample without the table.
        DynamicsContext tab = make_context(config, beam);
        DynamicsContext dir = tab;
        dir.field = beam.direct.get();
        SimParams params = config.sim_params();
        const int n = config.cloud.n_atoms;
        const int stride = std::max(1, static_cast<int>(std::lround(1.0 / config.sim.direct_check_fraction)));
        double worst = 0.0;
        int count = 0;
        for (int i = 0; i < n; i += stride, ++count) {
            AtomState s0 = sample_atom(config.cloud, beam.spec, config.setup, i);
            AtomState a = integrate(s0, params, tab).samples.back();
            AtomState b = integrate(s0, params, dir).samples.back();
            for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(a.position[k] - b.position[k]));
        }
        checks.push_back({"direct_subsample", worst <= 1e-3,
                          std::to_string(count) + " atoms, max final position difference " + fmt(worst) + " lambda"});
    }
    return checks;
}

}  // namespace weber
