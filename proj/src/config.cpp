#include "weber/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace weber {

ConfigError::ConfigError(int line, int column, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what
                                  : what),
      line_(line), column_(column)
{
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_complex(cplx z)
{
    std::string im = format_double(z.imag());
    if (im.front() != '-') im.insert(im.begin(), '+');
    return format_double(z.real()) + im + "i";
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
    return v;
}

long long parse_integer(std::string_view s)
{
    s = trim(s);
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
    return v;
}

std::uint64_t parse_u64(std::string_view s)
{
    s = trim(s);
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("expected an unsigned 64-bit integer, got '" + std::string(s) + "'");
    return v;
}

bool parse_bool(std::string_view s)
{
    s = trim(s);
    if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "off" || s == "no" || s == "0") return false;
    throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

struct Field {
    std::string section, key;
    std::function<void(std::string_view)> set;
    std::function<std::string()> get;
};

template <class T>
Field number(std::string section, std::string key, T& ref)
{
    Field f{std::move(section), std::move(key), {}, {}};
    if constexpr (std::is_same_v<T, double>) {
        f.set = [&ref](std::string_view s) { ref = parse_double(s); };
        f.get = [&ref] { return format_double(ref); };
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        f.set = [&ref](std::string_view s) { ref = parse_u64(s); };
        f.get = [&ref] { return std::to_string(ref); };
    } else if constexpr (std::is_same_v<T, bool>) {
        f.set = [&ref](std::string_view s) { ref = parse_bool(s); };
        f.get = [&ref] { return std::string(ref ? "true" : "false"); };
    } else {
        f.set = [&ref](std::string_view s) {
            long long v = parse_integer(s);
            if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max())
                throw std::invalid_argument("integer out of range");
            ref = static_cast<T>(v);
        };
        f.get = [&ref] { return std::to_string(ref); };
    }
    return f;
}

std::vector<Field> fields(RunConfig& c)
{
    std::vector<Field> f;
    f.push_back(number("setup", "transition_wavelength", c.setup.transition_wavelength));
    f.push_back(number("setup", "laser_wavelength", c.setup.laser_wavelength));
    f.push_back(number("setup", "gamma", c.setup.gamma));
    f.push_back(number("setup", "atom_mass", c.setup.atom_mass));
    f.push_back(number("setup", "gravity", c.setup.gravity));

    f.push_back({"beam", "parity", [&c](std::string_view s) { c.beam.parity = parse_parity(trim(s)); },
                 [&c] { return std::string(to_string(c.beam.parity)); }});
    f.push_back(number("beam", "order_a", c.beam.order_a));
    f.push_back(number("beam", "kz_fraction", c.beam.kz_fraction));
    f.push_back({"beam", "amp_te", [&c](std::string_view s) { c.beam.amp_te = parse_complex(s); },
                 [&c] { return format_complex(c.beam.amp_te); }});
    f.push_back({"beam", "amp_tm", [&c](std::string_view s) { c.beam.amp_tm = parse_complex(s); },
                 [&c] { return format_complex(c.beam.amp_tm); }});
    f.push_back(number("beam", "irradiance", c.beam.irradiance));

    f.push_back(number("cloud", "n_atoms", c.cloud.n_atoms));
    f.push_back(number("cloud", "x0", c.cloud.x0));
    f.push_back(number("cloud", "y_min", c.cloud.y_min));
    f.push_back(number("cloud", "y_max", c.cloud.y_max));
    f.push_back(number("cloud", "z_min", c.cloud.z_min));
    f.push_back(number("cloud", "z_max", c.cloud.z_max));
    f.push_back(number("cloud", "speed_x", c.cloud.speed_x));
    f.push_back(number("cloud", "perp_ratio_cap", c.cloud.perp_ratio_cap));
    f.push_back(number("cloud", "a_atomic_cap", c.cloud.a_atomic_cap));
    f.push_back(number("cloud", "temperature_equiv", c.cloud.temperature_equiv));
    f.push_back(number("cloud", "seed", c.cloud.seed));

    f.push_back(number("sim", "t_max", c.sim.t_max));
    f.push_back(number("sim", "tol", c.sim.tol));
    f.push_back(number("sim", "x_exit", c.sim.x_exit));
    f.push_back(number("sim", "use_grid", c.sim.use_grid));
    f.push_back(number("sim", "grid_step", c.sim.grid_step));
    f.push_back({"sim", "force_denominator",
                 [&c](std::string_view s) { c.sim.force_denominator = parse_denominator(trim(s)); },
                 [&c] { return std::string(to_string(c.sim.force_denominator)); }});
    f.push_back({"sim", "dipole_branch", [&c](std::string_view s) { c.sim.dipole_branch = parse_branch(trim(s)); },
                 [&c] { return std::string(to_string(c.sim.dipole_branch)); }});
    f.push_back(number("sim", "x_window_min", c.sim.x_window_min));
    f.push_back(number("sim", "x_window_max", c.sim.x_window_max));
    f.push_back(number("sim", "calibration_x_min", c.sim.calibration.x_min));
    f.push_back(number("sim", "calibration_x_max", c.sim.calibration.x_max));
    f.push_back(number("sim", "calibration_y_min", c.sim.calibration.y_min));
    f.push_back(number("sim", "calibration_y_max", c.sim.calibration.y_max));
    f.push_back(number("sim", "calibration_grid", c.sim.calibration_grid));
    f.push_back(number("sim", "threads", c.sim.threads));
    f.push_back(number("sim", "direct_check_fraction", c.sim.direct_check_fraction));

    f.push_back(number("classify", "dark_theta", c.classify.dark_theta));
    f.push_back(number("classify", "bright_halfwidth", c.classify.bright_halfwidth));
    f.push_back(number("classify", "bright_fraction", c.classify.bright_fraction));
    f.push_back(number("classify", "focus_min_shrink", c.classify.focus_min_shrink));

    f.push_back({"output", "directory", [&c](std::string_view s) { c.output.directory = std::string(trim(s)); },
                 [&c] { return quote(c.output.directory); }});
    f.push_back(number("output", "cadence", c.output.cadence));
    f.push_back(number("output", "trajectories", c.output.trajectories));
    f.push_back(number("output", "summary", c.output.summary));

    f.push_back(number("field_map", "x_min", c.field_map.window.x_min));
    f.push_back(number("field_map", "x_max", c.field_map.window.x_max));
    f.push_back(number("field_map", "y_min", c.field_map.window.y_min));
    f.push_back(number("field_map", "y_max", c.field_map.window.y_max));
    f.push_back(number("field_map", "nx", c.field_map.nx));
    f.push_back(number("field_map", "ny", c.field_map.ny));

    f.push_back(number("um_curve", "a_min", c.um_curve.a_min));
    f.push_back(number("um_curve", "a_max", c.um_curve.a_max));
    f.push_back(number("um_curve", "a_step", c.um_curve.a_step));
    return f;
}

Field* find_field(std::vector<Field>& all, std::string_view section, std::string_view key)
{
    for (Field& f : all)
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

bool valid_name(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

// Value text with comments stripped; quoted strings are unescaped.
std::string value_text(std::string_view raw, int line, int column)
{
    raw = trim(raw);
    if (!raw.empty() && raw.front() == '"') {
        std::string out;
        std::size_t i = 1;
        for (; i < raw.size() && raw[i] != '"'; ++i) {
            if (raw[i] == '\\' && i + 1 < raw.size()) ++i;
            out += raw[i];
        }
        if (i >= raw.size()) throw ConfigError(line, column, "unterminated string");
        std::string_view rest = trim(raw.substr(i + 1));
        if (!rest.empty() && rest.front() != '#')
            throw ConfigError(line, column + static_cast<int>(i) + 1, "unexpected text after string");
        return out;
    }
    std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    return std::string(trim(raw));
}

void assign(RunConfig& config, std::vector<Field>& all, std::string_view section, std::string_view key,
            std::string_view value, int line, int key_col, int value_col)
{
    Field* f = find_field(all, section, key);
    if (!f) throw ConfigError(line, key_col, "unknown key '" + std::string(section) + "." + std::string(key) + "'");
    if (value.empty()) throw ConfigError(line, value_col, "missing value for '" + std::string(section) + "." + std::string(key) + "'");
    try {
        f->set(value);
    } catch (const std::exception& e) {
        throw ConfigError(line, value_col, std::string(section) + "." + std::string(key) + ": " + e.what());
    }
    (void)config;
}

}  // namespace

cplx parse_complex(std::string_view text)
{
    std::string_view s = trim(text);
    if (s.empty()) throw std::invalid_argument("expected a complex number");
    if (s.back() != 'i') return {parse_double(s), 0.0};
    s.remove_suffix(1);
    // Split at the last sign that is not an exponent sign or the leading sign.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_part = [](std::string_view im) {
        im = trim(im);
        if (im.empty() || im == "+") return 1.0;
        if (im == "-") return -1.0;
        return parse_double(im);
    };
    if (split == std::string_view::npos) return {0.0, imag_part(s)};
    return {parse_double(s.substr(0, split)), imag_part(s.substr(split))};
}

void RunConfig::validate() const
{
    auto fail = [](const std::string& what) { throw ConfigError(0, 0, what); };
    try {
        setup.validate();
        beam.validate();
        cloud.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (!(sim.t_max > 0.0)) fail("sim.t_max must be positive");
    if (!(sim.tol >= 1e-12 && sim.tol <= 1e-4)) fail("sim.tol must lie in [1e-12, 1e-4]");
    if (!std::isfinite(sim.x_exit)) fail("sim.x_exit must be finite");
    if (!(sim.grid_step > 0.0 && sim.grid_step <= 0.1)) fail("sim.grid_step must lie in (0, 0.1]");
    if (!(sim.x_window_max >= sim.x_window_min)) fail("sim.x_window_max must not be below sim.x_window_min");
    const Window& w = sim.calibration;
    if (!(w.x_max > w.x_min && w.y_max > w.y_min)) fail("calibration window is empty");
    if (sim.calibration_grid < 2) fail("sim.calibration_grid must be at least 2");
    if (sim.threads < 1) fail("sim.threads must be at least 1");
    if (!(sim.direct_check_fraction >= 0.0 && sim.direct_check_fraction <= 1.0))
        fail("sim.direct_check_fraction must lie in [0, 1]");
    if (!(classify.dark_theta >= 0.0 && classify.bright_halfwidth >= 0.0 && classify.focus_min_shrink >= 0.0))
        fail("classify thresholds must be non-negative");
    if (!(classify.bright_fraction > 0.0 && classify.bright_fraction <= 1.0))
        fail("classify.bright_fraction must lie in (0, 1]");
    if (!(output.cadence > 0.0)) fail("output.cadence must be positive");
    if (output.directory.empty()) fail("output.directory must not be empty");
    const Window& m = field_map.window;
    if (!(m.x_max > m.x_min && m.y_max > m.y_min)) fail("field_map window is empty");
    if (field_map.nx < 2 || field_map.ny < 2) fail("field_map.nx and field_map.ny must be at least 2");
    if (!(um_curve.a_max >= um_curve.a_min && um_curve.a_step > 0.0)) fail("um_curve range is invalid");
}

SimParams RunConfig::sim_params() const
{
    SimParams p;
    p.t_max = sim.t_max;
    p.tol = sim.tol;
    p.x_exit = sim.x_exit;
    p.cadence = output.cadence;
    return p;
}

RunConfig parse_config(std::string_view text)
{
    RunConfig config;
    std::vector<Field> all = fields(config);
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#') {
            if (end == text.size()) break;
            continue;
        }
        const int col = static_cast<int>(first) + 1;
        std::string_view body = line.substr(first);
        if (body.front() == '[') {
            std::size_t close = body.find(']');
            if (close == std::string_view::npos) throw ConfigError(line_no, col, "unterminated section header");
            std::string_view rest = trim(body.substr(close + 1));
            if (!rest.empty() && rest.front() != '#')
                throw ConfigError(line_no, col + static_cast<int>(close) + 1, "unexpected text after section header");
            std::string_view name = trim(body.substr(1, close - 1));
            bool known = false;
            for (const Field& f : all) known = known || f.section == name;
            if (!known) throw ConfigError(line_no, col + 1, "unknown section '" + std::string(name) + "'");
            section = std::string(name);
        } else {
            std::size_t eq = body.find('=');
            if (eq == std::string_view::npos) throw ConfigError(line_no, col, "expected 'key = value'");
            std::string_view lhs = trim(body.substr(0, eq));
            std::string_view sec = section, key = lhs;
            std::size_t dot = lhs.find('.');
            if (dot != std::string_view::npos) {
                sec = lhs.substr(0, dot);
                key = lhs.substr(dot + 1);
            }
            if (!valid_name(key) || (dot != std::string_view::npos && !valid_name(sec)))
                throw ConfigError(line_no, col, "malformed key '" + std::string(lhs) + "'");
            if (sec.empty()) throw ConfigError(line_no, col, "key '" + std::string(key) + "' outside any section");
            std::size_t vstart = body.find_first_not_of(" \t", eq + 1);
            int vcol = col + static_cast<int>(vstart == std::string_view::npos ? eq + 1 : vstart);
            std::string value = value_text(body.substr(eq + 1), line_no, vcol);
            assign(config, all, sec, key, value, line_no, col, vcol);
        }
        if (end == text.size()) break;
    }
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, 0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_override(RunConfig& config, std::string_view assignment)
{
    std::size_t eq = assignment.find('=');
    std::string_view lhs = trim(assignment.substr(0, eq));
    std::size_t dot = lhs.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos)
        throw ConfigError(0, 0, "override must look like section.key=value, got '" + std::string(assignment) + "'");
    std::vector<Field> all = fields(config);
    std::string value = value_text(assignment.substr(eq + 1), 0, 0);
    assign(config, all, lhs.substr(0, dot), lhs.substr(dot + 1), value, 0, 0, 0);
}

std::string emit_config(const RunConfig& config)
{
    RunConfig copy = config;
    std::vector<Field> all = fields(copy);
    std::string out, section;
    for (const Field& f : all) {
        if (f.section != section) {
            if (!section.empty()) out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += f.key + " = " + f.get() + "\n";
    }
    return out;
}

}  // namespace weber
