#ifndef VARJUMP_CONFIG_HPP
#define VARJUMP_CONFIG_HPP

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "varjump/fft.hpp"
#include "varjump/sphere.hpp"

namespace varjump {

struct ConfigError {
    int line = 0;       // 1-based; 0 when not tied to a line
    int column = 0;     // 1-based position within the value, 0 if n/a
    std::string message;
};

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 7;
    long trials = 0;  // 0: experiment default

    int grid_dim = 2;
    std::size_t grid_points = 256;
    double half_width = 1.0;

    std::string kernel_spec = "sin";
    std::size_t kernel_nodes = 256;

    int j_min = -5;
    int j_max = -2;
    int samples_per_octave = 4;

    std::vector<double> lambdas = {0.25, 0.75, 1.5};
    std::vector<double> qs = {2.0, 3.0, 6.0};
    std::vector<double> ps = {2.0};
    std::size_t rotation_nodes = 512;

    std::string out_dir = "out";
    std::vector<std::string> formats = {"csv"};
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "pointwise-check", "variation-sweep", "jump-sweep",      "jsw-compare",
        "lp-decomp-check", "decay-fit",       "rotation-check",  "averaging-check",
        "cz-check",        "martingale-check", "kernel-classes", "vdc-check"};
    return names;
}

// ---------------------------------------------------------------------------
// kernel spec strings: name[:key=value,...]; numbers may carry a "pi" suffix.
//   one | sin | cos2 | hilbert
//   twolevel:a=1.5,arc=0.5pi      two-level band kernel, node aligned
//   atom:c=0,r=0.25pi             H^1 atom (odd triangular bump)
//   gs:alpha=2                    lacunary near-critical density kernel
// Parse errors carry the 1-based character position inside the spec.
// ---------------------------------------------------------------------------

struct KernelSpecError {
    int position = 0;
    std::string message;
};

namespace detail {

inline bool parse_number_pi(const std::string& text, double& out) {
    std::string body = text;
    double factor = 1.0;
    if (body.size() >= 2 && body.substr(body.size() - 2) == "pi") {
        factor = kPi;
        body = body.substr(0, body.size() - 2);
        if (body.empty()) body = "1";
    }
    std::size_t used = 0;
    try {
        out = std::stod(body, &used) * factor;
    } catch (...) {
        return false;
    }
    return used == body.size();
}

}  // namespace detail

// Builds the two-level kernel: +a on the node-aligned arc of length `arc`
// centered at angle 0, -a on the antipodal arc, 0 elsewhere.
inline SphereKernel two_level_kernel(double amplitude, double arc, std::size_t nodes) {
    std::vector<double> v(nodes, 0.0);
    for (std::size_t m = 0; m < nodes; ++m) {
        const double theta = std::remainder(kTwoPi * static_cast<double>(m) / static_cast<double>(nodes), kTwoPi);
        if (theta >= -arc / 2 && theta < arc / 2) v[m] = amplitude;
    }
    for (std::size_t m = 0; m < nodes; ++m)
        if (v[m] > 0.0) v[(m + nodes / 2) % nodes] = -amplitude;
    SphereKernel k = SphereKernel::nodes(std::move(v));
    k.cancellation_enforced = true;
    return k;
}

inline SphereKernel parse_kernel_spec(const std::string& spec, std::size_t nodes, KernelSpecError* error,
                                      bool validate_only = false) {
    auto fail = [&](int pos, const std::string& msg) {
        if (error) *error = {pos, msg};
        return SphereKernel{};
    };
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    std::map<std::string, std::pair<double, int>> params;  // value, position
    if (colon != std::string::npos) {
        std::size_t pos = colon + 1;
        while (pos < spec.size()) {
            std::size_t next = spec.find(',', pos);
            if (next == std::string::npos) next = spec.size();
            const std::string item = spec.substr(pos, next - pos);
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos)
                return fail(static_cast<int>(pos) + 1, "expected key=value in kernel spec");
            const std::string key = item.substr(0, eq);
            double value = 0.0;
            if (!detail::parse_number_pi(item.substr(eq + 1), value))
                return fail(static_cast<int>(pos + eq + 1) + 1, "malformed number in kernel spec");
            params[key] = {value, static_cast<int>(pos) + 1};
            pos = next + 1;
        }
    }
    auto take = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        if (it == params.end()) return fallback;
        const double v = it->second.first;
        params.erase(it);
        return v;
    };
    SphereKernel k;
    if (name == "one") {
        if (!validate_only) k = SphereKernel::from_function(nodes, [](double) { return 1.0; });
    } else if (name == "sin") {
        if (!validate_only) {
            k = SphereKernel::from_function(nodes, [](double t) { return std::sin(t); });
            k.cancellation_enforced = true;
        }
    } else if (name == "cos2") {
        if (!validate_only) {
            k = SphereKernel::from_function(nodes, [](double t) { return std::cos(2 * t); });
            k.cancellation_enforced = true;
        }
    } else if (name == "hilbert") {
        if (!validate_only) {
            k = SphereKernel::pair(1.0 / kPi, -1.0 / kPi);
            k.cancellation_enforced = true;
        }
    } else if (name == "twolevel") {
        const double a = take("a", 1.5);
        const double arc = take("arc", kPi / 2);
        if (!(a > 0.0)) return fail(1, "twolevel amplitude must be positive");
        if (!(arc > 0.0 && arc < kPi)) return fail(1, "twolevel arc must lie in (0, pi)");
        if (!validate_only) k = two_level_kernel(a, arc, nodes);
    } else if (name == "atom") {
        const double c = take("c", 0.0);
        const double r = take("r", kPi / 4);
        if (!(r > 0.0 && r <= kPi / 2)) return fail(1, "atom radius must lie in (0, pi/2]");
        if (!validate_only) k = h1_atom(c, r, nodes);
    } else if (name == "gs") {
        const double alpha = take("alpha", 2.0);
        if (!(alpha > 0.0)) return fail(1, "gs alpha must be positive");
        const double n_override = take("nodes", 0.0);
        const std::size_t gs_nodes = n_override > 0.0 ? static_cast<std::size_t>(n_override)
                                                      : (std::size_t(1) << 24);
        if (!validate_only) k = gs_lacunary_kernel(alpha, gs_nodes);
    } else {
        return fail(1, "unknown kernel name '" + name + "'");
    }
    if (!params.empty())
        return fail(params.begin()->second.second,
                    "unknown kernel parameter '" + params.begin()->first + "'");
    if (error) *error = {};
    return k;
}

// ---------------------------------------------------------------------------
// sectioned key = value config text
// ---------------------------------------------------------------------------

struct ParsedConfig {
    ExperimentConfig config;
    std::vector<ConfigError> errors;
    bool ok() const { return errors.empty(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<double> parse_list(const std::string& text, bool& ok) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    ok = true;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        if (!parse_number_pi(trim(item), v)) {
            ok = false;
            return out;
        }
        out.push_back(v);
    }
    if (out.empty()) ok = false;
    return out;
}

}  // namespace detail

inline ParsedConfig parse_config(const std::string& text) {
    ParsedConfig result;
    ExperimentConfig& cfg = result.config;
    std::map<std::string, int> seen;  // section.key -> first line
    std::string section;
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                result.errors.push_back({line_no, 0, "unterminated section header"});
                continue;
            }
            section = line.substr(1, line.size() - 2);
            static const char* known[] = {"experiment", "grid", "kernel", "scales", "sweep", "output"};
            bool found = false;
            for (const char* s : known) found = found || section == s;
            if (!found) result.errors.push_back({line_no, 0, "unknown section [" + section + "]"});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            result.errors.push_back({line_no, 0, "expected key = value"});
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::string full = section + "." + key;
        if (auto it = seen.find(full); it != seen.end()) {
            result.errors.push_back({line_no, 0, "duplicate key '" + full + "' (first set at line " +
                                                     std::to_string(it->second) + ")"});
            continue;
        }
        seen[full] = line_no;

        auto bad_number = [&]() { result.errors.push_back({line_no, 0, "malformed number for '" + full + "'"}); };
        auto as_double = [&](double& slot) {
            double v = 0.0;
            if (detail::parse_number_pi(value, v)) slot = v;
            else bad_number();
        };
        auto as_long = [&](auto& slot) {
            double v = 0.0;
            if (detail::parse_number_pi(value, v) && v == std::floor(v)) slot = static_cast<std::decay_t<decltype(slot)>>(v);
            else bad_number();
        };

        if (full == "experiment.name") {
            cfg.experiment = value;
        } else if (full == "experiment.seed") {
            as_long(cfg.seed);
        } else if (full == "experiment.trials") {
            as_long(cfg.trials);
        } else if (full == "grid.n") {
            as_long(cfg.grid_dim);
        } else if (full == "grid.N") {
            as_long(cfg.grid_points);
        } else if (full == "grid.L") {
            as_double(cfg.half_width);
        } else if (full == "kernel.spec") {
            cfg.kernel_spec = value;
        } else if (full == "kernel.nodes") {
            as_long(cfg.kernel_nodes);
        } else if (full == "scales.j_min") {
            as_long(cfg.j_min);
        } else if (full == "scales.j_max") {
            as_long(cfg.j_max);
        } else if (full == "scales.samples_per_octave") {
            as_long(cfg.samples_per_octave);
        } else if (full == "sweep.lambda") {
            bool ok = true;
            auto list = detail::parse_list(value, ok);
            if (ok) cfg.lambdas = list;
            else bad_number();
        } else if (full == "sweep.q") {
            bool ok = true;
            auto list = detail::parse_list(value, ok);
            if (ok) cfg.qs = list;
            else bad_number();
        } else if (full == "sweep.p") {
            bool ok = true;
            auto list = detail::parse_list(value, ok);
            if (ok) cfg.ps = list;
            else bad_number();
        } else if (full == "sweep.rotation_nodes") {
            as_long(cfg.rotation_nodes);
        } else if (full == "output.dir") {
            cfg.out_dir = value;
        } else if (full == "output.formats") {
            cfg.formats.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = detail::trim(item);
                if (item != "csv" && item != "json" && item != "svg") {
                    result.errors.push_back({line_no, 0, "unknown format '" + item + "'"});
                } else {
                    cfg.formats.push_back(item);
                }
            }
        } else {
            result.errors.push_back({line_no, 0, "unknown key '" + full + "'"});
        }
    }

    // range validation
    if (cfg.grid_dim != 1 && cfg.grid_dim != 2)
        result.errors.push_back({seen.count("grid.n") ? seen["grid.n"] : 0, 0, "grid.n must be 1 or 2"});
    if (cfg.grid_points < 8 || !fft::is_power_of_two(cfg.grid_points))
        result.errors.push_back({seen.count("grid.N") ? seen["grid.N"] : 0, 0,
                                 "grid.N must be a power of two >= 8"});
    if (!(cfg.half_width > 0.0))
        result.errors.push_back({seen.count("grid.L") ? seen["grid.L"] : 0, 0, "grid.L must be positive"});
    if (cfg.kernel_nodes < 8 || !fft::is_power_of_two(cfg.kernel_nodes))
        result.errors.push_back({seen.count("kernel.nodes") ? seen["kernel.nodes"] : 0, 0,
                                 "kernel.nodes must be a power of two >= 8"});
    if (cfg.j_max < cfg.j_min)
        result.errors.push_back({seen.count("scales.j_max") ? seen["scales.j_max"] : 0, 0,
                                 "scales.j_max must be >= scales.j_min"});
    if (cfg.samples_per_octave < 1)
        result.errors.push_back({seen.count("scales.samples_per_octave") ? seen["scales.samples_per_octave"] : 0,
                                 0, "scales.samples_per_octave must be >= 1"});
    if (cfg.trials < 0)
        result.errors.push_back({seen.count("experiment.trials") ? seen["experiment.trials"] : 0, 0,
                                 "experiment.trials must be >= 0"});
    for (double q : cfg.qs)
        if (!(q >= 1.0))
            result.errors.push_back({seen.count("sweep.q") ? seen["sweep.q"] : 0, 0, "sweep.q entries must be >= 1"});
    for (double l : cfg.lambdas)
        if (!(l > 0.0))
            result.errors.push_back({seen.count("sweep.lambda") ? seen["sweep.lambda"] : 0, 0,
                                     "sweep.lambda entries must be positive"});
    if (!cfg.experiment.empty()) {
        bool known = false;
        for (const auto& n : experiment_names()) known = known || n == cfg.experiment;
        if (!known)
            result.errors.push_back({seen.count("experiment.name") ? seen["experiment.name"] : 0, 0,
                                     "unknown experiment '" + cfg.experiment + "'"});
    }
    KernelSpecError kerr;
    parse_kernel_spec(cfg.kernel_spec, cfg.kernel_nodes, &kerr, /*validate_only=*/true);
    if (!kerr.message.empty())
        result.errors.push_back({seen.count("kernel.spec") ? seen["kernel.spec"] : 0, kerr.position,
                                 "kernel spec: " + kerr.message});
    return result;
}

}  // namespace varjump

#endif  // VARJUMP_CONFIG_HPP
