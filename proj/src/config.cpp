#include "wignerlab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wignerlab/errors.hpp"

namespace wignerlab {

double GaussianInflow::operator()(double v) const
{
    if (amplitude == 0.0) return 0.0;
    const double d = v - center;
    return amplitude * std::exp(-d * d / width);
}

std::vector<Scheme> schemes_of(SchemeSelection selection)
{
    switch (selection) {
        case SchemeSelection::original: return {Scheme::original};
        case SchemeSelection::improved: return {Scheme::improved};
        case SchemeSelection::both: break;
    }
    return {Scheme::original, Scheme::improved};
}

SchemeSelection parse_scheme_selection(std::string_view text)
{
    if (text == "original") return SchemeSelection::original;
    if (text == "improved") return SchemeSelection::improved;
    if (text == "both") return SchemeSelection::both;
    throw ConfigError("scheme must be original, improved or both (got '" + std::string(text) + "')");
}

PotentialProfile RunConfig::profile() const
{
    return PotentialProfile(segments, potential_default, device_length, edge_rule);
}

QuadratureSpec RunConfig::quadrature() const { return QuadratureSpec(ly, dy); }

BoundaryConditions RunConfig::boundary() const
{
    return BoundaryConditions{inflow_left, inflow_right};
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& message)
{
    std::ostringstream os;
    if (line > 0) os << "line " << line << ": ";
    os << message;
    throw ConfigError(os.str());
}

double parse_double(std::string_view token, int line, std::string_view key)
{
    token = trim(token);
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto res = std::from_chars(token.data(), end, value);
    if (token.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(value)) {
        fail(line, "malformed number '" + std::string(token) + "' for " + std::string(key));
    }
    return value;
}

int parse_int(std::string_view token, int line, std::string_view key)
{
    token = trim(token);
    int value = 0;
    const auto* end = token.data() + token.size();
    const auto res = std::from_chars(token.data(), end, value);
    if (token.empty() || res.ec != std::errc() || res.ptr != end) {
        fail(line, "malformed integer '" + std::string(token) + "' for " + std::string(key));
    }
    return value;
}

std::vector<std::string_view> split_list(std::string_view value)
{
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = value.find(',');
        out.push_back(trim(value.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        value.remove_prefix(comma + 1);
    }
    return out;
}

void check_even(int n_v, int line)
{
    if (n_v < 2 || n_v % 2 != 0) {
        fail(line, "N_v must be even and >= 2 (got " + std::to_string(n_v) + ")");
    }
}

GaussianInflow parse_inflow(std::string_view value, int line, std::string_view key)
{
    const auto parts = split_list(value);
    GaussianInflow g;
    if (parts.size() == 1) {
        if (parse_double(parts[0], line, key) != 0.0) {
            fail(line, std::string(key) + " takes 'amplitude, center, width' or 0");
        }
        return g;
    }
    if (parts.size() != 3) fail(line, std::string(key) + " takes 'amplitude, center, width' or 0");
    g.amplitude = parse_double(parts[0], line, key);
    g.center = parse_double(parts[1], line, key);
    g.width = parse_double(parts[2], line, key);
    if (!(g.width > 0.0)) fail(line, std::string(key) + ": Gaussian width must be positive");
    return g;
}

}  // namespace

RunConfig parse_config(std::string_view text)
{
    static const std::set<std::string, std::less<>> known = {
        "device_length", "segment",  "potential_default", "N_x",       "N_v",
        "R_h",           "Ly",       "dy",                "inflow_left", "inflow_right",
        "scheme",        "Nx_levels", "Nv_levels",        "Rh_levels", "slice_x",
        "norm_x",        "edge_rule"};

    RunConfig cfg;
    std::map<std::string, int, std::less<>> seen;  // key -> line
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (!known.contains(key)) fail(line_no, "unknown key '" + std::string(key) + "'");
        if (value.empty()) fail(line_no, "missing value for " + std::string(key));
        if (key != "segment" && seen.contains(key)) {
            fail(line_no, "duplicate key '" + std::string(key) + "'");
        }
        seen.emplace(std::string(key), line_no);

        if (key == "device_length") {
            cfg.device_length = parse_double(value, line_no, key);
            if (!(cfg.device_length > 0.0)) fail(line_no, "device_length must be positive");
        } else if (key == "segment") {
            const auto parts = split_list(value);
            if (parts.size() != 3) fail(line_no, "segment takes 'a, b, value'");
            Segment s{parse_double(parts[0], line_no, key), parse_double(parts[1], line_no, key),
                      parse_double(parts[2], line_no, key)};
            if (s.lo > s.hi) fail(line_no, "segment start exceeds its end");
            cfg.segments.push_back(s);
        } else if (key == "potential_default") {
            cfg.potential_default = parse_double(value, line_no, key);
        } else if (key == "N_x") {
            cfg.n_x = parse_int(value, line_no, key);
            if (*cfg.n_x < 4) fail(line_no, "N_x must be >= 4");
        } else if (key == "N_v") {
            cfg.n_v = parse_int(value, line_no, key);
            check_even(*cfg.n_v, line_no);
        } else if (key == "R_h") {
            cfg.coherence_length = parse_double(value, line_no, key);
            if (!(*cfg.coherence_length > 0.0)) fail(line_no, "R_h must be positive");
        } else if (key == "Ly") {
            cfg.ly = parse_double(value, line_no, key);
            if (!(cfg.ly > 0.0)) fail(line_no, "Ly must be positive");
        } else if (key == "dy") {
            cfg.dy = parse_double(value, line_no, key);
            if (!(cfg.dy > 0.0)) fail(line_no, "dy must be positive");
        } else if (key == "inflow_left") {
            cfg.inflow_left = parse_inflow(value, line_no, key);
        } else if (key == "inflow_right") {
            cfg.inflow_right = parse_inflow(value, line_no, key);
        } else if (key == "scheme") {
            try {
                cfg.scheme = parse_scheme_selection(value);
            } catch (const ConfigError& e) {
                fail(line_no, e.what());
            }
        } else if (key == "Nx_levels") {
            for (auto t : split_list(value)) {
                cfg.nx_levels.push_back(parse_int(t, line_no, key));
                if (cfg.nx_levels.back() < 4) fail(line_no, "Nx_levels entries must be >= 4");
            }
        } else if (key == "Nv_levels") {
            for (auto t : split_list(value)) {
                cfg.nv_levels.push_back(parse_int(t, line_no, key));
                check_even(cfg.nv_levels.back(), line_no);
            }
        } else if (key == "Rh_levels") {
            for (auto t : split_list(value)) {
                cfg.rh_levels.push_back(parse_double(t, line_no, key));
                if (!(cfg.rh_levels.back() > 0.0)) fail(line_no, "Rh_levels entries must be positive");
            }
        } else if (key == "slice_x") {
            for (auto t : split_list(value)) cfg.slice_x.push_back(parse_double(t, line_no, key));
        } else if (key == "norm_x") {
            cfg.norm_x = parse_double(value, line_no, key);
        } else if (key == "edge_rule") {
            if (value == "mean") {
                cfg.edge_rule = EdgeRule::mean;
            } else if (value == "closed") {
                cfg.edge_rule = EdgeRule::closed;
            } else {
                fail(line_no, "edge_rule must be 'mean' or 'closed'");
            }
        }
    }

    auto line_of = [&](std::string_view key) {
        const auto it = seen.find(key);
        return it == seen.end() ? 0 : it->second;
    };

    // Cross-field guards before completeness, so the first reported problem is the real one.
    if (cfg.ly > 0.0) {
        auto alias = [&](double rh, std::string_view key) {
            if (!(cfg.ly < rh)) {
                std::ostringstream os;
                os << "aliasing guard violated: Ly = " << cfg.ly << " must be smaller than R_h = " << rh;
                fail(std::max(line_of("Ly"), line_of(key)), os.str());
            }
        };
        if (cfg.coherence_length) alias(*cfg.coherence_length, "R_h");
        for (double rh : cfg.rh_levels) alias(rh, "Rh_levels");
    }
    if (cfg.ly > 0.0 && cfg.dy > 0.0) {
        try {
            (void)cfg.quadrature();
        } catch (const ConfigError& e) {
            fail(std::max(line_of("Ly"), line_of("dy")), e.what());
        }
    }
    if (cfg.nv_levels.size() != cfg.rh_levels.size()) {
        fail(std::max(line_of("Nv_levels"), line_of("Rh_levels")),
             "Nv_levels and Rh_levels must have the same number of entries");
    }
    if (cfg.n_v.has_value() != cfg.coherence_length.has_value()) {
        fail(std::max(line_of("N_v"), line_of("R_h")), "N_v and R_h must be given together");
    }
    try {
        (void)cfg.profile();
    } catch (const ConfigError& e) {
        if (cfg.device_length > 0.0) fail(line_of("segment"), e.what());
    }

    for (const char* key : {"device_length", "Ly", "dy"}) {
        if (!seen.contains(key)) fail(0, std::string("missing required key '") + key + "'");
    }
    if (!cfg.n_x && cfg.nx_levels.empty()) fail(0, "missing required key 'N_x' (or Nx_levels)");
    if (!cfg.n_v && cfg.nv_levels.empty()) fail(0, "missing required key 'N_v' (or Nv_levels)");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace wignerlab
