#include "navflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace navflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct RawConfig {
    std::string source;
    std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        int line = 0;
        auto it = entries.find(key);
        if (it != entries.end()) line = it->second.second;
        throw config_error(source + ":" + std::to_string(line) + ": " + msg);
    }

    bool has(const std::string& key) const { return entries.count(key) > 0; }

    std::string get(const std::string& key) const {
        auto it = entries.find(key);
        if (it == entries.end())
            throw config_error(source + ": missing required key '" + key + "'");
        return it->second.first;
    }

    std::string get_or(const std::string& key, const std::string& def) const {
        if (!has(key)) return def;
        return get(key);
    }

    double get_double(const std::string& key) const {
        std::string v = get(key);
        try {
            std::size_t pos = 0;
            double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            fail(key, "expected a number for '" + key + "', got '" + v + "'");
        }
    }

    long get_long(const std::string& key) const {
        double d = get_double(key);
        if (d != std::floor(d)) fail(key, "expected an integer for '" + key + "'");
        return static_cast<long>(d);
    }

    std::vector<double> get_list(const std::string& key) const {
        std::istringstream in(get(key));
        std::vector<double> out;
        std::string tok;
        while (in >> tok) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(tok, &pos));
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                fail(key, "expected numbers for '" + key + "', got '" + tok + "'");
            }
        }
        if (out.empty()) fail(key, "'" + key + "' must not be empty");
        return out;
    }
};

const char* const kKnownKeys[] = {
    "mode",          "dimension",   "domain.kind", "domain.halfwidths",
    "domain.radius", "scheme.kind", "scheme.theta", "scheme.rho",
    "x",             "x_list",      "s_list",      "rho_list",
    "replicates",    "g_exponent",  "h_exponent",  "eps",
    "master_seed",   "out_dir",     "render",
    "lambda.kind",   "lambda.value", "lambda.offset", "lambda.gradient",
    "lambda.table",  "lambda.file",
    "mu.kind",       "mu.value",    "mu.offset",   "mu.gradient",
    "mu.table",      "mu.file",
};

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys)
        if (key == k) return true;
    return false;
}

RawConfig parse_raw(const std::string& text, const std::string& source) {
    RawConfig raw;
    raw.source = source;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(source + ":" + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(source + ":" + std::to_string(lineno) + ": empty key");
        if (!known_key(key))
            throw config_error(source + ":" + std::to_string(lineno) + ": unknown key '" + key +
                               "'");
        raw.entries[key] = {value, lineno};
    }
    return raw;
}

Point point_from_list(const std::vector<double>& v, int dim, const RawConfig& raw,
                      const std::string& key) {
    if (static_cast<int>(v.size()) != dim)
        raw.fail(key, "'" + key + "' needs " + std::to_string(dim) + " coordinates");
    return {v[0], v[1], dim == 3 ? v[2] : 0.0};
}

IntensityField parse_field(const RawConfig& raw, const std::string& prefix, int dim,
                           const Domain& domain, const std::string& base_dir) {
    std::string kind = raw.get_or(prefix + ".kind", "constant");
    if (kind == "constant") {
        double c = raw.has(prefix + ".value") ? raw.get_double(prefix + ".value") : 1.0;
        if (!(c >= 0)) raw.fail(prefix + ".value", "intensity must be nonnegative");
        return IntensityField::constant(c);
    }
    if (kind == "affine") {
        double offset = raw.get_double(prefix + ".offset");
        Point grad = point_from_list(raw.get_list(prefix + ".gradient"), dim, raw,
                                     prefix + ".gradient");
        return IntensityField::affine(offset, grad);
    }
    if (kind == "radial") {
        std::istringstream in(raw.get(prefix + ".table"));
        std::vector<std::pair<double, double>> knots;
        std::string tok;
        while (in >> tok) {
            auto colon = tok.find(':');
            if (colon == std::string::npos)
                raw.fail(prefix + ".table", "expected 'radius:value' pairs");
            try {
                knots.emplace_back(std::stod(tok.substr(0, colon)),
                                   std::stod(tok.substr(colon + 1)));
            } catch (const std::exception&) {
                raw.fail(prefix + ".table", "bad table entry '" + tok + "'");
            }
        }
        try {
            return IntensityField::radial_profile(std::move(knots));
        } catch (const error& e) {
            raw.fail(prefix + ".table", e.what());
        }
    }
    if (kind == "grid") {
        std::filesystem::path p = raw.get(prefix + ".file");
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        try {
            return IntensityField::grid_from_csv(domain, p.string());
        } catch (const io_error&) {
            throw;
        } catch (const error& e) {
            raw.fail(prefix + ".file", e.what());
        }
    }
    raw.fail(prefix + ".kind", "unknown field kind '" + kind + "'");
}

std::vector<Point> parse_point_list(const RawConfig& raw, const std::string& key, int dim) {
    std::string text = raw.get(key);
    std::vector<Point> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto semi = text.find(';', pos);
        std::string part =
            trim(semi == std::string::npos ? text.substr(pos) : text.substr(pos, semi - pos));
        if (!part.empty()) {
            std::istringstream in(part);
            std::vector<double> v;
            double d;
            while (in >> d) v.push_back(d);
            out.push_back(point_from_list(v, dim, raw, key));
        }
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    if (out.empty()) raw.fail(key, "'" + key + "' must not be empty");
    return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name,
                                   const std::string& base_dir) {
    RawConfig raw = parse_raw(text, source_name);
    ExperimentConfig cfg;

    std::string mode = raw.get("mode");
    if (mode == "directed")
        cfg.mode = SurfaceMode::Directed;
    else if (mode == "radial")
        cfg.mode = SurfaceMode::Radial;
    else
        raw.fail("mode", "mode must be 'directed' or 'radial'");

    cfg.dimension = static_cast<int>(raw.get_long("dimension"));
    if (cfg.dimension != 2 && cfg.dimension != 3)
        raw.fail("dimension", "dimension must be 2 or 3");

    std::string dkind = raw.get("domain.kind");
    try {
        if (dkind == "box") {
            auto hw = raw.get_list("domain.halfwidths");
            Point h = point_from_list(hw, cfg.dimension, raw, "domain.halfwidths");
            cfg.domain = Domain::box(cfg.dimension, h.x, h.y, h.z);
        } else if (dkind == "ball") {
            cfg.domain = Domain::ball(cfg.dimension, raw.get_double("domain.radius"));
        } else {
            raw.fail("domain.kind", "domain.kind must be 'box' or 'ball'");
        }
    } catch (const config_error&) {
        throw;
    } catch (const error& e) {
        raw.fail("domain.kind", e.what());
    }

    cfg.lambda = parse_field(raw, "lambda", cfg.dimension, cfg.domain, base_dir);
    cfg.mu = parse_field(raw, "mu", cfg.dimension, cfg.domain, base_dir);

    std::string skind = raw.get("scheme.kind");
    if (skind == "dst")
        cfg.scheme = NavigationScheme::dst();
    else if (skind == "cone_directed")
        cfg.scheme = NavigationScheme::cone_directed(raw.get_double("scheme.theta"));
    else if (skind == "rst")
        cfg.scheme = NavigationScheme::rst();
    else if (skind == "cone_radial")
        cfg.scheme = NavigationScheme::cone_radial(raw.get_double("scheme.theta"));
    else if (skind == "min_hop")
        cfg.scheme = NavigationScheme::min_hop(raw.get_double("scheme.rho"));
    else
        raw.fail("scheme.kind", "unknown scheme '" + skind + "'");

    cfg.x = point_from_list(raw.get_list("x"), cfg.dimension, raw, "x");
    if (raw.has("x_list")) cfg.x_list = parse_point_list(raw, "x_list", cfg.dimension);
    cfg.s_list = raw.get_list("s_list");
    if (raw.has("rho_list")) cfg.rho_list = raw.get_list("rho_list");
    cfg.replicates = static_cast<int>(raw.get_long("replicates"));
    if (raw.has("g_exponent")) cfg.g_exponent = raw.get_double("g_exponent");
    if (raw.has("h_exponent")) cfg.h_exponent = raw.get_double("h_exponent");
    if (raw.has("eps")) cfg.eps = raw.get_double("eps");
    cfg.master_seed = static_cast<std::uint64_t>(raw.get_long("master_seed"));
    cfg.out_dir = raw.get_or("out_dir", "out");
    if (raw.has("render")) {
        std::string r = raw.get("render");
        if (r == "true" || r == "1")
            cfg.render = true;
        else if (r == "false" || r == "0")
            cfg.render = false;
        else
            raw.fail("render", "render must be true or false");
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string base = std::filesystem::path(path).parent_path().string();
    if (base.empty()) base = ".";
    return parse_config_text(buf.str(), path, base);
}

void ExperimentConfig::validate() const {
    auto bad = [](const std::string& msg) { throw config_error("config: " + msg); };
    if (dimension != domain.dim()) bad("domain dimension mismatch");
    bool radial_scheme = scheme.radial();
    if (radial_scheme != (mode == SurfaceMode::Radial))
        bad("scheme and mode disagree (directed schemes need mode=directed)");
    if (!domain.contains(x)) bad("observation location x must lie inside the domain");
    if (mode == SurfaceMode::Radial && norm(x) == 0)
        bad("radial mode needs x distinct from the origin");
    for (const Point& p : x_list) {
        if (!domain.contains(p)) bad("x_list location outside the domain");
        if (mode == SurfaceMode::Radial && norm(p) == 0) bad("x_list location at the origin");
    }
    if (replicates < 2) bad("replicates must be at least 2");
    if (s_list.empty()) bad("s_list must not be empty");
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        if (!(s_list[i] >= 1)) bad("s values must be at least 1");
        if (i > 0 && !(s_list[i] > s_list[i - 1])) bad("s_list must be strictly increasing");
    }
    if (!(g_exponent > 0 && g_exponent < 1)) bad("g_exponent must lie in (0,1)");
    if (!(h_exponent > 0 && h_exponent < 1)) bad("h_exponent must lie in (0,1)");
    if (!(h_exponent < g_exponent)) bad("h_exponent must be smaller than g_exponent");
    if (!(eps >= 0)) bad("eps must be nonnegative");
    for (double r : rho_list)
        if (!(r > 0)) bad("rho values must be positive");
    if (scheme.kind == SchemeKind::MinHopBoundedRadial && !(scheme.range > 0))
        bad("min_hop scheme needs a positive scheme.rho");
    if ((scheme.kind == SchemeKind::ConeDirected || scheme.kind == SchemeKind::ConeRadial) &&
        !(scheme.half_angle > 0 && scheme.half_angle <= 1.5707963267948966 + 1e-15))
        bad("cone schemes need scheme.theta in (0, pi/2]");
    if (render && dimension != 2) bad("unsupported render: only d=2 patterns can be drawn");
}

}  // namespace navflow
