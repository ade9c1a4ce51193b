#include "hspace/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hspace/builtins.hpp"

namespace hspace {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (const char c : text) {
        if (c == ',') {
            out.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    const std::string last = trim(current);
    if (!last.empty() || !out.empty()) out.push_back(last);
    return out;
}

double parse_number(const std::string& text, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || trim(end) != "")
        throw ConfigError("expected a number for " + context + ", got '" + text + "'");
    return v;
}

struct RawSection {
    std::string kind;
    std::string name;
    std::map<std::string, std::string> keys;
    int line = 0;
};

std::vector<RawSection> tokenize(const std::string& text, std::map<std::string, std::string>& top) {
    std::vector<RawSection> sections;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    RawSection* current = nullptr;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            std::istringstream header(t.substr(1, t.size() - 2));
            RawSection s;
            s.line = lineno;
            header >> s.kind >> s.name;
            std::string extra;
            if (s.kind.empty() || s.name.empty() || (header >> extra))
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": section header must be [kind name]");
            sections.push_back(std::move(s));
            current = &sections.back();
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        auto& target = current ? current->keys : top;
        if (!target.emplace(key, value).second)
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return sections;
}

void check_keys(const RawSection& s, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : s.keys)
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in [" + s.kind + " " + s.name + "]");
}

const std::string& require_key(const RawSection& s, const std::string& key) {
    auto it = s.keys.find(key);
    if (it == s.keys.end())
        throw ConfigError("missing key '" + key + "' in [" + s.kind + " " + s.name + "]");
    return it->second;
}

MetricChart metric_from_section(const RawSection& s) {
    if (s.keys.count("builtin")) {
        check_keys(s, {"builtin", "domain", "guard", "orientation"});
        MetricChart m = builtin_metric(s.keys.at("builtin"));
        m.name = s.name;
        if (s.keys.count("domain")) m.domain = parse_ranges(s.keys.at("domain"), "[metric " + s.name + "] domain");
        if (s.keys.count("guard")) m.guard = parse_predicate(s.keys.at("guard"));
        if (s.keys.count("orientation"))
            m.orientation = parse_number(s.keys.at("orientation"), "orientation");
        return m;
    }
    check_keys(s, {"coords", "components", "orientation", "guard", "domain"});
    const std::vector<std::string> coords = split_list(require_key(s, "coords"));
    const std::vector<std::string> comp_sources = split_list(require_key(s, "components"));
    std::vector<ExprPtr> comps;
    comps.reserve(comp_sources.size());
    for (const std::string& src : comp_sources) {
        try {
            comps.push_back(parse_expression(src));
        } catch (const SyntaxError& e) {
            throw ConfigError("[metric " + s.name + "] component '" + src + "': " + e.what());
        }
    }
    const int dim = static_cast<int>(coords.size());
    if (static_cast<int>(comps.size()) != dim * (dim + 1) / 2)
        throw ConfigError("[metric " + s.name + "] expected " + std::to_string(dim * (dim + 1) / 2) +
                          " upper-triangle components, got " + std::to_string(comps.size()));
    double orientation = 1.0;
    if (s.keys.count("orientation")) orientation = parse_number(s.keys.at("orientation"), "orientation");
    MetricChart m = make_metric(s.name, coords, comps, orientation);
    if (s.keys.count("guard")) m.guard = parse_predicate(s.keys.at("guard"));
    if (s.keys.count("domain")) {
        m.domain = parse_ranges(s.keys.at("domain"), "[metric " + s.name + "] domain");
        if (m.domain.dim() != dim)
            throw ConfigError("[metric " + s.name + "] domain dimension mismatch");
    }
    return m;
}

WeylStructure weyl_from_section(const RawSection& s, const Config& cfg) {
    if (s.keys.count("builtin")) {
        check_keys(s, {"builtin"});
        WeylStructure w = builtin_weyl(s.keys.at("builtin"));
        w.name = s.name;
        return w;
    }
    check_keys(s, {"metric", "alpha"});
    const std::string& mname = require_key(s, "metric");
    auto it = cfg.metrics.find(mname);
    if (it == cfg.metrics.end())
        throw ConfigError("[weyl " + s.name + "] references unknown metric '" + mname + "'");
    if (it->second.dim != 3)
        throw ConfigError("[weyl " + s.name + "] base metric must be 3-dimensional");
    WeylStructure w;
    w.name = s.name;
    w.h = it->second;
    w.alpha = {num(0.0), num(0.0), num(0.0)};
    if (s.keys.count("alpha")) {
        const std::vector<std::string> parts = split_list(s.keys.at("alpha"));
        if (parts.size() != 3)
            throw ConfigError("[weyl " + s.name + "] alpha needs exactly 3 components");
        for (int i = 0; i < 3; ++i) w.alpha[static_cast<std::size_t>(i)] = parse_expression(parts[static_cast<std::size_t>(i)]);
    }
    return w;
}

SurfacePatch surface_from_section(const RawSection& s) {
    if (s.keys.count("builtin")) {
        check_keys(s, {"builtin", "domain"});
        // keep the built-in identity so seed tables resolve
        SurfacePatch patch = builtin_surface(s.keys.at("builtin"));
        if (s.keys.count("domain"))
            patch.domain = parse_ranges(s.keys.at("domain"), "[surface " + s.name + "] domain");
        return patch;
    }
    check_keys(s, {"z1", "z2", "z3", "z4", "domain"});
    SurfacePatch patch;
    patch.name = s.name;
    const char* zkeys[] = {"z1", "z2", "z3", "z4"};
    for (int i = 0; i < 4; ++i)
        patch.z[static_cast<std::size_t>(i)] = parse_expression(require_key(s, zkeys[i]));
    patch.domain = parse_ranges(require_key(s, "domain"), "[surface " + s.name + "] domain");
    if (patch.domain.dim() != 4)
        throw ConfigError("[surface " + s.name + "] domain needs 4 ranges (u_re, u_im, v_re, v_im)");
    return patch;
}

MapChart map_from_section(const RawSection& s) {
    check_keys(s, {"coords", "components", "kinds", "guard", "domain"});
    const std::vector<std::string> coords = split_list(require_key(s, "coords"));
    const std::vector<std::string> comp_sources = split_list(require_key(s, "components"));
    std::vector<ExprPtr> comps;
    for (const std::string& src : comp_sources) comps.push_back(parse_expression(src));
    std::vector<ComponentKind> kinds(comps.size(), ComponentKind::ComplexPair);
    if (s.keys.count("kinds")) {
        const std::vector<std::string> parts = split_list(s.keys.at("kinds"));
        if (parts.size() != comps.size())
            throw ConfigError("[map " + s.name + "] kinds list does not match components");
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i] == "real") {
                kinds[i] = ComponentKind::Real;
            } else if (parts[i] == "complex") {
                kinds[i] = ComponentKind::ComplexPair;
            } else {
                throw ConfigError("[map " + s.name + "] kind must be real or complex, got '" +
                                  parts[i] + "'");
            }
        }
    }
    MapChart m = make_map(s.name, coords, comps, kinds);
    if (s.keys.count("guard")) m.guard = parse_predicate(s.keys.at("guard"));
    if (s.keys.count("domain"))
        m.domain = parse_ranges(s.keys.at("domain"), "[map " + s.name + "] domain");
    return m;
}

const std::map<std::string, std::set<std::string>>& check_key_table() {
    static const std::map<std::string, std::set<std::string>> table{
        {"contact", {"surface", "samples", "tolerance"}},
        {"holomorphy", {"surface", "samples", "tolerance"}},
        {"incidence-roundtrip", {"surface", "samples", "tolerance"}},
        {"submersion-formula", {"surface", "reference", "domain", "samples", "tolerance"}},
        {"pipeline-verdict",
         {"surface", "metric", "domain", "samples", "tension_tolerance", "hwc_tolerance"}},
        {"boundary-hwc", {"surface", "metric", "domain", "guard", "samples", "tolerance"}},
        {"nijenhuis-positivity", {"surface", "metric", "domain", "samples", "tolerance"}},
        {"nijenhuis-best", {"surface", "metric", "domain", "samples", "tolerance"}},
        {"isotropic-frobenius", {"surface", "metric", "guard", "domain", "samples", "tolerance"}},
        {"sky-tangency", {"samples", "tolerance"}},
        {"einstein", {"metric", "samples", "tolerance"}},
        {"scalar-curvature", {"metric", "expected", "samples", "tolerance"}},
        {"weyl-flat", {"metric", "samples", "tolerance"}},
        {"weyl-asd", {"metric", "samples", "tolerance"}},
        {"einstein-weyl", {"weyl", "samples", "tolerance"}},
        {"weyl-scalar", {"weyl", "expected", "samples", "tolerance"}},
        {"calderbank-einstein", {"weyl", "samples", "tolerance"}},
        {"calderbank-scalar", {"weyl", "expected", "samples", "tolerance"}},
        {"calderbank-asd", {"weyl", "samples", "tolerance"}},
        {"calderbank-flatness", {"weyl", "samples", "tolerance"}},
        {"pole", {"weyl", "samples", "tolerance", "t_probe"}},
        {"retract-verdict", {"weyl", "samples", "tension_tolerance", "hwc_tolerance"}},
        {"retract-dilation", {"weyl", "expected", "samples", "tolerance"}},
        {"compose-verdict", {"weyl", "map", "samples", "tension_tolerance", "hwc_tolerance"}},
        {"jet-oracle", {"samples", "grad_tolerance", "hess_tolerance"}},
        {"quaternion-laws", {"samples", "tolerance"}},
    };
    return table;
}

}  // namespace

Box parse_ranges(const std::string& text, const std::string& context) {
    Box box;
    for (const std::string& part : split_list(text)) {
        const std::size_t dots = part.find("..");
        if (dots == std::string::npos)
            throw ConfigError(context + ": expected lo..hi ranges, got '" + part + "'");
        const double lo = parse_number(trim(part.substr(0, dots)), context);
        const double hi = parse_number(trim(part.substr(dots + 2)), context);
        if (hi < lo) throw ConfigError(context + ": empty range '" + part + "'");
        box.lo.push_back(lo);
        box.hi.push_back(hi);
    }
    if (box.lo.empty()) throw ConfigError(context + ": empty range list");
    return box;
}

const std::string& CheckSpec::require(const std::string& key) const {
    auto it = keys.find(key);
    if (it == keys.end())
        throw ConfigError("check '" + name + "' (" + type + ") is missing key '" + key + "'");
    return it->second;
}

std::optional<std::string> CheckSpec::get(const std::string& key) const {
    auto it = keys.find(key);
    if (it == keys.end()) return std::nullopt;
    return it->second;
}

double CheckSpec::number(const std::string& key, double fallback) const {
    auto it = keys.find(key);
    if (it == keys.end()) return fallback;
    return parse_number(it->second, "check '" + name + "' key '" + key + "'");
}

int CheckSpec::integer(const std::string& key, int fallback) const {
    const double v = number(key, fallback);
    if (v != std::floor(v)) throw ConfigError("check '" + name + "' key '" + key + "' must be an integer");
    return static_cast<int>(v);
}

Config parse_config(const std::string& text) {
    Config cfg;
    cfg.source_text = text;
    std::map<std::string, std::string> top;
    const std::vector<RawSection> sections = tokenize(text, top);
    for (const auto& [key, value] : top) {
        if (key == "version") {
            cfg.version = static_cast<int>(parse_number(value, "version"));
            if (cfg.version != 1) throw ConfigError("unsupported config version " + value);
        } else {
            throw ConfigError("unknown top-level key '" + key + "'");
        }
    }

    // two passes so weyl/map sections can reference metrics declared later
    for (const RawSection& s : sections) {
        if (s.kind == "metric") {
            if (!cfg.metrics.emplace(s.name, metric_from_section(s)).second)
                throw ConfigError("duplicate metric name '" + s.name + "'");
        } else if (s.kind == "surface") {
            if (!cfg.surfaces.emplace(s.name, surface_from_section(s)).second)
                throw ConfigError("duplicate surface name '" + s.name + "'");
        } else if (s.kind == "map") {
            if (!cfg.maps.emplace(s.name, map_from_section(s)).second)
                throw ConfigError("duplicate map name '" + s.name + "'");
        } else if (s.kind != "weyl" && s.kind != "check") {
            throw ConfigError("unknown section kind '" + s.kind + "' at line " +
                              std::to_string(s.line));
        }
    }
    for (const RawSection& s : sections) {
        if (s.kind == "weyl") {
            if (!cfg.weyls.emplace(s.name, weyl_from_section(s, cfg)).second)
                throw ConfigError("duplicate weyl name '" + s.name + "'");
        }
    }
    for (const RawSection& s : sections) {
        if (s.kind != "check") continue;
        CheckSpec spec;
        spec.name = s.name;
        auto it = s.keys.find("type");
        if (it == s.keys.end()) throw ConfigError("[check " + s.name + "] is missing 'type'");
        spec.type = it->second;
        const auto& table = check_key_table();
        auto allowed = table.find(spec.type);
        if (allowed == table.end())
            throw ConfigError("[check " + s.name + "] has unknown type '" + spec.type + "'");
        for (const auto& [key, value] : s.keys) {
            if (key == "type") continue;
            if (!allowed->second.count(key))
                throw ConfigError("unknown key '" + key + "' in [check " + s.name + "]");
            spec.keys.emplace(key, value);
        }
        for (const auto& existing : cfg.checks)
            if (existing.name == spec.name)
                throw ConfigError("duplicate check name '" + spec.name + "'");
        cfg.checks.push_back(std::move(spec));
    }
    return cfg;
}

Config load_config(const std::string& path_or_builtin) {
    if (std::filesystem::exists(path_or_builtin)) {
        std::ifstream in(path_or_builtin, std::ios::binary);
        if (!in) throw IoError("cannot read config file: " + path_or_builtin);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_config(buf.str());
    }
    return parse_config(builtin_config(path_or_builtin));
}

}  // namespace hspace
