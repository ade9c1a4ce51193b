#pragma once

#include <map>
#include <optional>

#include "hspace/calderbank.hpp"
#include "hspace/twistor.hpp"

namespace hspace {

/// One declared check: a type tag plus its validated key set.
struct CheckSpec {
    std::string name;
    std::string type;
    std::map<std::string, std::string> keys;

    const std::string& require(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
};

struct Config {
    int version = 1;
    std::map<std::string, MetricChart> metrics;
    std::map<std::string, WeylStructure> weyls;
    std::map<std::string, SurfacePatch> surfaces;
    std::map<std::string, MapChart> maps;
    std::vector<CheckSpec> checks;
    std::string source_text;  // digest input
};

/// Parses the sectioned key = value configuration format. Unknown sections
/// or keys raise ConfigError naming the offender.
Config parse_config(const std::string& text);

/// Resolves --config arguments: an existing file path is loaded, otherwise
/// the name must be a built-in suite.
Config load_config(const std::string& path_or_builtin);

Box parse_ranges(const std::string& text, const std::string& context);

}  // namespace hspace
