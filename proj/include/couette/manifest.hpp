#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace couette {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Plain key=value run description; echoed verbatim into every output so
/// that a run is reproducible from any of its artifacts.
struct RunManifest {
    static constexpr int kSchemaVersion = 1;

    std::string subcommand;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 20240915;
    std::string output_dir = ".";
    bool fixed_epoch = false;
    int workers = 0;

    static RunManifest from_tokens(const std::string& subcommand,
                                   const std::vector<std::string>& tokens) {
        RunManifest m;
        m.subcommand = subcommand;
        for (const auto& tok : tokens) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0)
                throw SchemaError("manifest token is not key=value: '" + tok + "'");
            m.params[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
        return m;
    }

    static RunManifest from_file(const std::string& subcommand, const std::string& path) {
        std::ifstream in(path);
        if (!in) throw SchemaError("cannot open manifest file " + path);
        std::vector<std::string> tokens;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            tokens.push_back(line);
        }
        return from_tokens(subcommand, tokens);
    }

    bool has(const std::string& key) const { return params.count(key) > 0; }

    double get_real(const std::string& key, double fallback) const {
        auto it = params.find(key);
        if (it == params.end()) return fallback;
        try {
            size_t used = 0;
            double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw SchemaError("key '" + key + "' expects a real, got '" + it->second + "'");
        }
    }
    long get_int(const std::string& key, long fallback) const {
        auto it = params.find(key);
        if (it == params.end()) return fallback;
        try {
            size_t used = 0;
            long v = std::stol(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw SchemaError("key '" + key + "' expects an integer, got '" + it->second + "'");
        }
    }
    std::vector<double> get_real_list(const std::string& key, std::vector<double> fallback) const {
        auto it = params.find(key);
        if (it == params.end()) return fallback;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stod(item));
            } catch (...) {
                throw SchemaError("key '" + key + "' expects comma-separated reals");
            }
        }
        if (out.empty()) throw SchemaError("key '" + key + "' is an empty list");
        return out;
    }

    void validate_keys(const std::set<std::string>& allowed) const {
        for (const auto& [key, value] : params)
            if (!allowed.count(key))
                throw SchemaError("unknown key '" + key + "' for subcommand " + subcommand);
    }

    /// '#'-prefixed echo block, stable ordering.
    std::string echo_lines() const {
        std::ostringstream out;
        out << "# subcommand=" << subcommand << "\n";
        out << "# schema_version=" << kSchemaVersion << "\n";
        out << "# seed=" << seed << "\n";
        for (const auto& [key, value] : params) out << "# " << key << "=" << value << "\n";
        return out.str();
    }
};

}  // namespace couette
