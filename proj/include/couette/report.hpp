#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "couette/manifest.hpp"

namespace couette {

/// Margin convention: a check passes iff margin >= 0. For "value <= bound"
/// checks the margin is (bound - value) / |bound|.
struct CheckRecord {
    std::string id;
    std::string anchor;  // stable identifier of the mathematical fact
    double margin = 0;
    bool pass = false;
    bool informational = false;
    double value = 0;
    double bound = 0;
    std::string details;
};

struct CampaignReport {
    std::vector<CheckRecord> checks;

    void add(const std::string& id, const std::string& anchor, double value, double bound,
             bool informational = false, const std::string& details = "") {
        CheckRecord r;
        r.id = id;
        r.anchor = anchor;
        r.value = value;
        r.bound = bound;
        r.margin = (bound - value) / std::max(std::abs(bound), 1e-300);
        r.pass = value <= bound;
        r.informational = informational;
        r.details = details;
        checks.push_back(std::move(r));
    }

    bool aggregate_pass() const {
        for (const auto& c : checks)
            if (!c.informational && !c.pass) return false;
        return true;
    }
};

/// Six significant digits, round-trip stable.
inline double round6(double v) {
    if (v == 0 || !std::isfinite(v)) return v;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::atof(buf);
}

inline std::string render_text(const CampaignReport& rep) {
    std::vector<CheckRecord> sorted = rep.checks;
    std::sort(sorted.begin(), sorted.end(),
              [](const CheckRecord& a, const CheckRecord& b) { return a.margin < b.margin; });
    std::ostringstream out;
    out << "check                                    margin      value       bound     status\n";
    for (const auto& c : sorted) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-40s %10.4g %11.5g %11.5g  %s%s\n", c.id.c_str(),
                      c.margin, c.value, c.bound, c.pass ? "pass" : "FAIL",
                      c.informational ? " (info)" : "");
        out << line;
    }
    out << (rep.aggregate_pass() ? "aggregate: pass\n" : "aggregate: FAIL\n");
    return out.str();
}

inline nlohmann::ordered_json report_json(const RunManifest& manifest, const CampaignReport& rep) {
    nlohmann::ordered_json j;
    j["schema_version"] = RunManifest::kSchemaVersion;
    j["subcommand"] = manifest.subcommand;
    j["seed"] = manifest.seed;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : manifest.params) params[key] = value;
    j["parameters"] = params;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    std::vector<CheckRecord> sorted = rep.checks;
    std::sort(sorted.begin(), sorted.end(),
              [](const CheckRecord& a, const CheckRecord& b) { return a.margin < b.margin; });
    for (const auto& c : sorted) {
        nlohmann::ordered_json e;
        e["id"] = c.id;
        e["anchor"] = c.anchor;
        e["margin"] = round6(c.margin);
        e["value"] = round6(c.value);
        e["bound"] = round6(c.bound);
        e["pass"] = c.pass;
        e["informational"] = c.informational;
        if (!c.details.empty()) e["details"] = c.details;
        checks.push_back(e);
    }
    j["checks"] = checks;
    j["aggregate_pass"] = rep.aggregate_pass();
    return j;
}

/// write-temp-rename so interrupted runs never leave partial files
inline void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

/// CSV with the manifest echoed as '#' comment lines before the header.
class CsvWriter {
  public:
    explicit CsvWriter(const RunManifest& manifest, std::vector<std::string> columns)
        : columns_(std::move(columns)) {
        body_ << manifest.echo_lines();
        for (size_t i = 0; i < columns_.size(); ++i)
            body_ << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i)
            body_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }
    static std::string num(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        return buf;
    }
    std::string str() const { return body_.str(); }

  private:
    std::vector<std::string> columns_;
    std::ostringstream body_;
};

}  // namespace couette
