// manifest.hpp
// Manifest-driven experiment runs: a flat key = value manifest names one
// experiment kind plus its parameters; running it writes deterministic CSV
// and JSON artifacts and yields a summary report. Identical manifests
// reproduce byte-identical artifacts.

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sumlab {

// Thrown for malformed manifests and missing or ill-typed parameters; the CLI
// maps it to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentManifest {
    std::string name;
    std::string kind; // scan, singular-avg, prime-dev, hunt, proportion, gaps, lacunary-count
    std::filesystem::path output_dir = ".";
    std::map<std::string, std::string> params;

    static ExperimentManifest load(const std::filesystem::path& file);
    static ExperimentManifest parse(std::istream& in);

    // Throws UsageError naming the offending key or kind.
    void validate() const;

    bool has(const std::string& key) const { return params.count(key) != 0; }
    // Typed getters; throw UsageError naming the key on absence or bad format.
    uint64_t get_u64(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
    uint64_t get_u64_or(const std::string& key, uint64_t fallback) const;
};

struct RunReport {
    ExperimentManifest manifest;
    std::string input_hash; // FNV-1a of the canonicalized manifest
    std::vector<std::pair<std::string, std::string>> metrics;
    std::vector<std::string> artifacts; // file names written under output_dir
    double duration_seconds = 0.0;      // console-only; never serialized
};

// Dispatches to the experiment, writes artifacts atomically, returns the
// report and writes <name>.report.json next to the artifacts.
RunReport run_experiment(const ExperimentManifest& manifest);

struct Summary {
    std::string table; // aligned text
    std::string json;  // machine-readable twin
};

Summary emit_summary(const std::vector<RunReport>& reports);

// Loads every *.report.json under dir (sorted by filename) back into reports.
std::vector<RunReport> load_reports(const std::filesystem::path& dir);

// Accepts plain and scientific notation ("100000", "1e8"); requires the value
// to be a nonnegative integer that fits 64 bits.
uint64_t parse_scaled_u64(const std::string& text);

} // namespace sumlab
