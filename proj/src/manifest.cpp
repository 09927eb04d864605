#include "sumlab/manifest.hpp"

#include "sumlab/lacunary.hpp"
#include "sumlab/prime.hpp"
#include "sumlab/romanoff.hpp"
#include "sumlab/singular.hpp"
#include "sumlab/window.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sumlab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const std::map<std::string, std::vector<std::string>>& required_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"scan", {"X", "theta", "samples", "seed", "r"}},
        {"singular-avg", {"r", "X"}},
        {"prime-dev", {"X", "y", "samples", "seed"}},
        {"hunt", {"X", "window", "prime_bound"}},
        {"proportion", {"X", "theta", "prime_bound", "threshold", "samples", "seed"}},
        {"gaps", {"limit"}},
        {"lacunary-count", {"r", "X"}},
    };
    return keys;
}

std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string canonical_form(const ExperimentManifest& m) {
    std::ostringstream os;
    os << "name=" << m.name << "\nkind=" << m.kind << "\n";
    for (const auto& [k, v] : m.params) os << k << "=" << v << "\n"; // map is sorted
    return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

LacunaryParams params_from(const ExperimentManifest& m) {
    std::vector<double> r = m.get_double_list("r");
    LacunaryParams params = make_params(r);
    if (m.has("lambda") && m.get_string("lambda") != "auto") {
        params.lambda = m.get_double("lambda");
    }
    return params;
}

struct ExperimentOutput {
    std::vector<std::pair<std::string, std::string>> metrics;
    std::vector<std::pair<std::string, std::string>> files; // name -> content
};

ExperimentOutput run_scan(const ExperimentManifest& m) {
    ScanConfig config;
    config.X = m.get_u64("X");
    config.theta = m.get_double("theta");
    config.sample_count = m.get_u64("samples");
    config.seed = m.get_u64("seed");
    LacunarySet set = LacunarySet::generate(params_from(m), config.X);
    ScanResult res = scan(config, set);

    std::ostringstream csv;
    csv << "# schema: sumlab.windows.v1\n";
    csv << "x,h,R,Q,S,cs_bound\n";
    for (const WindowRecord& rec : res.records) {
        csv << rec.x << ',' << rec.h << ',' << rec.rep_sum << ',' << rec.rep_sq_sum << ','
            << rec.element_count << ',' << format_double(rec.cs_bound) << '\n';
    }

    ExperimentOutput out;
    out.files.emplace_back(m.name + ".windows.csv", csv.str());
    out.metrics = {
        {"windows", std::to_string(res.records.size())},
        {"set_size", std::to_string(set.size())},
        {"h", std::to_string(config.window_length())},
        {"mean_R_over_h", format_double(res.rep_over_h.mean)},
        {"sd_R_over_h", format_double(res.rep_over_h.stddev)},
        {"mean_Q_over_h", format_double(res.sq_over_h.mean)},
        {"mean_S_over_h", format_double(res.elements_over_h.mean)},
        {"cs_tight_fraction", format_double(res.cs_tight_fraction)},
    };
    return out;
}

ExperimentOutput run_singular_avg(const ExperimentManifest& m) {
    uint64_t X = m.get_u64("X");
    LacunarySet set = LacunarySet::generate(params_from(m), X);
    DifferenceAverage avg = average_over_differences(set);

    ordered_json j;
    j["X"] = X;
    j["set_size"] = set.size();
    j["total"] = avg.total;
    j["normalized"] = avg.normalized;
    j["divisor_sum_aggregate"] = avg.divisor_sum_aggregate;

    ExperimentOutput out;
    out.files.emplace_back(m.name + ".singular_avg.json", j.dump(2) + "\n");
    out.metrics = {
        {"total", format_double(avg.total)},
        {"normalized", format_double(avg.normalized)},
        {"divisor_sum_aggregate", format_double(avg.divisor_sum_aggregate)},
    };
    return out;
}

ExperimentOutput run_prime_dev(const ExperimentManifest& m) {
    DeviationSummary dev = prime_window_deviation(m.get_u64("X"), m.get_u64("y"),
                                                  m.get_u64("samples"), m.get_u64("seed"));
    ordered_json j;
    j["X"] = dev.X;
    j["y"] = dev.y;
    j["samples"] = dev.sample_count;
    j["quantiles"] = {{"p50", dev.p50}, {"p90", dev.p90}, {"p95", dev.p95},
                      {"p99", dev.p99}, {"max", dev.max}};
    j["exceed_half_fraction"] = dev.exceed_half_fraction;

    ExperimentOutput out;
    out.files.emplace_back(m.name + ".prime_dev.json", j.dump(2) + "\n");
    out.metrics = {
        {"p50", format_double(dev.p50)},
        {"p99", format_double(dev.p99)},
        {"max", format_double(dev.max)},
        {"exceed_half_fraction", format_double(dev.exceed_half_fraction)},
    };
    return out;
}

RomanoffConvention convention_from(const ExperimentManifest& m) {
    return RomanoffConvention{static_cast<int>(m.get_u64_or("kmin", 1))};
}

ExperimentOutput run_hunt(const ExperimentManifest& m) {
    SmoothModulus d = build_modulus(m.get_double("prime_bound"));
    auto hunt =
        hunt_large_multiplicity(m.get_u64("X"), m.get_u64("window"), d, convention_from(m));
    ExperimentOutput out;
    if (!hunt) {
        out.metrics = {{"multiples_scanned", "0"}, {"n", "n/a"}, {"multiplicity", "n/a"}};
        return out;
    }
    out.metrics = {
        {"modulus", std::to_string(d.modulus)},
        {"n", std::to_string(hunt->n)},
        {"multiplicity", std::to_string(hunt->multiplicity)},
        {"window_average", format_double(hunt->window_average)},
        {"multiples_scanned", std::to_string(hunt->multiples_scanned)},
    };
    return out;
}

ExperimentOutput run_proportion(const ExperimentManifest& m) {
    SmoothModulus d = build_modulus(m.get_double("prime_bound"));
    ProportionResult res = positive_proportion_scan(
        m.get_u64("X"), m.get_double("theta"), d, m.get_u64("threshold"), m.get_u64("samples"),
        m.get_u64("seed"), convention_from(m));
    ExperimentOutput out;
    out.metrics = {
        {"modulus", std::to_string(d.modulus)},
        {"fraction", format_double(res.fraction)},
        {"hits", std::to_string(res.hits)},
        {"window_sum_mean", format_double(res.window_sum_mean)},
        {"window_sum_max", format_double(res.window_sum_max)},
    };
    return out;
}

ExperimentOutput run_gaps(const ExperimentManifest& m) {
    RepresentableSequence seq =
        enumerate_representable_odds(m.get_u64("limit"), convention_from(m));
    GapStatistics stats = gap_statistics(seq);

    std::ostringstream csv;
    csv << "# schema: sumlab.gaps.v1\n";
    csv << "m,s_m,gap,normalized\n";
    for (size_t i = 0; i < stats.gaps.size(); ++i) {
        csv << i + 1 << ',' << seq.values[i] << ',' << stats.gaps[i] << ','
            << format_double(stats.normalized[i]) << '\n';
    }

    ExperimentOutput out;
    out.files.emplace_back(m.name + ".gaps.csv", csv.str());
    out.metrics = {
        {"members", std::to_string(seq.values.size())},
        {"non_representable", std::to_string(seq.non_representable.size())},
        {"max_gap", std::to_string(stats.max_gap)},
        {"max_gap_at", std::to_string(stats.at_value)},
    };
    return out;
}

ExperimentOutput run_lacunary_count(const ExperimentManifest& m) {
    uint64_t X = m.get_u64("X");
    LacunaryParams params = params_from(m);
    LacunarySet set = LacunarySet::generate(params, X);

    std::ostringstream values;
    ordered_json header;
    header["s"] = params.arity();
    header["r"] = params.r;
    header["lambda"] = params.lambda;
    header["count"] = set.size();
    values << "# " << header.dump() << "\n";
    for (uint64_t v : set.values()) values << v << '\n';

    ExperimentOutput out;
    out.files.emplace_back(m.name + ".lacunary.txt", values.str());
    out.metrics = {
        {"count", std::to_string(set.size())},
        {"lambda", format_double(params.lambda)},
        {"count_over_log2X",
         format_double(static_cast<double>(set.size()) / std::log2(static_cast<double>(X)))},
    };
    return out;
}

} // namespace

ExperimentManifest ExperimentManifest::parse(std::istream& in) {
    ExperimentManifest m;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw UsageError("manifest line " + std::to_string(line_no) +
                             " is not of the form key = value");
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw UsageError("manifest line " + std::to_string(line_no) + " has an empty key");
        }
        if (key == "name") {
            m.name = value;
        } else if (key == "kind") {
            m.kind = value;
        } else if (key == "output") {
            m.output_dir = value;
        } else {
            m.params[key] = value;
        }
    }
    return m;
}

ExperimentManifest ExperimentManifest::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot open manifest " + file.string());
    return parse(in);
}

void ExperimentManifest::validate() const {
    if (name.empty()) throw UsageError("manifest is missing the key: name");
    auto it = required_keys().find(kind);
    if (it == required_keys().end()) {
        throw UsageError("unknown experiment kind: '" + kind + "'");
    }
    for (const std::string& key : it->second) {
        if (!has(key)) {
            throw UsageError("manifest for kind " + kind + " is missing the key: " + key);
        }
    }
}

uint64_t parse_scaled_u64(const std::string& text) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw UsageError("'" + text + "' is not a number");
    }
    if (pos != text.size()) throw UsageError("'" + text + "' is not a number");
    if (!(v >= 0) || v > 9.22e18 || v != std::floor(v)) {
        throw UsageError("'" + text + "' is not a nonnegative 64-bit integer");
    }
    return static_cast<uint64_t>(v);
}

uint64_t ExperimentManifest::get_u64(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw UsageError("missing manifest key: " + key);
    try {
        return parse_scaled_u64(it->second);
    } catch (const UsageError&) {
        throw UsageError("manifest key " + key + ": '" + it->second +
                         "' is not a nonnegative integer");
    }
}

uint64_t ExperimentManifest::get_u64_or(const std::string& key, uint64_t fallback) const {
    return has(key) ? get_u64(key) : fallback;
}

double ExperimentManifest::get_double(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw UsageError("missing manifest key: " + key);
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(it->second, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != it->second.size()) {
        throw UsageError("manifest key " + key + ": '" + it->second + "' is not a number");
    }
    return v;
}

std::string ExperimentManifest::get_string(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw UsageError("missing manifest key: " + key);
    return it->second;
}

std::vector<double> ExperimentManifest::get_double_list(const std::string& key) const {
    std::string text = get_string(key);
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != item.size()) {
            throw UsageError("manifest key " + key + ": '" + item + "' is not a number");
        }
        values.push_back(v);
    }
    if (values.empty()) throw UsageError("manifest key " + key + " is an empty list");
    return values;
}

RunReport run_experiment(const ExperimentManifest& manifest) {
    manifest.validate();
    auto start = std::chrono::steady_clock::now();

    ExperimentOutput output;
    if (manifest.kind == "scan") {
        output = run_scan(manifest);
    } else if (manifest.kind == "singular-avg") {
        output = run_singular_avg(manifest);
    } else if (manifest.kind == "prime-dev") {
        output = run_prime_dev(manifest);
    } else if (manifest.kind == "hunt") {
        output = run_hunt(manifest);
    } else if (manifest.kind == "proportion") {
        output = run_proportion(manifest);
    } else if (manifest.kind == "gaps") {
        output = run_gaps(manifest);
    } else if (manifest.kind == "lacunary-count") {
        output = run_lacunary_count(manifest);
    }

    RunReport report;
    report.manifest = manifest;
    report.input_hash = fnv1a_hex(canonical_form(manifest));
    report.metrics = std::move(output.metrics);

    std::filesystem::create_directories(manifest.output_dir);
    for (const auto& [file, content] : output.files) {
        write_atomic(manifest.output_dir / file, content);
        report.artifacts.push_back(file);
    }

    ordered_json j;
    j["name"] = manifest.name;
    j["kind"] = manifest.kind;
    j["input_hash"] = report.input_hash;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : manifest.params) params[k] = v;
    j["params"] = params;
    ordered_json metrics = ordered_json::object();
    for (const auto& [k, v] : report.metrics) metrics[k] = v;
    j["metrics"] = metrics;
    j["artifacts"] = report.artifacts;
    write_atomic(manifest.output_dir / (manifest.name + ".report.json"), j.dump(2) + "\n");
    report.artifacts.push_back(manifest.name + ".report.json");

    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

Summary emit_summary(const std::vector<RunReport>& reports) {
    if (reports.empty()) throw UsageError("emit_summary requires at least one report");

    struct Row {
        std::string name, kind, metric, value;
    };
    std::vector<Row> rows;
    for (const RunReport& r : reports) {
        if (r.metrics.empty()) {
            rows.push_back({r.manifest.name, r.manifest.kind, "n/a", "n/a"});
            continue;
        }
        for (const auto& [k, v] : r.metrics) {
            rows.push_back({r.manifest.name, r.manifest.kind, k, v});
        }
    }
    size_t w_name = 4, w_kind = 4, w_metric = 6;
    for (const Row& row : rows) {
        w_name = std::max(w_name, row.name.size());
        w_kind = std::max(w_kind, row.kind.size());
        w_metric = std::max(w_metric, row.metric.size());
    }
    std::ostringstream table;
    auto pad = [](const std::string& s, size_t w) { return s + std::string(w - s.size(), ' '); };
    table << pad("name", w_name) << "  " << pad("kind", w_kind) << "  " << pad("metric", w_metric)
          << "  value\n";
    for (const Row& row : rows) {
        table << pad(row.name, w_name) << "  " << pad(row.kind, w_kind) << "  "
              << pad(row.metric, w_metric) << "  " << row.value << '\n';
    }

    ordered_json j = ordered_json::array();
    for (const RunReport& r : reports) {
        ordered_json entry;
        entry["name"] = r.manifest.name;
        entry["kind"] = r.manifest.kind;
        entry["input_hash"] = r.input_hash;
        ordered_json metrics = ordered_json::object();
        for (const auto& [k, v] : r.metrics) metrics[k] = v;
        entry["metrics"] = metrics;
        entry["artifacts"] = r.artifacts;
        j.push_back(entry);
    }

    Summary s;
    s.table = table.str();
    s.json = j.dump(2) + "\n";
    return s;
}

std::vector<RunReport> load_reports(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().filename().string().ends_with(".report.json")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<RunReport> reports;
    for (const auto& file : files) {
        std::ifstream in(file);
        ordered_json j = ordered_json::parse(in, nullptr, true, true);
        RunReport r;
        r.manifest.name = j.value("name", "");
        r.manifest.kind = j.value("kind", "");
        r.input_hash = j.value("input_hash", "");
        if (j.contains("params")) {
            for (const auto& [k, v] : j["params"].items()) {
                r.manifest.params[k] = v.get<std::string>();
            }
        }
        if (j.contains("metrics")) {
            for (const auto& [k, v] : j["metrics"].items()) {
                r.metrics.emplace_back(k, v.get<std::string>());
            }
        }
        if (j.contains("artifacts")) {
            for (const auto& a : j["artifacts"]) r.artifacts.push_back(a.get<std::string>());
        }
        reports.push_back(std::move(r));
    }
    return reports;
}

} // namespace sumlab
