// sumlab command line: direct access to the sieve, the lacunary set, the
// window statistics, the singular series, and the power-of-two representation
// experiments, plus manifest-driven runs.

#include "sumlab/kernels.hpp"
#include "sumlab/lacunary.hpp"
#include "sumlab/manifest.hpp"
#include "sumlab/prime.hpp"
#include "sumlab/romanoff.hpp"
#include "sumlab/singular.hpp"
#include "sumlab/window.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace sumlab;

uint64_t as_u64(const std::string& text) {
    return parse_scaled_u64(text);
}

std::vector<double> parse_r_list(const std::string& text) {
    std::vector<double> r;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        double v = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("bad exponent list: " + text);
        r.push_back(v);
    }
    return r;
}

LacunaryParams resolve_params(const std::string& r_text, const std::string& lambda_text) {
    LacunaryParams params = make_params(parse_r_list(r_text));
    if (lambda_text != "auto") {
        size_t pos = 0;
        params.lambda = std::stod(lambda_text, &pos);
        if (pos != lambda_text.size()) {
            throw std::invalid_argument("--lambda must be 'auto' or a number");
        }
    }
    return params;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct CliOptions {
    std::string r = "2,2";
    std::string lambda = "auto";
    std::string x, lo, hi, y, h, window, limit, samples, threshold, delta;
    std::string out, manifest_file, dir;
    std::string seed = "42";
    double theta = 0.5;
    double prime_bound = 17;
    int kmin = 1;
    uint64_t mod = 0, res = 0;
    int count = 4;
    int r_int = 5;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"short-interval statistics of primes plus a lacunary set"};
    app.require_subcommand(1);
    CliOptions o;

    auto* sieve_cmd = app.add_subcommand("sieve", "emit the primes in [lo, hi)");
    sieve_cmd->add_option("--lo", o.lo)->required();
    sieve_cmd->add_option("--hi", o.hi)->required();
    sieve_cmd->add_option("--out", o.out)->required();
    sieve_cmd->callback([&] {
        uint64_t lo = as_u64(o.lo), hi = as_u64(o.hi);
        std::ostringstream body;
        body << "# schema: sumlab.primes.v1\n";
        uint64_t count = 0;
        uint64_t cur = lo;
        while (cur < hi) {
            uint64_t end = cur + std::min(hi - cur, kSegmentSpanLimit);
            PrimeSegment seg = PrimeSegment::sieve(cur, end);
            seg.for_each_prime([&](uint64_t p) {
                body << p << '\n';
                ++count;
            });
            cur = end;
        }
        write_file(o.out, body.str());
        std::cout << count << " primes written to " << o.out << "\n";
    });

    auto* pi_cmd = app.add_subcommand("pi", "count primes up to x, optionally in a progression");
    pi_cmd->add_option("--x", o.x)->required();
    auto* mod_opt = pi_cmd->add_option("--mod", o.mod);
    pi_cmd->add_option("--res", o.res)->needs(mod_opt);
    pi_cmd->callback([&] {
        uint64_t x = as_u64(o.x);
        uint64_t count =
            o.mod != 0 ? count_primes_in_ap(0, x, o.mod, o.res) : count_primes_in(0, x);
        std::cout << count << "\n";
    });

    auto* lac_cmd = app.add_subcommand("lacunary", "enumerate the truncated lacunary set");
    lac_cmd->add_option("--r", o.r)->required();
    lac_cmd->add_option("--X", o.x)->required();
    lac_cmd->add_option("--lambda", o.lambda);
    lac_cmd->add_option("--out", o.out)->required();
    lac_cmd->callback([&] {
        LacunaryParams params = resolve_params(o.r, o.lambda);
        LacunarySet set = LacunarySet::generate(params, as_u64(o.x));
        ordered_json header;
        header["s"] = params.arity();
        header["r"] = params.r;
        header["lambda"] = params.lambda;
        header["count"] = set.size();
        std::ostringstream body;
        body << "# " << header.dump() << "\n";
        for (uint64_t v : set.values()) body << v << '\n';
        write_file(o.out, body.str());
        std::cout << header.dump() << "\n";
    });

    auto* scan_cmd = app.add_subcommand("scan", "window statistics over sampled short intervals");
    scan_cmd->add_option("--X", o.x)->required();
    scan_cmd->add_option("--theta", o.theta)->required();
    scan_cmd->add_option("--samples", o.samples)->required();
    scan_cmd->add_option("--seed", o.seed);
    scan_cmd->add_option("--r", o.r);
    scan_cmd->add_option("--lambda", o.lambda);
    scan_cmd->add_option("--out", o.out)->required();
    scan_cmd->callback([&] {
        ScanConfig config;
        config.X = as_u64(o.x);
        config.theta = o.theta;
        config.sample_count = as_u64(o.samples);
        config.seed = as_u64(o.seed);
        LacunarySet set = LacunarySet::generate(resolve_params(o.r, o.lambda), config.X);
        ScanResult res = scan(config, set);
        std::ostringstream csv;
        csv << "# schema: sumlab.windows.v1\n";
        csv << "x,h,R,Q,S,cs_bound\n";
        char buf[64];
        for (const WindowRecord& rec : res.records) {
            std::snprintf(buf, sizeof buf, "%.10g", rec.cs_bound);
            csv << rec.x << ',' << rec.h << ',' << rec.rep_sum << ',' << rec.rep_sq_sum << ','
                << rec.element_count << ',' << buf << '\n';
        }
        write_file(o.out, csv.str());
        ordered_json j;
        j["windows"] = res.records.size();
        j["h"] = config.window_length();
        j["set_size"] = set.size();
        j["R_over_h"] = {{"min", res.rep_over_h.min}, {"max", res.rep_over_h.max},
                         {"mean", res.rep_over_h.mean}, {"sd", res.rep_over_h.stddev}};
        j["Q_over_h"] = {{"min", res.sq_over_h.min}, {"max", res.sq_over_h.max},
                         {"mean", res.sq_over_h.mean}, {"sd", res.sq_over_h.stddev}};
        j["S_over_h"] = {{"min", res.elements_over_h.min}, {"max", res.elements_over_h.max},
                         {"mean", res.elements_over_h.mean}, {"sd", res.elements_over_h.stddev}};
        j["cs_tight_fraction"] = res.cs_tight_fraction;
        std::cout << j.dump(2) << "\n";
    });

    auto* dev_cmd = app.add_subcommand("prime-dev", "short-interval prime count deviations");
    dev_cmd->add_option("--X", o.x)->required();
    dev_cmd->add_option("--y", o.y)->required();
    dev_cmd->add_option("--samples", o.samples)->required();
    dev_cmd->add_option("--seed", o.seed);
    dev_cmd->add_option("--out", o.out);
    dev_cmd->callback([&] {
        DeviationSummary dev =
            prime_window_deviation(as_u64(o.x), as_u64(o.y), as_u64(o.samples), as_u64(o.seed));
        ordered_json j;
        j["X"] = dev.X;
        j["y"] = dev.y;
        j["samples"] = dev.sample_count;
        j["quantiles"] = {{"p50", dev.p50}, {"p90", dev.p90}, {"p95", dev.p95},
                          {"p99", dev.p99}, {"max", dev.max}};
        j["exceed_half_fraction"] = dev.exceed_half_fraction;
        if (!o.out.empty()) write_file(o.out, j.dump(2) + "\n");
        std::cout << j.dump(2) << "\n";
    });

    auto* sing_cmd = app.add_subcommand("singular", "prime-pair singular series at one shift");
    sing_cmd->add_option("--delta", o.delta)->required();
    sing_cmd->callback([&] {
        int64_t delta = std::stoll(o.delta);
        SingularValue sv = singular_series(delta);
        ordered_json j;
        j["delta"] = sv.delta;
        j["value"] = sv.value;
        std::cout << j.dump(2) << "\n";
    });

    auto* avg_cmd = app.add_subcommand("singular-avg", "singular series averaged over differences");
    avg_cmd->add_option("--r", o.r);
    avg_cmd->add_option("--X", o.x)->required();
    avg_cmd->add_option("--lambda", o.lambda);
    avg_cmd->callback([&] {
        uint64_t X = as_u64(o.x);
        LacunarySet set = LacunarySet::generate(resolve_params(o.r, o.lambda), X);
        DifferenceAverage avg = average_over_differences(set);
        ordered_json j;
        j["X"] = X;
        j["set_size"] = set.size();
        j["total"] = avg.total;
        j["normalized"] = avg.normalized;
        j["divisor_sum_aggregate"] = avg.divisor_sum_aggregate;
        std::cout << j.dump(2) << "\n";
    });

    auto* pairs_cmd = app.add_subcommand("pairs", "prime pairs in a window vs the sieve bound");
    pairs_cmd->set_help_flag("--help"); // frees -h for the window length
    pairs_cmd->add_option("--y", o.y)->required();
    pairs_cmd->add_option("-h,--h", o.h)->required();
    pairs_cmd->add_option("--delta", o.delta)->required();
    pairs_cmd->callback([&] {
        PairCount pc = pair_count_vs_prediction(as_u64(o.y), as_u64(o.h), std::stoll(o.delta));
        ordered_json j;
        j["count"] = pc.count;
        j["prediction"] = pc.prediction;
        j["ratio"] = pc.ratio;
        std::cout << j.dump(2) << "\n";
    });

    auto* hunt_cmd = app.add_subcommand("hunt", "largest representation count over multiples");
    hunt_cmd->add_option("--X", o.x)->required();
    hunt_cmd->add_option("--window", o.window)->required();
    hunt_cmd->add_option("--prime-bound", o.prime_bound)->required();
    hunt_cmd->add_option("--kmin", o.kmin);
    hunt_cmd->callback([&] {
        SmoothModulus d = build_modulus(o.prime_bound);
        auto hunt = hunt_large_multiplicity(as_u64(o.x), as_u64(o.window), d,
                                            RomanoffConvention{o.kmin});
        ordered_json j;
        j["modulus"] = d.modulus;
        j["ratio"] = d.ratio;
        if (hunt) {
            j["n"] = hunt->n;
            j["multiplicity"] = hunt->multiplicity;
            j["window_average"] = hunt->window_average;
            j["multiples_scanned"] = hunt->multiples_scanned;
        } else {
            j["multiples_scanned"] = 0;
        }
        std::cout << j.dump(2) << "\n";
    });

    auto* prop_cmd = app.add_subcommand("proportion", "windows holding a high-multiplicity value");
    prop_cmd->add_option("--X", o.x)->required();
    prop_cmd->add_option("--theta", o.theta)->required();
    prop_cmd->add_option("--prime-bound", o.prime_bound)->required();
    prop_cmd->add_option("--threshold", o.threshold)->required();
    prop_cmd->add_option("--samples", o.samples)->required();
    prop_cmd->add_option("--seed", o.seed);
    prop_cmd->add_option("--kmin", o.kmin);
    prop_cmd->callback([&] {
        SmoothModulus d = build_modulus(o.prime_bound);
        ProportionResult res = positive_proportion_scan(
            as_u64(o.x), o.theta, d, as_u64(o.threshold), as_u64(o.samples), as_u64(o.seed),
            RomanoffConvention{o.kmin});
        ordered_json j;
        j["modulus"] = d.modulus;
        j["fraction"] = res.fraction;
        j["hits"] = res.hits;
        j["samples"] = res.sample_count;
        j["window_sum_mean"] = res.window_sum_mean;
        j["window_sum_min"] = res.window_sum_min;
        j["window_sum_max"] = res.window_sum_max;
        std::cout << j.dump(2) << "\n";
    });

    auto* gaps_cmd = app.add_subcommand("gaps", "gaps between representable odd numbers");
    gaps_cmd->add_option("--limit", o.limit)->required();
    gaps_cmd->add_option("--kmin", o.kmin);
    gaps_cmd->add_option("--out", o.out)->required();
    gaps_cmd->callback([&] {
        RepresentableSequence seq =
            enumerate_representable_odds(as_u64(o.limit), RomanoffConvention{o.kmin});
        GapStatistics stats = gap_statistics(seq);
        std::ostringstream csv;
        csv << "# schema: sumlab.gaps.v1\n";
        csv << "m,s_m,gap,normalized\n";
        char buf[64];
        for (size_t i = 0; i < stats.gaps.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.10g", stats.normalized[i]);
            csv << i + 1 << ',' << seq.values[i] << ',' << stats.gaps[i] << ',' << buf << '\n';
        }
        write_file(o.out, csv.str());
        ordered_json j;
        j["members"] = seq.values.size();
        j["non_representable"] = seq.non_representable.size();
        j["max_gap"] = stats.max_gap;
        j["max_gap_at"] = stats.at_value;
        std::cout << j.dump(2) << "\n";
    });

    auto* adm_cmd = app.add_subcommand("admissible", "power-of-two shift sets and their residues");
    adm_cmd->add_option("--r", o.r_int)->required();
    adm_cmd->add_option("--count", o.count);
    adm_cmd->callback([&] {
        AdmissibleShiftSet set =
            admissible_shift_set(static_cast<uint32_t>(o.r_int), static_cast<uint32_t>(o.count));
        ordered_json j;
        j["exponent_lcm"] = set.exponent_lcm;
        j["exponents"] = set.exponents;
        j["verified"] = set.verified;
        ordered_json checks = ordered_json::array();
        for (const auto& c : set.checks) {
            checks.push_back({{"p", c.p},
                              {"distinct_residues", c.distinct_residues},
                              {"omits_class", c.omits_class},
                              {"informational", c.informational}});
        }
        j["checks"] = checks;
        std::cout << j.dump(2) << "\n";
    });

    auto* run_cmd = app.add_subcommand("run", "run one experiment from a manifest");
    run_cmd->add_option("--manifest", o.manifest_file)->required();
    run_cmd->callback([&] {
        RunReport report = run_experiment(ExperimentManifest::load(o.manifest_file));
        std::cout << "ran " << report.manifest.name << " (" << report.manifest.kind << ") in "
                  << report.duration_seconds << " s; hash " << report.input_hash << "\n";
        for (const auto& [k, v] : report.metrics) std::cout << "  " << k << " = " << v << "\n";
    });

    auto* sum_cmd = app.add_subcommand("summarize", "summarize the reports in a directory");
    sum_cmd->add_option("--dir", o.dir)->required();
    sum_cmd->callback([&] {
        std::vector<RunReport> reports = load_reports(o.dir);
        Summary summary = emit_summary(reports);
        write_file((std::filesystem::path(o.dir) / "summary.json").string(), summary.json);
        std::cout << summary.table;
    });

    auto* backend_cmd = app.add_subcommand("backend", "print the active kernel backend");
    backend_cmd->callback([&] { std::cout << kernels::active_backend() << "\n"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
