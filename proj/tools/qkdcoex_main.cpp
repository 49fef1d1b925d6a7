// Command-line front end: parses a scenario configuration, dispatches the
// analysis subcommands and emits machine-readable CSV or JSON.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <random>

#include <CLI11.hpp>

#include "qkdcoex/calibration.hpp"
#include "qkdcoex/config.hpp"
#include "qkdcoex/report.hpp"
#include "qkdcoex/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitModelError = 3;
constexpr int kExitNoKey = 4;

struct GlobalOptions {
    std::string config_path;
    std::string output_path = "-";
    std::string format = "csv";
    std::vector<std::string> overrides;
    unsigned long long seed = 1;
    bool verbose = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qkdcoex::ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const GlobalOptions& opt, const std::string& text) {
    if (opt.output_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(opt.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + opt.output_path);
    out << text;
}

qkdcoex::ParsedScenario load_scenario(const GlobalOptions& opt) {
    auto parsed = qkdcoex::parse_config(read_file(opt.config_path), opt.overrides);
    if (opt.verbose) {
        for (const auto& line : parsed.provenance) std::cerr << "default: " << line << '\n';
    }
    return parsed;
}

std::string key_value_csv(const nlohmann::json& j) {
    std::ostringstream out;
    out << "key,value\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_structured()) {
            for (auto inner = it->begin(); inner != it->end(); ++inner)
                out << it.key() << '.' << inner.key() << ',' << inner->dump() << '\n';
        } else {
            out << it.key() << ',' << it->dump() << '\n';
        }
    }
    return out.str();
}

int run_budget(const GlobalOptions& opt) {
    const auto parsed = load_scenario(opt);
    const auto budget = qkdcoex::LossBudget::build(parsed.scenario.link,
                                                   parsed.scenario.receiver.temporal_table_row_db);
    write_output(opt, opt.format == "json" ? qkdcoex::budget_json(budget).dump(2) + "\n"
                                           : qkdcoex::budget_csv(budget));
    return kExitOk;
}

int run_evaluate(const GlobalOptions& opt, bool stochastic) {
    const auto parsed = load_scenario(opt);
    qkdcoex::ScenarioResult result;
    if (stochastic) {
        parsed.scenario.validate();
        std::mt19937_64 rng(opt.seed);
        result = qkdcoex::evaluate_with(parsed.scenario,
                                        qkdcoex::compute_temporal(parsed.scenario.receiver),
                                        qkdcoex::TallyMode::poisson, &rng);
    } else {
        result = qkdcoex::evaluate(parsed.scenario);
    }
    if (opt.format == "json") {
        write_output(opt, qkdcoex::result_json(result).dump(2) + "\n");
    } else {
        const double launch = parsed.scenario.plan.channels.empty()
                                  ? -std::numeric_limits<double>::infinity()
                                  : parsed.scenario.plan.total_launch_dbm();
        std::ostringstream out;
        out << qkdcoex::kSweepHeader << '\n' << qkdcoex::sweep_row(launch, result) << '\n';
        write_output(opt, out.str());
    }
    return kExitOk;
}

int run_sweep(const GlobalOptions& opt, const std::string& param, double from, double to,
              double step) {
    const auto parsed = load_scenario(opt);
    qkdcoex::SweepParameter p;
    if (param == "launch_power") p = qkdcoex::SweepParameter::launch_power;
    else if (param == "fiber_length") p = qkdcoex::SweepParameter::fiber_length;
    else throw qkdcoex::ConfigError("sweep: --param must be launch_power or fiber_length");
    const auto points = qkdcoex::sweep(parsed.scenario, p, from, to, step);
    if (opt.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& pt : points) {
            nlohmann::json j = qkdcoex::result_json(pt.result);
            j["parameter_value"] = pt.parameter_value;
            arr.push_back(j);
        }
        write_output(opt, arr.dump(2) + "\n");
    } else {
        write_output(opt, qkdcoex::sweep_csv(points, p, parsed.scenario));
    }
    return kExitOk;
}

int run_boundary(const GlobalOptions& opt, bool grid, double from, double to, double step) {
    const auto parsed = load_scenario(opt);
    if (grid) {
        const auto points = qkdcoex::boundary_vs_length(parsed.scenario, from, to, step);
        if (opt.format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& pt : points) {
                nlohmann::json j = qkdcoex::boundary_json(pt.boundary);
                j["fiber_length_km"] = pt.length_km;
                arr.push_back(j);
            }
            write_output(opt, arr.dump(2) + "\n");
        } else {
            std::ostringstream out;
            out << "fiber_length_km,max_tolerable_launch_dbm,has_key,unbounded\n";
            for (const auto& pt : points) {
                out << qkdcoex::fmt_num(pt.length_km) << ','
                    << qkdcoex::fmt_num(pt.boundary.launch_dbm) << ','
                    << (pt.boundary.has_key ? "true" : "false") << ','
                    << (pt.boundary.unbounded ? "true" : "false") << '\n';
            }
            write_output(opt, out.str());
        }
        return kExitOk;
    }
    const auto b = qkdcoex::max_tolerable_launch_power(parsed.scenario);
    write_output(opt, opt.format == "json"
                          ? qkdcoex::boundary_json(b).dump(2) + "\n"
                          : key_value_csv(qkdcoex::boundary_json(b)));
    if (!b.has_key) {
        std::cerr << "boundary: no positive key anywhere in the search bracket\n";
        return kExitNoKey;
    }
    return kExitOk;
}

int run_calibrate(const GlobalOptions& opt, const std::string& write_config_path) {
    auto parsed = load_scenario(opt);
    const auto report = qkdcoex::calibrate(parsed.scenario, parsed.targets);
    const auto j = qkdcoex::calibration_json(report);
    write_output(opt, opt.format == "json" ? j.dump(2) + "\n" : key_value_csv(j));
    if (!write_config_path.empty()) {
        std::ofstream out(write_config_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + write_config_path);
        out << qkdcoex::serialize_config(parsed.scenario, parsed.targets);
    }
    if (!report.converged) {
        std::cerr << "calibrate: " << report.diagnostic << '\n';
        return kExitNoKey;
    }
    return kExitOk;
}

int run_ideal(const GlobalOptions& opt) {
    const auto parsed = load_scenario(opt);
    const auto cmp = qkdcoex::ideal_comparison(parsed.scenario);
    const auto j = qkdcoex::ideal_json(cmp);
    write_output(opt, opt.format == "json" ? j.dump(2) + "\n" : key_value_csv(j));
    if (!cmp.baseline.has_key) {
        std::cerr << "ideal: baseline scenario yields no key\n";
        return kExitNoKey;
    }
    return kExitOk;
}

int run_compare(const GlobalOptions& opt, const std::string& literature_path) {
    const auto parsed = load_scenario(opt);
    const auto literature = qkdcoex::load_literature_csv(literature_path);
    const auto result = qkdcoex::evaluate(parsed.scenario);
    const std::vector<qkdcoex::LiteratureRow> simulated{
        qkdcoex::simulated_row(parsed.scenario, result)};
    if (opt.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        auto push = [&arr](const qkdcoex::LiteratureRow& r) {
            arr.push_back({{"variable", r.variable},
                           {"band", r.band},
                           {"fiber_length_km", r.fiber_km},
                           {"att_quantum_db", r.att_db},
                           {"att_estimated", r.att_estimated},
                           {"launch_power_dbm", r.launch_dbm},
                           {"skr_bps", r.skr_bps},
                           {"finite_key", r.finite_key},
                           {"reference", r.reference}});
        };
        for (const auto& r : literature) push(r);
        for (const auto& r : simulated) push(r);
        write_output(opt, arr.dump(2) + "\n");
    } else {
        write_output(opt, qkdcoex::comparison_csv(literature, simulated));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DV-QKD / DWDM coexistence simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opt;
    app.add_option("-c,--config", opt.config_path, "scenario configuration file")->required();
    app.add_option("-o,--output", opt.output_path, "output path ('-' for stdout)");
    app.add_option("-f,--format", opt.format, "output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--set", opt.overrides, "override: section.key=value (repeatable)");
    app.add_option("--seed", opt.seed, "random seed for stochastic modes");
    app.add_flag("-v,--verbose", opt.verbose, "echo defaulted configuration keys");

    auto* budget = app.add_subcommand("budget", "itemized receiver loss table");
    auto* evaluate = app.add_subcommand("evaluate", "single end-to-end scenario result");
    bool stochastic = false;
    evaluate->add_flag("--stochastic", stochastic,
                       "Poisson-sample the block tallies with --seed");

    auto* sweep = app.add_subcommand("sweep", "scan launch power or fiber length");
    std::string sweep_param = "launch_power";
    double sweep_from = 0.0;
    double sweep_to = 0.0;
    double sweep_step = 1.0;
    sweep->add_option("--param", sweep_param, "launch_power | fiber_length");
    sweep->add_option("--from", sweep_from, "range start")->required();
    sweep->add_option("--to", sweep_to, "range end")->required();
    sweep->add_option("--step", sweep_step, "grid step")->required();

    auto* boundary = app.add_subcommand("boundary", "maximum tolerable launch power");
    double len_from = 0.0;
    double len_to = 0.0;
    double len_step = 10.0;
    auto* lf = boundary->add_option("--length-from", len_from, "fiber-length grid start (km)");
    boundary->add_option("--length-to", len_to, "fiber-length grid end (km)");
    boundary->add_option("--length-step", len_step, "fiber-length grid step (km)");

    auto* calibrate = app.add_subcommand("calibrate", "fit free parameters to targets");
    std::string write_config_path;
    calibrate->add_option("--write-config", write_config_path,
                          "write the calibrated configuration to this path");

    auto* ideal = app.add_subcommand("ideal", "ideal-system gain decomposition");

    auto* compare = app.add_subcommand("compare", "merge with the literature table");
    std::string literature_path = "data/literature_comparison.csv";
    compare->add_option("--literature", literature_path, "literature CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (budget->parsed()) return run_budget(opt);
        if (evaluate->parsed()) return run_evaluate(opt, stochastic);
        if (sweep->parsed()) return run_sweep(opt, sweep_param, sweep_from, sweep_to, sweep_step);
        if (boundary->parsed())
            return run_boundary(opt, lf->count() > 0, len_from, len_to, len_step);
        if (calibrate->parsed()) return run_calibrate(opt, write_config_path);
        if (ideal->parsed()) return run_ideal(opt);
        if (compare->parsed()) return run_compare(opt, literature_path);
    } catch (const qkdcoex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return kExitModelError;
    }
    return kExitOk;
}
