// plagate: command-line front end for the PLA power-gating toolkit.
//
// Exit codes: 0 success, 1 internal error, 2 user or configuration error.

#include "plagate/config.hpp"
#include "plagate/device.hpp"
#include "plagate/errors.hpp"
#include "plagate/netlist.hpp"
#include "plagate/pla.hpp"
#include "plagate/power.hpp"
#include "plagate/transient.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace plagate;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUser = 2;

std::string g6(double v) { return fmt::format("{:.6g}", v); }

struct CommonOptions {
    std::string config_path;
    std::map<std::string, std::string> overrides;
    std::string granularity = "per-array";
    double unit_width = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Device/run config file (key = value)")->check(CLI::ExistingFile);
        for (const auto& key : ToolConfig::keys())
            cmd->add_option("--" + key, overrides[key], "Overrides config key " + key);
        cmd->add_option("--granularity", granularity, "Sleep-domain granularity")
            ->check(CLI::IsMember({"per-array", "shared"}));
        cmd->add_option("--unit_width", unit_width, "Width contributed per macro input");
    }

    ToolConfig resolve(const CLI::App* cmd) const {
        ToolConfig config = config_path.empty() ? ToolConfig{} : load_config(config_path);
        for (const auto& key : ToolConfig::keys())
            if (cmd->count("--" + key) > 0) config.set(key, overrides.at(key));
        config.validate();
        return config;
    }

    SynthesisOptions synthesis() const {
        if (!(unit_width > 0)) throw ConfigError("unit_width must be positive");
        return {granularity == "shared" ? DomainGranularity::single_shared : DomainGranularity::per_array, unit_width};
    }
};

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("output directory '" + dir + "' is not writable");
    return fs::path(dir);
}

template <typename Fn>
std::string to_text(Fn&& fn) {
    std::ostringstream out;
    fn(out);
    return out.str();
}

PowerParams power_params(const ToolConfig& config) { return {config.supply, config.footer}; }

// Both variants of the same personality.
struct Designs {
    GatedNetlist conventional;
    GatedNetlist gated;
};

Designs build_designs(const PlaPersonality& pla, const ToolConfig& config, const SynthesisOptions& options) {
    return {synthesize(pla, Variant::conventional, std::nullopt, options),
            synthesize(pla, Variant::power_gated, config.footer, options)};
}

LineCalibration resolve_calibration(const std::string& path, const GatedNetlist& gated, const ToolConfig& config,
                                    Calibration* details) {
    if (path.empty()) return model_calibration(gated, power_params(config));
    Calibration cal = calibrate(load_report_csv(path));
    if (details != nullptr) *details = cal;
    return cal.calibration;
}

// --- vgnd ------------------------------------------------------------------

int cmd_vgnd(const ToolConfig& config) {
    const double vdd = config.supply.vdd;
    const VirtualGround closed = virtual_ground_closed_form(config.footer, vdd);
    std::optional<double> numeric;
    std::string numeric_note;
    try {
        numeric = virtual_ground_numeric(config.footer, vdd);
    } catch (const NoSolutionError& e) {
        numeric_note = e.what();
    }
    const double ratio = leakage_saving_ratio(config.footer, vdd, closed.clamped);

    fmt::print("{:<28}{:>14}\n", "quantity", "value");
    fmt::print("{:<28}{:>14}\n", "vgnd_closed_form_raw_V", g6(closed.raw));
    fmt::print("{:<28}{:>14}\n", "vgnd_closed_form_clamped_V", g6(closed.clamped));
    if (numeric) {
        fmt::print("{:<28}{:>14}\n", "vgnd_numeric_V", g6(*numeric));
        fmt::print("{:<28}{:>14}\n", "difference_V", g6(closed.raw - *numeric));
    } else {
        fmt::print("{:<28}{:>14}\n", "vgnd_numeric_V", "n/a");
        fmt::print("{:<28}{:>14}\n", "difference_V", "n/a");
    }
    fmt::print("{:<28}{:>14}\n", "sleep_active_ratio", g6(ratio));
    if (!numeric) fmt::print("note: {}\n", numeric_note);
    return kExitOk;
}

// --- power -----------------------------------------------------------------

int cmd_power(const ToolConfig& config, const SynthesisOptions& options, const std::string& pla_path,
              const std::string& calibration_path, const std::string& vector_text) {
    const PlaPersonality pla = load_pla(pla_path);
    const Designs designs = build_designs(pla, config, options);
    const LineCalibration cal = resolve_calibration(calibration_path, designs.gated, config, nullptr);
    const InputVector v = InputVector::from_string(vector_text);
    if (v.size() != pla.num_inputs())
        throw ContractError("vector " + vector_text + " has " + std::to_string(v.size()) + " bits, PLA has " +
                            std::to_string(pla.num_inputs()) + " inputs");

    fmt::print("vector {}\n", v.to_string());
    fmt::print("{:<8}{:>16}{:>16}{:>12}{:>18}{:>18}\n", "line", "conventional_pw", "gated_pw", "saving",
               "conv_leakage_pw", "gated_leakage_pw");
    for (const auto& lp : line_power(designs.gated, v, cal, power_params(config))) {
        const double saving = lp.conventional_pw > 0 ? 1.0 - lp.gated_pw / lp.conventional_pw : 0.0;
        fmt::print("{:<8}{:>16}{:>16}{:>12}{:>18}{:>18}\n", lp.line, g6(lp.conventional_pw), g6(lp.gated_pw),
                   g6(saving), g6(lp.conventional.leakage), g6(lp.gated.leakage));
    }
    return kExitOk;
}

// --- sweep / compare -------------------------------------------------------

void print_summary(const ComparisonSummary& summary) {
    fmt::print("{:<8}{:>14}{:>14}{:>14}{:>6}\n", "line", "mean_saving_%", "min_saving_%", "max_saving_%", "rows");
    for (const auto& l : summary.lines)
        fmt::print("{:<8}{:>14}{:>14}{:>14}{:>6}\n", l.line, g6(100 * l.mean_saving), g6(100 * l.min_saving),
                   g6(100 * l.max_saving), l.rows_used);
    fmt::print("total saving: {} %\n", g6(100 * summary.total_saving));
}

int cmd_sweep(const ToolConfig& config, const SynthesisOptions& options, const std::string& pla_path,
              const std::string& calibration_path, const std::string& out_dir) {
    const PlaPersonality pla = load_pla(pla_path);
    const Designs designs = build_designs(pla, config, options);
    Calibration details;
    const LineCalibration cal = resolve_calibration(calibration_path, designs.gated, config, &details);
    const fs::path out = prepare_out_dir(out_dir);

    const PowerReport report = sweep_all_vectors(designs.gated, cal, power_params(config));
    const VariantReport conv = column(report, Variant::conventional);
    const VariantReport gated = column(report, Variant::power_gated);
    const ComparisonSummary summary = compare_designs(conv, gated);

    write_file(out / "power_report.csv", to_text([&](std::ostream& o) { write_report_csv(o, report); }));
    write_file(out / "power_report.json", to_json(report).dump(2) + "\n");
    write_file(out / "conventional.csv", to_text([&](std::ostream& o) { write_variant_csv(o, conv); }));
    write_file(out / "gated.csv", to_text([&](std::ostream& o) { write_variant_csv(o, gated); }));
    write_file(out / "summary.csv", to_text([&](std::ostream& o) { write_summary_csv(o, summary); }));
    write_file(out / "summary.json", to_json(summary).dump(2) + "\n");
    write_file(out / "netlist_conventional.json", to_json(designs.conventional).dump(2) + "\n");
    write_file(out / "netlist_gated.json", to_json(designs.gated).dump(2) + "\n");

    if (!calibration_path.empty()) {
        write_file(out / "calibration_residuals.csv", to_text([&](std::ostream& o) {
                       o << "vector,line,column,reference_pw,model_pw,relative_error,outlier\n";
                       for (const auto& r : details.residuals)
                           o << r.vector.to_string() << ',' << r.line << ','
                             << (r.column == ReferenceColumn::conventional ? "conventional" : "gated") << ','
                             << format_full(r.reference_pw) << ',' << format_full(r.model_pw) << ','
                             << format_full(r.relative_error) << ',' << (r.outlier ? 1 : 0) << '\n';
                   }));
        for (const auto& r : details.outliers())
            fmt::print("outlier: vector {} line {} {} {} pW (model {} pW)\n", r.vector.to_string(), r.line,
                       r.column == ReferenceColumn::conventional ? "conventional" : "gated", g6(r.reference_pw),
                       g6(r.model_pw));
    }
    fmt::print("{} rows written to {}\n", report.rows().size(), out.string());
    print_summary(summary);
    return kExitOk;
}

int cmd_compare(const std::string& report_path, const std::string& conv_path, const std::string& gated_path,
                const std::string& out_dir) {
    ComparisonSummary summary;
    if (!report_path.empty()) {
        const PowerReport report = load_report_csv(report_path);
        summary = compare_designs(column(report, Variant::conventional), column(report, Variant::power_gated));
    } else {
        if (conv_path.empty() || gated_path.empty())
            throw ConfigError("compare needs --report, or both --conventional and --gated");
        auto read = [](const std::string& path, Variant v) {
            std::ifstream in(path);
            if (!in) throw ConfigError("cannot open '" + path + "'");
            try {
                return read_variant_csv(in, v);
            } catch (const ParseError& e) {
                throw ParseError(e.line(), e.detail(), path);
            }
        };
        summary = compare_designs(read(conv_path, Variant::conventional), read(gated_path, Variant::power_gated));
    }
    if (!out_dir.empty()) {
        const fs::path out = prepare_out_dir(out_dir);
        write_file(out / "summary.csv", to_text([&](std::ostream& o) { write_summary_csv(o, summary); }));
        write_file(out / "summary.json", to_json(summary).dump(2) + "\n");
    }
    print_summary(summary);
    return kExitOk;
}

// --- transient -------------------------------------------------------------

struct TransientOptions {
    double duration = 5e-6;
    double timestep = 10e-9;
    double threshold_fraction = 0.5;
    std::vector<std::string> nodes;
};

int cmd_transient(const ToolConfig& config, const SynthesisOptions& options, const std::string& pla_path,
                  const TransientOptions& opts, const std::string& out_dir) {
    std::optional<GatedNetlist> gated;
    if (!pla_path.empty()) gated = synthesize(load_pla(pla_path), Variant::power_gated, config.footer, options);

    // Node -> footer width of the domain driving it.
    std::vector<std::pair<std::string, double>> nodes;
    auto footer_width_for = [&](const std::string& node) {
        if (!gated) return config.footer.w_footer;
        const auto& nets = gated->nets();
        for (const auto& g : gated->gates())
            if (nets[g.output].name == node) return gated->sleep_domains()[*g.sleep_domain].footer.w_footer;
        throw ConfigError("node '" + node + "' is not driven by any gate of the PLA");
    };
    std::vector<std::string> names = opts.nodes;
    if (names.empty()) {
        if (gated)
            for (NetId id : gated->output_nets()) names.push_back(gated->nets()[id].name);
        else
            names.push_back("out");
    }
    for (const auto& name : names) nodes.emplace_back(name, footer_width_for(name));

    if (!(opts.threshold_fraction > 0 && opts.threshold_fraction < 1))
        throw ConfigError("threshold_fraction must lie strictly between 0 and 1");

    // Check every stage before writing anything.
    struct Run {
        std::string node;
        const char* variant;
        RcStage stage;
    };
    std::vector<Run> runs;
    for (const auto& [name, w_footer] : nodes) {
        RcStage conv;
        conv.drive_resistance = config.drive_resistance;
        conv.capacitance = config.node_capacitance;
        conv.initial_voltage = 0.0;
        conv.target_voltage = config.supply.vdd;
        RcStage gate = conv;
        gate.footer_resistance = footer_resistance(w_footer, config.r_unit);
        runs.push_back({name, "conventional", conv});
        runs.push_back({name, "gated", gate});
    }
    std::vector<Waveform> waves;
    for (const auto& run : runs) waves.push_back(simulate_step(run.stage, opts.duration, opts.timestep, run.node));

    const fs::path out = prepare_out_dir(out_dir);
    fmt::print("{:<12}{:<14}{:>12}{:>14}{:>14}\n", "node", "variant", "rc_s", "t63_s", "final_V");
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& run = runs[i];
        const auto& w = waves[i];
        write_file(out / (run.node + "_" + run.variant + ".csv"),
                   to_text([&](std::ostream& o) { write_waveform_csv(o, w); }));
        const double level = run.stage.initial_voltage +
                             (1.0 - std::exp(-1.0)) * (run.stage.target_voltage - run.stage.initial_voltage);
        const auto t63 = w.crossing_time(level);
        fmt::print("{:<12}{:<14}{:>12}{:>14}{:>14}\n", run.node, run.variant, g6(run.stage.time_constant()),
                   t63 ? g6(*t63) : std::string("n/a"), g6(w.samples.back()));
    }

    WakeupParams wake;
    wake.vdd = config.supply.vdd;
    wake.r_unit = config.r_unit;
    wake.node_capacitance = config.vgnd_capacitance;
    std::vector<SleepDomain> domains;
    if (gated) {
        domains = set_mode(*gated, SleepMode::sleep).sleep_domains();
    } else {
        SleepDomain d;
        d.name = "footer";
        d.footer = config.footer;
        d.mode = SleepMode::sleep;
        domains.push_back(d);
    }
    fmt::print("{:<12}{:>14}{:>16}\n", "domain", "vgnd_V", "wakeup_s");
    for (const auto& d : domains)
        fmt::print("{:<12}{:>14}{:>16}\n", d.name, g6(virtual_ground_closed_form(d.footer, wake.vdd).clamped),
                   g6(wakeup_latency(d, wake, opts.threshold_fraction)));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PLA power-gating design and analysis toolkit"};
    app.require_subcommand(1);

    std::string pla_path;
    std::string calibration_path;
    std::string out_dir;
    std::string vector_text;
    std::string report_path;
    std::string conv_path;
    std::string gated_path;
    TransientOptions transient;

    CommonOptions vgnd_opts;
    auto* vgnd = app.add_subcommand("vgnd", "Solve the footer virtual-ground and leakage-ratio equations");
    vgnd_opts.attach(vgnd);

    CommonOptions power_opts;
    auto* power = app.add_subcommand("power", "Per-line power for a single input vector");
    power_opts.attach(power);
    power->add_option("--pla", pla_path, "PLA description (.pla)")->required()->check(CLI::ExistingFile);
    power->add_option("--calibration", calibration_path, "Reference power CSV")->check(CLI::ExistingFile);
    power->add_option("--vector", vector_text, "Input vector, e.g. 101")->required();

    CommonOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Power over all input vectors, both designs");
    sweep_opts.attach(sweep);
    sweep->add_option("--pla", pla_path, "PLA description (.pla)")->required()->check(CLI::ExistingFile);
    sweep->add_option("--calibration", calibration_path, "Reference power CSV")->check(CLI::ExistingFile);
    sweep->add_option("--out", out_dir, "Output directory")->required();

    auto* compare = app.add_subcommand("compare", "Saving summary of conventional vs gated power");
    compare->add_option("--report", report_path, "Combined report CSV")->check(CLI::ExistingFile);
    compare->add_option("--conventional", conv_path, "Conventional power CSV")->check(CLI::ExistingFile);
    compare->add_option("--gated", gated_path, "Gated power CSV")->check(CLI::ExistingFile);
    compare->add_option("--out", out_dir, "Optional output directory for the summary");

    CommonOptions transient_opts;
    auto* trans = app.add_subcommand("transient", "Step responses and wake-up latency");
    transient_opts.attach(trans);
    trans->add_option("--pla", pla_path, "PLA description (.pla)")->check(CLI::ExistingFile);
    trans->add_option("--out", out_dir, "Output directory")->required();
    trans->add_option("--duration", transient.duration, "Simulated time, s");
    trans->add_option("--timestep", transient.timestep, "Fixed timestep, s");
    trans->add_option("--threshold_fraction", transient.threshold_fraction, "Wake-up threshold fraction");
    trans->add_option("--nodes", transient.nodes, "Nodes to simulate")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUser;
    }

    try {
        if (*vgnd) return cmd_vgnd(vgnd_opts.resolve(vgnd));
        if (*power)
            return cmd_power(power_opts.resolve(power), power_opts.synthesis(), pla_path, calibration_path,
                             vector_text);
        if (*sweep)
            return cmd_sweep(sweep_opts.resolve(sweep), sweep_opts.synthesis(), pla_path, calibration_path, out_dir);
        if (*compare) return cmd_compare(report_path, conv_path, gated_path, out_dir);
        if (*trans)
            return cmd_transient(transient_opts.resolve(trans), transient_opts.synthesis(), pla_path, transient,
                                 out_dir);
    } catch (const StabilityError& e) {
        std::cerr << "error: " << e.what() << '\n'
                  << "required maximum timestep: " << g6(e.max_timestep()) << " s\n";
        return kExitUser;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUser;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}
