// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any
// criterion fails.

#include "plagate/config.hpp"
#include "plagate/device.hpp"
#include "plagate/errors.hpp"
#include "plagate/netlist.hpp"
#include "plagate/pla.hpp"
#include "plagate/power.hpp"
#include "plagate/transient.hpp"

#include "../oracle.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace plagate;
namespace fs = std::filesystem;

namespace {

const fs::path kData = PLAGATE_DATA_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body, double time_limit = 0.0) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.3f s", elapsed);
    std::string detail = o.detail + (o.detail.empty() ? "" : "; ") + timing;
    if (time_limit > 0 && elapsed >= time_limit) {
        o.pass = false;
        detail += " (limit " + std::to_string(time_limit) + " s)";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s [%s]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Sample {
    FooterConfig footer;
    double vdd;
};

Sample random_sample(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        Sample s;
        s.vdd = 0.6 + 4.4 * u(rng);
        const double eta = 0.02 + 0.3 * u(rng);
        const double ss = 0.06 + 0.06 * u(rng);
        s.footer.circuit.eta = s.footer.footer.eta = eta;
        s.footer.circuit.ss = s.footer.footer.ss = ss;
        s.footer.circuit.vth = 0.1 + 0.3 * u(rng);
        s.footer.footer.vth = 0.3 + 0.4 * u(rng);
        s.footer.vg = -0.3 + (s.footer.footer.vth + 0.3) * 0.99 * u(rng);
        s.footer.w_circuit = std::pow(10.0, -1.0 + 3.0 * u(rng));
        s.footer.w_footer = std::pow(10.0, -1.0 + 2.0 * u(rng));
        const double raw = virtual_ground_closed_form(s.footer, s.vdd).raw;
        if (raw > 1e-3 && raw < s.vdd - 1e-3) return s;
    }
}

std::vector<Sample> samples() {
    std::mt19937_64 rng(20240601);
    std::vector<Sample> out;
    for (int i = 0; i < 1000; ++i) out.push_back(random_sample(rng));
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("'") + PLAGATE_CLI_PATH + "' " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome table1_golden() {
    const ToolConfig config;
    const PowerReport reference = load_report_csv((kData / "reference_power.csv").string());
    const Calibration cal = calibrate(reference);
    const PlaPersonality pla = load_pla((kData / "example.pla").string());
    const GatedNetlist gated = synthesize(pla, Variant::power_gated, config.footer);
    const PowerReport model = sweep_all_vectors(gated, cal.calibration, {config.supply, config.footer});

    const InputVector c_outlier = InputVector::from_string("001");
    bool pass = true;
    std::string detail;
    double worst = 0.0;
    std::size_t checked = 0;

    bool flagged = false;
    for (const auto& r : cal.outliers()) {
        if (r.vector == c_outlier && r.line == "C") {
            flagged = true;
        } else {
            pass = false;
            detail += "unexpected outlier " + r.vector.to_string() + "/" + r.line + "; ";
        }
    }
    if (!flagged) {
        pass = false;
        detail += "C/001 not flagged; ";
    }

    for (const auto& ref : reference.rows()) {
        const PowerRow* m = model.find(ref.vector, ref.line);
        if (!m) {
            pass = false;
            detail += "missing " + ref.vector.to_string() + "/" + ref.line + "; ";
            continue;
        }
        const std::pair<double, double> pairs[] = {{ref.conventional_pw, m->conventional_pw},
                                                   {ref.gated_pw, m->gated_pw}};
        for (const auto& [want, got] : pairs) {
            if (want == 0.0) {
                if (got != 0.0) {
                    pass = false;
                    detail += "nonzero at " + ref.vector.to_string() + "/" + ref.line + "; ";
                }
                continue;
            }
            if (ref.vector == c_outlier && ref.line == "C") continue;
            const double err = std::abs(got - want) / want;
            worst = std::max(worst, err);
            ++checked;
            if (err > 0.02) {
                pass = false;
                detail += ref.vector.to_string() + "/" + ref.line + " off by " + num(100 * err) + "%; ";
            }
        }
    }
    detail += std::to_string(checked) + " nonzero entries, worst " + num(100 * worst) + "%";
    return {pass, detail};
}

Outcome saving_trend() {
    const PowerReport reference = load_report_csv((kData / "reference_power.csv").string());
    const ComparisonSummary s =
        compare_designs(column(reference, Variant::conventional), column(reference, Variant::power_gated));
    const std::pair<const char*, double> targets[] = {{"A", 18.19}, {"B", 12.04}, {"C", 15.3}};
    bool pass = true;
    std::string detail;
    for (const auto& [line, target] : targets) {
        const LineSummary* l = s.find(line);
        const double got = l ? 100 * l->mean_saving : NAN;
        const bool ok = std::abs(got - target) <= 0.1;
        pass = pass && ok;
        detail += std::string(line) + " " + num(got) + "% vs " + num(target) + "%" + (ok ? "" : " (miss)") + "; ";
    }
    detail.resize(detail.size() - 2);
    return {pass, detail};
}

Outcome closed_form_vs_bisection() {
    double worst = 0.0;
    std::size_t bad = 0;
    const auto all = samples();
    for (const auto& s : all) {
        const double diff = std::abs(virtual_ground_closed_form(s.footer, s.vdd).raw - virtual_ground_numeric(s.footer, s.vdd));
        worst = std::max(worst, diff);
        if (!(diff <= 1e-9)) ++bad;
    }
    return {bad == 0, std::to_string(all.size() - bad) + "/" + std::to_string(all.size()) + " within 1e-9 V, worst " +
                          num(worst) + " V"};
}

Outcome negative_slope() {
    double worst = 0.0;
    std::size_t used = 0, bad = 0;
    for (const auto& s : samples()) {
        const double h = 1e-4;
        auto lo = s.footer;
        auto hi = s.footer;
        lo.vg -= h;
        hi.vg += h;
        if (!(hi.vg < hi.footer.vth)) continue;
        const double slope = (virtual_ground_closed_form(hi, s.vdd).raw - virtual_ground_closed_form(lo, s.vdd).raw) / (2 * h);
        const double expected = -1.0 / (2.0 * s.footer.footer.eta);
        const double rel = std::abs(slope - expected) / std::abs(expected);
        worst = std::max(worst, rel);
        ++used;
        if (!(rel <= 1e-6)) ++bad;
    }
    return {bad == 0 && used >= 900, std::to_string(used - bad) + "/" + std::to_string(used) +
                                         " within 1e-6 relative, worst " + num(worst)};
}

Outcome logic_equivalence() {
    const auto files = oracle::corpus_files(kData / "corpus");
    std::size_t vectors = 0, mismatches = 0;
    for (const auto& path : files) {
        const std::string text = oracle::read_file(path);
        const auto truth = oracle::truth_table_from_text(text);
        const PlaPersonality pla = parse_pla(text);
        if (pla.num_inputs() > 10) return {false, path.filename().string() + " has more than 10 inputs"};
        const GatedNetlist nets[] = {synthesize(pla, Variant::conventional),
                                     synthesize(pla, Variant::power_gated, FooterConfig{})};
        const std::uint64_t count = std::uint64_t{1} << pla.num_inputs();
        for (std::uint64_t m = 0; m < count; ++m) {
            // oracle minterm: first input is the most significant bit
            std::string bits(pla.num_inputs(), '0');
            for (std::size_t i = 0; i < bits.size(); ++i)
                if ((m >> (bits.size() - 1 - i)) & 1U) bits[i] = '1';
            const InputVector v = InputVector::from_string(bits);
            for (const auto& n : nets) {
                const auto out = simulate_logic(n, v);
                ++vectors;
                for (int j = 0; j < truth.num_outputs; ++j)
                    if (out[j] != truth.value(m, j)) ++mismatches;
            }
        }
    }
    return {files.size() >= 20 && mismatches == 0,
            std::to_string(files.size()) + " files, " + std::to_string(vectors) + " evaluations, " +
                std::to_string(mismatches) + " mismatches"};
}

Outcome dynamic_scaling() {
    double worst = 0.0;
    for (double vdd : {0.5, 1.0, 1.8, 3.3, 5.0}) {
        SupplyConfig s;
        s.vdd = vdd;
        const double one = average_power(s, 1e-9).switching;
        s.vdd = 2 * vdd;
        const double two = average_power(s, 1e-9).switching;
        worst = std::max(worst, std::abs(two / one - 4.0) / 4.0);
    }
    return {worst < 1e-12, "worst relative error " + num(worst)};
}

double max_error(const RcStage& s, const Waveform& w) {
    double worst = 0.0;
    for (std::size_t i = 0; i < w.samples.size(); ++i)
        worst = std::max(worst, std::abs(w.samples[i] - analytic_step(s, w.time_at(i))));
    return worst;
}

Outcome transient_oracle() {
    RcStage s;  // 10 kOhm, 100 pF: RC = 1 us, 0 -> 5 V
    const double rc = s.time_constant();
    const double amplitude = std::abs(s.target_voltage - s.initial_voltage);
    const double coarse = max_error(s, simulate_step(s, 5 * rc, rc / 100));
    const double fine = max_error(s, simulate_step(s, 5 * rc, rc / 200));
    const double ratio = coarse / fine;
    const bool ok = coarse <= 0.005 * amplitude && ratio >= 1.8 && ratio <= 2.2;
    return {ok, "max error " + num(100 * coarse / amplitude) + "% of step, halving ratio " + num(ratio)};
}

Outcome wakeup_tradeoff() {
    WakeupParams p;
    SleepDomain d;
    d.name = "and_array";
    d.footer.w_circuit = 27.0;
    d.mode = SleepMode::sleep;

    bool decreasing = true;
    double previous = INFINITY;
    for (int i = 1; i <= 10; ++i) {
        d.footer.w_footer = 0.5 * i;
        const double latency = wakeup_latency(d, p, 0.5);
        if (!(latency < previous)) decreasing = false;
        previous = latency;
    }
    d.footer.w_footer = 1.0;
    const double rc = footer_resistance(1.0, p.r_unit) * p.node_capacitance;
    const double expected = -rc * std::log(0.5);
    const double rel = std::abs(wakeup_latency(d, p, 0.5) - expected) / expected;
    return {decreasing && rel <= 0.005,
            std::string(decreasing ? "strictly decreasing" : "NOT decreasing") + "; ln2 error " + num(100 * rel) + "%"};
}

Outcome determinism() {
    const fs::path root = fs::path(PLAGATE_TEST_TMP) / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string args = "sweep --pla '" + (kData / "example.pla").string() + "' --calibration '" +
                             (kData / "reference_power.csv").string() + "' --out ";
    for (const char* run : {"a", "b"})
        if (int code = run_cli(args + "'" + (root / run).string() + "'"); code != 0)
            return {false, "sweep exited " + std::to_string(code)};
    std::size_t compared = 0;
    for (const auto& e : fs::directory_iterator(root / "a")) {
        if (e.path().extension() != ".csv") continue;
        const fs::path other = root / "b" / e.path().filename();
        if (!fs::exists(other) || oracle::read_file(e.path()) != oracle::read_file(other))
            return {false, e.path().filename().string() + " differs"};
        ++compared;
    }
    return {compared >= 4, std::to_string(compared) + " CSV files byte-identical"};
}

}  // namespace

int main() {
    report(1, "reference table golden reproduction within 2%", table1_golden, 1.0);
    report(2, "per-line mean saving 18.19/12.04/15.3% within 0.1 pp", saving_trend);
    report(3, "closed-form vs bisection virtual ground within 1e-9 V", closed_form_vs_bisection, 5.0);
    report(4, "dVgnd/dVg = -1/(2 eta) within 1e-6 relative", negative_slope);
    report(5, "netlist logic equals truth table over corpus", logic_equivalence, 10.0);
    report(6, "dynamic power quadruples when vdd doubles", dynamic_scaling);
    report(7, "step response vs analytic exponential", transient_oracle);
    report(8, "wake-up latency vs footer width", wakeup_tradeoff);
    report(9, "repeated sweeps give byte-identical CSVs", determinism);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
