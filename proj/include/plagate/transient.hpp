#pragma once

// Fixed-timestep step response of single-pole RC nodes, and the wake-up
// latency of a virtual-ground node when its footer turns back on.

#include "plagate/netlist.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace plagate {

struct Waveform {
    std::string node;
    double timestep = 0.0;
    std::vector<double> samples;  // samples[i] is the voltage at i * timestep

    double time_at(std::size_t i) const noexcept { return static_cast<double>(i) * timestep; }
    double duration() const noexcept { return samples.empty() ? 0.0 : time_at(samples.size() - 1); }

    // First time the waveform reaches `level` (linear interpolation between
    // samples), or nullopt if it never does.
    std::optional<double> crossing_time(double level) const;

    void validate() const;
};

struct RcStage {
    double drive_resistance = 10e3;
    // Series resistance of an ON footer; absent for the conventional design.
    std::optional<double> footer_resistance;
    double capacitance = 100e-12;
    double initial_voltage = 0.0;
    double target_voltage = 5.0;

    double total_resistance() const noexcept { return drive_resistance + footer_resistance.value_or(0.0); }
    double time_constant() const noexcept { return total_resistance() * capacitance; }

    void validate() const;
};

// A stage's timestep must not exceed this fraction of both the duration and RC.
inline constexpr double kStabilityFraction = 0.1;

// Explicit update V += h (V_target - V) / (R C). Throws StabilityError when
// the timestep exceeds duration/10 or RC/10.
Waveform simulate_step(const RcStage& stage, double duration, double timestep, std::string node = "out");

// V_target + (V0 - V_target) exp(-t / RC)
double analytic_step(const RcStage& stage, double t);

// Footer ON resistance under the linear 1/W sizing rule.
double footer_resistance(double w_footer, double r_unit);

struct WakeupParams {
    double vdd = 5.0;
    double r_unit = 10e3;
    double node_capacitance = 100e-12;   // virtual-ground node
    double timestep_fraction = 1e-3;     // timestep = RC * fraction
    double duration_cap = 50.0;          // in units of RC
};

// Sleep -> active: the virtual-ground node starts at the domain's clamped
// closed-form V_gnd and discharges through the footer (R = r_unit / w_footer).
// Returns the first time it falls below threshold_fraction * V_gnd.
double wakeup_latency(const SleepDomain& domain, const WakeupParams& params, double threshold_fraction);

// time, voltage (full precision)
void write_waveform_csv(std::ostream& out, const Waveform& w);

}  // namespace plagate
