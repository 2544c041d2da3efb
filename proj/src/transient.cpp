#include "plagate/transient.hpp"

#include "plagate/errors.hpp"
#include "plagate/power.hpp"

#include <cmath>
#include <ostream>

namespace plagate {

std::optional<double> Waveform::crossing_time(double level) const {
    if (samples.empty()) return std::nullopt;
    const bool rising = level >= samples.front();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const bool reached = rising ? samples[i] >= level : samples[i] <= level;
        if (!reached) continue;
        if (i == 0) return 0.0;
        const double v0 = samples[i - 1];
        const double v1 = samples[i];
        const double frac = v1 == v0 ? 0.0 : (level - v0) / (v1 - v0);
        return time_at(i - 1) + frac * timestep;
    }
    return std::nullopt;
}

void Waveform::validate() const {
    if (!(timestep > 0)) throw ContractError("waveform timestep must be positive");
    if (samples.empty()) throw ContractError("waveform has no samples");
    for (double s : samples)
        if (!std::isfinite(s)) throw ContractError("waveform " + node + " holds a non-finite sample");
}

void RcStage::validate() const {
    if (!(drive_resistance > 0) || !std::isfinite(drive_resistance))
        throw DomainError("drive_resistance must be positive");
    if (footer_resistance && (!(*footer_resistance > 0) || !std::isfinite(*footer_resistance)))
        throw DomainError("footer resistance must be positive");
    if (!(capacitance > 0) || !std::isfinite(capacitance)) throw DomainError("node capacitance must be positive");
    if (!std::isfinite(initial_voltage) || !std::isfinite(target_voltage))
        throw DomainError("stage voltages must be finite");
}

Waveform simulate_step(const RcStage& stage, double duration, double timestep, std::string node) {
    stage.validate();
    if (!(duration > 0) || !std::isfinite(duration)) throw DomainError("duration must be positive");
    const double tau = stage.time_constant();
    const double max_step = kStabilityFraction * std::min(duration, tau);
    // Relative slack so that e.g. duration/10 computed by the caller is accepted.
    if (!(timestep > 0) || timestep > max_step * (1.0 + 1e-12))
        throw StabilityError("timestep " + format_full(timestep) + " s exceeds the stable maximum " +
                                 format_full(max_step) + " s (min(duration, RC) / 10)",
                             max_step);

    const auto steps = static_cast<std::size_t>(std::ceil(duration / timestep - 1e-9));
    Waveform w;
    w.node = std::move(node);
    w.timestep = timestep;
    w.samples.reserve(steps + 1);
    double v = stage.initial_voltage;
    w.samples.push_back(v);
    const double gain = timestep / tau;
    for (std::size_t i = 0; i < steps; ++i) {
        v += gain * (stage.target_voltage - v);
        w.samples.push_back(v);
    }
    return w;
}

double analytic_step(const RcStage& stage, double t) {
    return stage.target_voltage + (stage.initial_voltage - stage.target_voltage) * std::exp(-t / stage.time_constant());
}

double footer_resistance(double w_footer, double r_unit) {
    if (!(w_footer > 0)) throw DomainError("w_footer must be positive");
    if (!(r_unit > 0)) throw DomainError("r_unit must be positive");
    return r_unit / w_footer;
}

double wakeup_latency(const SleepDomain& domain, const WakeupParams& params, double threshold_fraction) {
    if (!(threshold_fraction > 0 && threshold_fraction < 1))
        throw DomainError("threshold_fraction must lie strictly between 0 and 1");
    if (domain.mode != SleepMode::sleep) throw ContractError("sleep domain " + domain.name + " is not asleep");
    if (!(params.timestep_fraction > 0 && params.timestep_fraction <= kStabilityFraction))
        throw DomainError("timestep_fraction must lie in (0, 0.1]");
    if (!(params.duration_cap > 1)) throw DomainError("duration cap must exceed one time constant");

    const double vgnd = virtual_ground_closed_form(domain.footer, params.vdd).clamped;
    if (vgnd == 0.0) return 0.0;

    RcStage stage;
    stage.drive_resistance = footer_resistance(domain.footer.w_footer, params.r_unit);
    stage.capacitance = params.node_capacitance;
    stage.initial_voltage = vgnd;
    stage.target_voltage = 0.0;
    const double tau = stage.time_constant();

    const Waveform w = simulate_step(stage, params.duration_cap * tau, params.timestep_fraction * tau,
                                     domain.name + ".vgnd");
    const double level = threshold_fraction * vgnd;
    for (std::size_t i = 1; i < w.samples.size(); ++i) {
        if (w.samples[i] >= level) continue;
        const double v0 = w.samples[i - 1];
        const double v1 = w.samples[i];
        return w.time_at(i - 1) + (v0 - level) / (v0 - v1) * w.timestep;
    }
    throw TimeoutError("virtual ground of " + domain.name + " still at " + format_full(w.samples.back()) +
                           " V after " + format_full(w.duration()) + " s",
                       w.samples.back());
}

void write_waveform_csv(std::ostream& out, const Waveform& w) {
    out << "time,voltage\n";
    for (std::size_t i = 0; i < w.samples.size(); ++i) out << format_full(w.time_at(i)) << ',' << format_full(w.samples[i]) << '\n';
}

}  // namespace plagate
