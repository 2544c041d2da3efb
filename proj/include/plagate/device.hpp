#pragma once

// Transistor-level analytics for footer-gated logic: subthreshold leakage,
// the virtual-ground balance (closed form and a bisection oracle), the
// sleep/active leakage ratio, and the average-power decomposition.
//
// All quantities are SI: amperes, volts, volts/decade, hertz, farads, watts.

#include <string_view>

namespace plagate {

struct DeviceParams {
    double i0 = 100e-9;    // current scale I_o
    double w_over_l = 1.0;
    double vth = 0.3;      // threshold voltage
    double eta = 0.15;     // DIBL coefficient
    double ss = 0.1;       // subthreshold slope, V/decade

    // Throws DomainError naming the offending field; `suffix` is appended to
    // field names so footer fields read e.g. "vth_footer".
    void validate(std::string_view suffix = {}) const;
};

struct SupplyConfig {
    double vdd = 5.0;
    double f_clk = 1e6;
    double c_load = 10e-15;
    double alpha = 0.5;    // 0->1 switching activity
    double i_sc = 0.0;     // short-circuit current

    void validate() const;
};

// High-V_th footer device defaults.
inline DeviceParams default_footer_device() {
    DeviceParams d;
    d.vth = 0.5;
    return d;
}

struct FooterConfig {
    double w_circuit = 1.0;
    double w_footer = 1.0;
    double vg = 0.0;       // footer gate voltage while asleep
    DeviceParams circuit{};
    DeviceParams footer = default_footer_device();

    // Includes the weak-inversion requirement vg < footer.vth.
    void validate() const;
};

// I_o (W/L) 10^((vg - vth + eta*vds) / ss)
double subthreshold_leakage(const DeviceParams& d, double vg, double vds);

struct VirtualGround {
    double raw;      // closed-form value, may fall outside [0, vdd]
    double clamped;  // raw clamped to [0, vdd]; what downstream consumers use
};

// Closed-form virtual-ground voltage from the circuit/footer leakage balance.
// Uses the footer's eta and ss for both devices.
VirtualGround virtual_ground_closed_form(const FooterConfig& f, double vdd);

// Bisection on the leakage balance over [0, vdd]:
//   circuit leakage (gate 0, vds = vdd - V) == footer leakage (gate vg, vds = V).
// Independent of the closed form. Throws NoSolutionError when the residual
// does not change sign on the bracket.
double virtual_ground_numeric(const FooterConfig& f, double vdd);

inline constexpr double kBisectionTolerance = 1e-12;
inline constexpr int kBisectionMaxIterations = 200;

// I_sleep / I_active = 10^(-eta (vdd - vgnd) / ss), footer eta and ss.
// Increases with vgnd and is 1 at vgnd == vdd.
double leakage_saving_ratio(const FooterConfig& f, double vdd, double vgnd);

struct PowerBreakdown {
    double switching = 0.0;      // alpha C V^2 f
    double short_circuit = 0.0;  // I_sc V
    double leakage = 0.0;        // I_leak V

    double total() const noexcept { return switching + short_circuit + leakage; }
};

PowerBreakdown average_power(const SupplyConfig& s, double i_leak);

}  // namespace plagate
