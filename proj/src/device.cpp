#include "plagate/device.hpp"

#include "plagate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plagate {

namespace {

std::string field(std::string_view name, std::string_view suffix) {
    return std::string(name) + std::string(suffix);
}

void require_finite(double value, const std::string& name) {
    if (!std::isfinite(value)) throw DomainError(name + " must be finite");
}

}  // namespace

void DeviceParams::validate(std::string_view suffix) const {
    require_finite(i0, field("i0", suffix));
    require_finite(w_over_l, field("w_over_l", suffix));
    require_finite(vth, field("vth", suffix));
    require_finite(eta, field("eta", suffix));
    require_finite(ss, field("ss", suffix));
    if (!(i0 > 0)) throw DomainError(field("i0", suffix) + " must be positive");
    if (!(w_over_l > 0)) throw DomainError(field("w_over_l", suffix) + " must be positive");
    if (!(ss > 0)) throw DomainError(field("ss", suffix) + " must be positive");
    if (!(eta > 0)) throw DomainError(field("eta", suffix) + " must be positive");
    if (!(eta < 1)) throw DomainError(field("eta", suffix) + " must be below 1");
    if (!(vth >= 0)) throw DomainError(field("vth", suffix) + " must be non-negative");
}

void SupplyConfig::validate() const {
    require_finite(vdd, "vdd");
    require_finite(f_clk, "f_clk");
    require_finite(c_load, "c_load");
    require_finite(alpha, "alpha");
    require_finite(i_sc, "i_sc");
    if (!(vdd > 0)) throw DomainError("vdd must be positive");
    if (!(f_clk >= 0)) throw DomainError("f_clk must be non-negative");
    if (!(c_load >= 0)) throw DomainError("c_load must be non-negative");
    if (!(alpha >= 0 && alpha <= 1)) throw DomainError("alpha must lie in [0, 1]");
    if (!(i_sc >= 0)) throw DomainError("i_sc must be non-negative");
}

void FooterConfig::validate() const {
    circuit.validate();
    footer.validate("_footer");
    require_finite(w_circuit, "w_circuit");
    require_finite(w_footer, "w_footer");
    require_finite(vg, "vg");
    if (!(w_circuit > 0)) throw DomainError("w_circuit must be positive");
    if (!(w_footer > 0)) throw DomainError("w_footer must be positive");
    if (!(vg < footer.vth))
        throw DomainError("vg must be below vth_footer (footer biased in weak inversion)");
}

double subthreshold_leakage(const DeviceParams& d, double vg, double vds) {
    d.validate();
    if (!(vds >= 0)) throw DomainError("vds must be non-negative");
    return d.i0 * d.w_over_l * std::pow(10.0, (vg - d.vth + d.eta * vds) / d.ss);
}

VirtualGround virtual_ground_closed_form(const FooterConfig& f, double vdd) {
    if (f.footer.eta == 0.0)
        throw SingularParameterError("eta must be positive: the virtual-ground balance is singular at eta = 0");
    f.validate();
    if (!(vdd > 0)) throw DomainError("vdd must be positive");

    const double eta = f.footer.eta;
    const double raw = (-f.vg + f.footer.ss * std::log10(f.w_circuit / f.w_footer) +
                        (f.footer.vth - f.circuit.vth + eta * vdd)) /
                       (2.0 * eta);
    return {raw, std::clamp(raw, 0.0, vdd)};
}

double virtual_ground_numeric(const FooterConfig& f, double vdd) {
    f.validate();
    if (!(vdd > 0)) throw DomainError("vdd must be positive");

    // Both sides share the footer's i0, eta and ss; widths carry W/L.
    DeviceParams logic = f.footer;
    logic.vth = f.circuit.vth;
    logic.w_over_l = f.w_circuit;
    DeviceParams footer = f.footer;
    footer.w_over_l = f.w_footer;

    // log10(I_circuit / I_footer): strictly decreasing in the node voltage.
    auto residual = [&](double v) {
        return std::log10(subthreshold_leakage(logic, 0.0, vdd - v)) -
               std::log10(subthreshold_leakage(footer, f.vg, v));
    };

    double lo = 0.0;
    double hi = vdd;
    double r_lo = residual(lo);
    const double r_hi = residual(hi);
    if (r_lo == 0.0) return lo;
    if (r_hi == 0.0) return hi;
    if ((r_lo > 0) == (r_hi > 0))
        throw NoSolutionError("leakage balance has no root in [0, " + std::to_string(vdd) +
                                  "] V: residual(0) = " + std::to_string(r_lo) +
                                  ", residual(vdd) = " + std::to_string(r_hi),
                              r_lo, r_hi);

    for (int it = 0; it < kBisectionMaxIterations && hi - lo > kBisectionTolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double r_mid = residual(mid);
        if (r_mid == 0.0) return mid;
        if ((r_mid > 0) == (r_lo > 0)) {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double leakage_saving_ratio(const FooterConfig& f, double vdd, double vgnd) {
    f.validate();
    if (!(vgnd >= 0 && vgnd <= vdd))
        throw DomainError("vgnd " + std::to_string(vgnd) + " V lies outside [0, vdd]");
    return std::pow(10.0, -(f.footer.eta * (vdd - vgnd)) / f.footer.ss);
}

PowerBreakdown average_power(const SupplyConfig& s, double i_leak) {
    s.validate();
    if (!(i_leak >= 0)) throw DomainError("leakage current must be non-negative");
    PowerBreakdown p;
    p.switching = s.alpha * s.c_load * s.vdd * s.vdd * s.f_clk;
    p.short_circuit = s.i_sc * s.vdd;
    p.leakage = i_leak * s.vdd;
    return p;
}

}  // namespace plagate
