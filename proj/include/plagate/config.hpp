#pragma once

// Flat `key = value` configuration shared by the config file and the CLI
// flags. Keys (SI units):
//
//   vdd f_clk c_load alpha i_sc          supply
//   i0 w_over_l vth eta ss               logic device (eta, ss, i0 also set the footer)
//   vth_footer                           footer threshold
//   vg w_circuit w_footer                footer bias and widths
//   r_unit drive_resistance node_capacitance vgnd_capacitance
//                                        transient model

#include "plagate/device.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace plagate {

struct ToolConfig {
    SupplyConfig supply;
    FooterConfig footer;
    double r_unit = 10e3;
    double drive_resistance = 10e3;
    double node_capacitance = 100e-12;
    double vgnd_capacitance = 100e-12;

    // Throws ConfigError naming the key (unknown key or unparsable value).
    void set(const std::string& key, const std::string& value);
    // Runs the device/supply invariants; errors name the offending key.
    void validate() const;

    static const std::vector<std::string>& keys();
};

// Key/value pairs in file order. `#` starts a comment; blank lines are skipped.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in);

ToolConfig load_config(const std::string& path);
void apply(ToolConfig& config, const std::vector<std::pair<std::string, std::string>>& settings);

}  // namespace plagate
