#include "plagate/config.hpp"

#include "plagate/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>

namespace plagate {

namespace {

using Setter = std::function<void(ToolConfig&, double)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"vdd", [](ToolConfig& c, double v) { c.supply.vdd = v; }},
        {"f_clk", [](ToolConfig& c, double v) { c.supply.f_clk = v; }},
        {"c_load", [](ToolConfig& c, double v) { c.supply.c_load = v; }},
        {"alpha", [](ToolConfig& c, double v) { c.supply.alpha = v; }},
        {"i_sc", [](ToolConfig& c, double v) { c.supply.i_sc = v; }},
        {"i0", [](ToolConfig& c, double v) { c.footer.circuit.i0 = c.footer.footer.i0 = v; }},
        {"w_over_l", [](ToolConfig& c, double v) { c.footer.circuit.w_over_l = v; }},
        {"vth", [](ToolConfig& c, double v) { c.footer.circuit.vth = v; }},
        {"vth_footer", [](ToolConfig& c, double v) { c.footer.footer.vth = v; }},
        {"eta", [](ToolConfig& c, double v) { c.footer.circuit.eta = c.footer.footer.eta = v; }},
        {"ss", [](ToolConfig& c, double v) { c.footer.circuit.ss = c.footer.footer.ss = v; }},
        {"vg", [](ToolConfig& c, double v) { c.footer.vg = v; }},
        {"w_circuit", [](ToolConfig& c, double v) { c.footer.w_circuit = v; }},
        {"w_footer", [](ToolConfig& c, double v) { c.footer.w_footer = v; }},
        {"r_unit", [](ToolConfig& c, double v) { c.r_unit = v; }},
        {"drive_resistance", [](ToolConfig& c, double v) { c.drive_resistance = v; }},
        {"node_capacitance", [](ToolConfig& c, double v) { c.node_capacitance = v; }},
        {"vgnd_capacitance", [](ToolConfig& c, double v) { c.vgnd_capacitance = v; }},
    };
    return table;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

const std::vector<std::string>& ToolConfig::keys() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [k, _] : setters()) out.push_back(k);
        return out;
    }();
    return names;
}

void ToolConfig::set(const std::string& key, const std::string& value) {
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    double number = 0.0;
    const std::string text = trim(value);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), number);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(number))
        throw ConfigError("config key '" + key + "': '" + value + "' is not a number");
    it->second(*this, number);
}

void ToolConfig::validate() const {
    try {
        supply.validate();
        footer.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    auto positive = [](double v, const char* key) {
        if (!(v > 0)) throw ConfigError(std::string(key) + " must be positive");
    };
    positive(r_unit, "r_unit");
    positive(drive_resistance, "drive_resistance");
    positive(node_capacitance, "node_capacitance");
    positive(vgnd_capacitance, "vgnd_capacitance");
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(line_no, "missing key before '='");
        out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
    }
    return out;
}

void apply(ToolConfig& config, const std::vector<std::pair<std::string, std::string>>& settings) {
    for (const auto& [key, value] : settings) config.set(key, value);
}

ToolConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    ToolConfig config;
    try {
        plagate::apply(config, parse_key_values(in));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path);
    }
    return config;
}

}  // namespace plagate
