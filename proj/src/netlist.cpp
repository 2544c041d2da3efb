#include "plagate/netlist.hpp"

#include "plagate/errors.hpp"

#include <algorithm>

namespace plagate {

const char* to_string(Variant v) {
    return v == Variant::conventional ? "conventional" : "power-gated";
}

const char* to_string(GateKind k) {
    switch (k) {
    case GateKind::input_inverter: return "input-inverter";
    case GateKind::and_macro: return "and-macro";
    case GateKind::or_macro: return "or-macro";
    }
    return "?";
}

const char* to_string(NetKind k) {
    switch (k) {
    case NetKind::input: return "input";
    case NetKind::complement: return "complement";
    case NetKind::product: return "product";
    case NetKind::output: return "output";
    case NetKind::virtual_ground: return "virtual-ground";
    }
    return "?";
}

const char* to_string(SleepMode m) {
    return m == SleepMode::active ? "active" : "sleep";
}

NetId GatedNetlist::add_net(std::string name, NetKind kind) {
    nets_.push_back({std::move(name), kind});
    return nets_.size() - 1;
}

std::vector<std::string> GatedNetlist::line_names() const {
    std::vector<std::string> names;
    names.reserve(input_nets_.size());
    for (NetId id : input_nets_) names.push_back(nets_[id].name);
    return names;
}

std::size_t GatedNetlist::line_driver(std::size_t line) const {
    if (line >= line_drivers_.size()) throw ContractError("line index out of range");
    return line_drivers_[line];
}

void GatedNetlist::validate() const {
    for (const auto& g : gates_) {
        if (g.output >= nets_.size()) throw ContractError("gate " + g.name + " drives an undeclared net");
        for (NetId in : g.inputs)
            if (in >= nets_.size()) throw ContractError("gate " + g.name + " reads an undeclared net");
        if (g.sleep_domain && *g.sleep_domain >= domains_.size())
            throw ContractError("gate " + g.name + " references a missing sleep domain");
    }
    if (variant_ == Variant::power_gated && domains_.empty())
        throw ContractError("power-gated netlist has no sleep domain");
    if (variant_ == Variant::conventional && !domains_.empty())
        throw ContractError("conventional netlist carries sleep domains");
    for (std::size_t d = 0; d < domains_.size(); ++d) {
        for (std::size_t member : domains_[d].members)
            if (member >= gates_.size() || gates_[member].sleep_domain != d)
                throw ContractError("sleep domain " + domains_[d].name + " lists a gate that does not reference it");
        domains_[d].footer.validate();
    }
    const auto products = std::count_if(nets_.begin(), nets_.end(),
                                        [](const Net& n) { return n.kind == NetKind::product; });
    if (static_cast<std::size_t>(products) != product_nets_.size())
        throw ContractError("product-term net count does not match the product list");
}

GatedNetlist synthesize(const PlaPersonality& p, Variant variant,
                        const std::optional<FooterConfig>& footer_template, const SynthesisOptions& options) {
    if (variant == Variant::power_gated && !footer_template)
        throw ContractError("power-gated synthesis requires a footer template");
    if (!(options.unit_width > 0)) throw ContractError("unit width must be positive");

    GatedNetlist n;
    n.variant_ = variant;

    const auto& in_labels = p.input_labels();
    for (std::size_t i = 0; i < p.num_inputs(); ++i) n.input_nets_.push_back(n.add_net(in_labels[i], NetKind::input));
    for (std::size_t i = 0; i < p.num_inputs(); ++i)
        n.complement_nets_.push_back(n.add_net(in_labels[i] + "_n", NetKind::complement));
    for (std::size_t k = 0; k < p.num_products(); ++k)
        n.product_nets_.push_back(n.add_net("p" + std::to_string(k), NetKind::product));
    for (std::size_t j = 0; j < p.num_outputs(); ++j)
        n.output_nets_.push_back(n.add_net(p.output_labels()[j], NetKind::output));

    // Zero-input macros still have an output stage, so they count one unit.
    auto width_of = [&](std::size_t fan_in) { return static_cast<double>(std::max<std::size_t>(fan_in, 1)) * options.unit_width; };

    for (std::size_t i = 0; i < p.num_inputs(); ++i) {
        n.line_drivers_.push_back(n.gates_.size());
        n.gates_.push_back({GateKind::input_inverter, "INV_" + in_labels[i], {n.input_nets_[i]},
                            n.complement_nets_[i], std::nullopt, width_of(1)});
    }
    for (std::size_t k = 0; k < p.num_products(); ++k) {
        std::vector<NetId> wires;
        const auto row = p.and_row(k);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] == Literal::use_true) wires.push_back(n.input_nets_[i]);
            if (row[i] == Literal::use_complement) wires.push_back(n.complement_nets_[i]);
        }
        const std::size_t fan_in = wires.size();
        n.gates_.push_back({GateKind::and_macro, "AND" + std::to_string(fan_in) + "_p" + std::to_string(k),
                            std::move(wires), n.product_nets_[k], std::nullopt, width_of(fan_in)});
    }
    for (std::size_t j = 0; j < p.num_outputs(); ++j) {
        std::vector<NetId> wires;
        for (std::size_t k = 0; k < p.num_products(); ++k)
            if (p.feeds(k, j)) wires.push_back(n.product_nets_[k]);
        const std::size_t fan_in = wires.size();
        n.gates_.push_back({GateKind::or_macro, "OR" + std::to_string(fan_in) + "_" + p.output_labels()[j],
                            std::move(wires), n.output_nets_[j], std::nullopt, width_of(fan_in)});
    }

    if (variant == Variant::power_gated) {
        auto make_domain = [&](std::string name, std::string vgnd, auto belongs) {
            SleepDomain d;
            d.name = std::move(name);
            d.footer = *footer_template;
            d.virtual_ground = n.add_net(std::move(vgnd), NetKind::virtual_ground);
            double width = 0.0;
            const std::size_t index = n.domains_.size();
            for (std::size_t g = 0; g < n.gates_.size(); ++g) {
                if (!belongs(n.gates_[g].kind)) continue;
                n.gates_[g].sleep_domain = index;
                d.members.push_back(g);
                width += n.gates_[g].unit_width;
            }
            d.footer.w_circuit = width;
            n.domains_.push_back(std::move(d));
        };
        if (options.granularity == DomainGranularity::per_array) {
            make_domain("and_array", "vgnd_and", [](GateKind k) { return k != GateKind::or_macro; });
            make_domain("or_array", "vgnd_or", [](GateKind k) { return k == GateKind::or_macro; });
        } else {
            make_domain("shared", "vgnd", [](GateKind) { return true; });
        }
    }

    n.validate();
    return n;
}

GatedNetlist set_mode(const GatedNetlist& n, SleepMode mode) {
    if (n.variant() != Variant::power_gated)
        throw UnsupportedOperationError("set_mode requires a power-gated netlist");
    GatedNetlist copy = n;
    for (auto& d : copy.domains_) d.mode = mode;
    return copy;
}

std::vector<bool> simulate_logic(const GatedNetlist& n, const InputVector& v) {
    if (v.size() != n.num_inputs())
        throw ContractError("input vector has " + std::to_string(v.size()) + " bits, netlist has " +
                            std::to_string(n.num_inputs()) + " inputs");
    for (const auto& d : n.sleep_domains())
        if (d.mode != SleepMode::active)
            throw ContractError("sleep domain " + d.name + " is asleep; logic values are undefined");

    std::vector<char> value(n.nets().size(), 0);
    for (std::size_t i = 0; i < n.num_inputs(); ++i) value[n.input_nets()[i]] = v[i];

    // Gates are stored inverters first, then AND macros, then OR macros.
    for (const auto& g : n.gates()) {
        switch (g.kind) {
        case GateKind::input_inverter:
            value[g.output] = !value[g.inputs.front()];
            break;
        case GateKind::and_macro:
            value[g.output] = std::all_of(g.inputs.begin(), g.inputs.end(), [&](NetId id) { return value[id] != 0; });
            break;
        case GateKind::or_macro:
            value[g.output] = std::any_of(g.inputs.begin(), g.inputs.end(), [&](NetId id) { return value[id] != 0; });
            break;
        }
    }

    std::vector<bool> outputs;
    outputs.reserve(n.num_outputs());
    for (NetId id : n.output_nets()) outputs.push_back(value[id] != 0);
    return outputs;
}

nlohmann::json to_json(const GatedNetlist& n) {
    using nlohmann::json;
    json nets = json::array();
    for (const auto& net : n.nets()) nets.push_back({{"name", net.name}, {"kind", to_string(net.kind)}});

    json gates = json::array();
    for (const auto& g : n.gates()) {
        json inputs = json::array();
        for (NetId id : g.inputs) inputs.push_back(n.nets()[id].name);
        json gate = {{"name", g.name},
                     {"kind", to_string(g.kind)},
                     {"fan_in", g.fan_in()},
                     {"inputs", inputs},
                     {"output", n.nets()[g.output].name},
                     {"unit_width", g.unit_width}};
        gate["sleep_domain"] = g.sleep_domain ? json(n.sleep_domains()[*g.sleep_domain].name) : json(nullptr);
        gates.push_back(std::move(gate));
    }

    json domains = json::array();
    for (const auto& d : n.sleep_domains()) {
        json members = json::array();
        for (std::size_t m : d.members) members.push_back(n.gates()[m].name);
        const auto& f = d.footer;
        auto device = [](const DeviceParams& p) {
            return json{{"i0", p.i0}, {"w_over_l", p.w_over_l}, {"vth", p.vth}, {"eta", p.eta}, {"ss", p.ss}};
        };
        domains.push_back({{"name", d.name},
                           {"virtual_ground", n.nets()[d.virtual_ground].name},
                           {"mode", to_string(d.mode)},
                           {"members", members},
                           {"footer",
                            {{"w_circuit", f.w_circuit},
                             {"w_footer", f.w_footer},
                             {"vg", f.vg},
                             {"circuit", device(f.circuit)},
                             {"footer", device(f.footer)}}}});
    }

    return {{"variant", to_string(n.variant())},
            {"num_inputs", n.num_inputs()},
            {"num_products", n.num_products()},
            {"num_outputs", n.num_outputs()},
            {"nets", nets},
            {"gates", gates},
            {"sleep_domains", domains}};
}

}  // namespace plagate
