#pragma once

// Gate-level PLA netlists: input inverters, AND-array macros, OR-array
// macros, optionally gated by footer sleep transistors.

#include "plagate/device.hpp"
#include "plagate/pla.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace plagate {

enum class Variant { conventional, power_gated };
enum class GateKind { input_inverter, and_macro, or_macro };
enum class NetKind { input, complement, product, output, virtual_ground };
enum class SleepMode { active, sleep };

// per_array: one footer for the AND array (with the input drivers) and one for
// the OR array. single_shared: one footer for everything.
enum class DomainGranularity { per_array, single_shared };

const char* to_string(Variant v);
const char* to_string(GateKind k);
const char* to_string(NetKind k);
const char* to_string(SleepMode m);

using NetId = std::size_t;

struct Net {
    std::string name;
    NetKind kind;

    friend bool operator==(const Net&, const Net&) = default;
};

struct GateInstance {
    GateKind kind;
    std::string name;
    std::vector<NetId> inputs;
    NetId output;
    std::optional<std::size_t> sleep_domain;
    double unit_width;  // contribution to its domain's w_circuit

    std::size_t fan_in() const noexcept { return inputs.size(); }

    friend bool operator==(const GateInstance&, const GateInstance&) = default;
};

struct SleepDomain {
    std::string name;
    FooterConfig footer;
    std::vector<std::size_t> members;  // gate indices
    NetId virtual_ground;
    SleepMode mode = SleepMode::active;
};

struct SynthesisOptions {
    DomainGranularity granularity = DomainGranularity::per_array;
    double unit_width = 1.0;
};

class GatedNetlist {
public:
    Variant variant() const noexcept { return variant_; }
    const std::vector<Net>& nets() const noexcept { return nets_; }
    const std::vector<GateInstance>& gates() const noexcept { return gates_; }
    const std::vector<SleepDomain>& sleep_domains() const noexcept { return domains_; }

    std::size_t num_inputs() const noexcept { return input_nets_.size(); }
    std::size_t num_products() const noexcept { return product_nets_.size(); }
    std::size_t num_outputs() const noexcept { return output_nets_.size(); }

    const std::vector<NetId>& input_nets() const noexcept { return input_nets_; }
    const std::vector<NetId>& product_nets() const noexcept { return product_nets_; }
    const std::vector<NetId>& output_nets() const noexcept { return output_nets_; }

    // Names of the input lines, in declaration order.
    std::vector<std::string> line_names() const;

    // Index of the gate driving the input line's complement, i.e. its driver.
    std::size_t line_driver(std::size_t line) const;

    // Checks every structural invariant; throws ContractError.
    void validate() const;

private:
    friend GatedNetlist synthesize(const PlaPersonality&, Variant, const std::optional<FooterConfig>&,
                                   const SynthesisOptions&);
    friend GatedNetlist set_mode(const GatedNetlist&, SleepMode);

    NetId add_net(std::string name, NetKind kind);

    Variant variant_ = Variant::conventional;
    std::vector<Net> nets_;
    std::vector<GateInstance> gates_;
    std::vector<SleepDomain> domains_;
    std::vector<NetId> input_nets_;
    std::vector<NetId> complement_nets_;
    std::vector<NetId> product_nets_;
    std::vector<NetId> output_nets_;
    std::vector<std::size_t> line_drivers_;
};

// One inverter per input, one AND macro per product row (don't-cares get no
// wire), one OR macro per output. The gated variant needs a footer template;
// each domain's w_circuit becomes the sum of its members' unit widths.
GatedNetlist synthesize(const PlaPersonality& p, Variant variant,
                        const std::optional<FooterConfig>& footer_template = std::nullopt,
                        const SynthesisOptions& options = {});

// Copy with every sleep domain in `mode`. Conventional netlists throw
// UnsupportedOperationError.
GatedNetlist set_mode(const GatedNetlist& n, SleepMode mode);

// Gate-level logic simulation: AND macro = conjunction of its inputs, OR
// macro = disjunction. Sleep domains must be active.
std::vector<bool> simulate_logic(const GatedNetlist& n, const InputVector& v);

nlohmann::json to_json(const GatedNetlist& n);

}  // namespace plagate
