#include <catch_amalgamated.hpp>

#include "oracle.hpp"
#include "plagate/errors.hpp"
#include "plagate/netlist.hpp"

#include <algorithm>

using namespace plagate;

namespace {

const std::string kDataDir = PLAGATE_DATA_DIR;

std::size_t count_kind(const GatedNetlist& n, GateKind k) {
    return static_cast<std::size_t>(
        std::count_if(n.gates().begin(), n.gates().end(), [&](const GateInstance& g) { return g.kind == k; }));
}

std::vector<GateInstance> without_domains(std::vector<GateInstance> gates) {
    for (auto& g : gates) g.sleep_domain.reset();
    return gates;
}

}  // namespace

TEST_CASE("three-input eight-minterm PLA, gated", "[netlist]") {
    const auto p = load_pla(kDataDir + "/example.pla");
    const auto n = synthesize(p, Variant::power_gated, FooterConfig{});
    CHECK(count_kind(n, GateKind::input_inverter) == 3);
    CHECK(count_kind(n, GateKind::and_macro) == 8);
    CHECK(count_kind(n, GateKind::or_macro) == 1);
    REQUIRE(n.sleep_domains().size() == 2);
    CHECK(n.num_products() == 8);

    // AND array: 3 inverters (1 unit) + 8 three-input macros; OR array: one 8-input macro.
    CHECK(n.sleep_domains()[0].footer.w_circuit == 3.0 + 8 * 3.0);
    CHECK(n.sleep_domains()[1].footer.w_circuit == 8.0);
    for (const auto& g : n.gates())
        if (g.kind == GateKind::and_macro) CHECK(g.fan_in() == 3);
}

TEST_CASE("empty personality, conventional", "[netlist]") {
    const auto p = load_pla(kDataDir + "/empty.pla");
    const auto n = synthesize(p, Variant::conventional);
    CHECK(count_kind(n, GateKind::input_inverter) == 1);
    CHECK(count_kind(n, GateKind::and_macro) == 0);
    CHECK(count_kind(n, GateKind::or_macro) == 1);
    CHECK(n.sleep_domains().empty());
    CHECK(simulate_logic(n, InputVector::from_string("1")) == std::vector<bool>{false});

    // Gated: zero-fan-in OR macro still gives its domain a positive width.
    const auto g = synthesize(p, Variant::power_gated, FooterConfig{});
    CHECK(g.sleep_domains()[1].footer.w_circuit == 1.0);
}

TEST_CASE("conventional and gated differ only in sleep domains", "[netlist]") {
    for (const auto& file : oracle::corpus_files(kDataDir + "/corpus")) {
        CAPTURE(file.string());
        const auto p = load_pla(file.string());
        const auto conv = synthesize(p, Variant::conventional);
        const auto gated = synthesize(p, Variant::power_gated, FooterConfig{});
        CHECK(without_domains(gated.gates()) == conv.gates());

        std::vector<Net> gated_nets;
        for (const auto& net : gated.nets())
            if (net.kind != NetKind::virtual_ground) gated_nets.push_back(net);
        CHECK(gated_nets == conv.nets());
        CHECK(gated.nets().size() == conv.nets().size() + 2);
    }
}

TEST_CASE("gate counts and widths follow the personality", "[netlist][property]") {
    for (const auto& file : oracle::corpus_files(kDataDir + "/corpus")) {
        CAPTURE(file.string());
        const auto p = load_pla(file.string());
        for (auto granularity : {DomainGranularity::per_array, DomainGranularity::single_shared}) {
            const auto n = synthesize(p, Variant::power_gated, FooterConfig{}, {granularity, 0.5});
            CHECK(count_kind(n, GateKind::input_inverter) == p.num_inputs());
            CHECK(count_kind(n, GateKind::and_macro) == p.num_products());
            CHECK(count_kind(n, GateKind::or_macro) == p.num_outputs());
            CHECK(n.sleep_domains().size() == (granularity == DomainGranularity::per_array ? 2u : 1u));

            for (std::size_t d = 0; d < n.sleep_domains().size(); ++d) {
                const auto& dom = n.sleep_domains()[d];
                double width = 0.0;
                for (std::size_t m : dom.members) {
                    CHECK(n.gates()[m].sleep_domain == d);
                    width += n.gates()[m].unit_width;
                }
                CHECK(dom.footer.w_circuit == width);
            }
            std::size_t and_index = 0;
            for (const auto& g : n.gates()) {
                CHECK(g.sleep_domain.has_value());
                if (g.kind == GateKind::and_macro) {
                    const auto row = p.and_row(and_index++);
                    const auto literals = std::count_if(row.begin(), row.end(),
                                                        [](Literal l) { return l != Literal::dont_care; });
                    CHECK(g.fan_in() == static_cast<std::size_t>(literals));
                    CHECK(g.unit_width == 0.5 * static_cast<double>(std::max<std::size_t>(g.fan_in(), 1)));
                }
            }
        }
    }
}

TEST_CASE("netlist logic equals PLA evaluation", "[netlist][property]") {
    for (const auto& file : oracle::corpus_files(kDataDir + "/corpus")) {
        CAPTURE(file.string());
        const auto p = load_pla(file.string());
        const auto conv = synthesize(p, Variant::conventional);
        const auto gated = synthesize(p, Variant::power_gated, FooterConfig{});
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << p.num_inputs()); ++i) {
            const auto v = InputVector::from_index(i, p.num_inputs());
            const auto expected = evaluate(p, v);
            REQUIRE(simulate_logic(conv, v) == expected);
            REQUIRE(simulate_logic(gated, v) == expected);
        }
    }
}

TEST_CASE("set_mode", "[netlist][mode]") {
    const auto p = parse_pla(".i 3\n.o 1\n11- 1\n--1 1\n.e\n");
    const auto gated = synthesize(p, Variant::power_gated, FooterConfig{});

    const auto asleep = set_mode(gated, SleepMode::sleep);
    for (const auto& d : asleep.sleep_domains()) CHECK(d.mode == SleepMode::sleep);
    CHECK(asleep.gates() == gated.gates());
    CHECK_THROWS_AS(simulate_logic(asleep, InputVector::from_string("101")), ContractError);

    const auto awake = set_mode(asleep, SleepMode::active);
    for (const auto& d : awake.sleep_domains()) CHECK(d.mode == SleepMode::active);
    for (std::uint64_t i = 0; i < 8; ++i) {
        const auto v = InputVector::from_index(i, 3);
        CHECK(simulate_logic(awake, v) == evaluate(p, v));
    }

    CHECK_THROWS_AS(set_mode(synthesize(p, Variant::conventional), SleepMode::sleep), UnsupportedOperationError);
}

TEST_CASE("gated synthesis needs a footer template", "[netlist][errors]") {
    const auto p = parse_pla(".i 1\n.o 1\n1 1\n");
    CHECK_THROWS_AS(synthesize(p, Variant::power_gated), ContractError);
    FooterConfig bad;
    bad.vg = 1.0;  // above the footer threshold
    CHECK_THROWS_AS(synthesize(p, Variant::power_gated, bad), DomainError);
}

TEST_CASE("netlist JSON export", "[netlist][json]") {
    const auto p = load_pla(kDataDir + "/example.pla");
    const auto j = to_json(synthesize(p, Variant::power_gated, FooterConfig{}));
    CHECK(j["variant"] == "power-gated");
    CHECK(j["gates"].size() == 12);
    CHECK(j["sleep_domains"].size() == 2);
    CHECK(j["sleep_domains"][0]["virtual_ground"] == "vgnd_and");
    CHECK(j["sleep_domains"][1]["footer"]["w_circuit"] == 8.0);
    CHECK(j["gates"][3]["kind"] == "and-macro");
    CHECK(j["gates"][3]["inputs"] == nlohmann::json::array({"A_n", "B_n", "C_n"}));
    CHECK(j["gates"][0]["sleep_domain"] == "and_array");

    const auto c = to_json(synthesize(p, Variant::conventional));
    CHECK(c["sleep_domains"].empty());
    CHECK(c["gates"][0]["sleep_domain"].is_null());
}
