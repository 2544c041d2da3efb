#pragma once

// Two-level PLA logic: the AND-plane / OR-plane personality, its Berkeley
// `.pla` text form, and evaluation.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace plagate {

// Largest input count for which exhaustive 2^n enumeration is allowed.
inline constexpr std::size_t kMaxEnumerationInputs = 24;

enum class Literal : std::uint8_t {
    use_complement,  // '0' in a cube
    use_true,        // '1'
    dont_care,       // '-'
};

char to_char(Literal lit);

// Bits in declaration order: bit 0 is the first input (line A), printed leftmost.
class InputVector {
public:
    InputVector() = default;
    explicit InputVector(std::vector<bool> bits) : bits_(std::move(bits)) {}

    // "101" -> {1,0,1}. Throws ContractError on other characters.
    static InputVector from_string(std::string_view text);
    // Binary-ascending enumeration order: index 0b100 with width 3 is "100".
    static InputVector from_index(std::uint64_t index, std::size_t width);

    std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i]; }
    const std::vector<bool>& bits() const noexcept { return bits_; }
    std::string to_string() const;
    std::uint64_t to_index() const;

    friend bool operator==(const InputVector&, const InputVector&) = default;
    // Same width: binary ascending order.
    friend auto operator<=>(const InputVector& a, const InputVector& b) {
        return a.bits_ <=> b.bits_;
    }

private:
    std::vector<bool> bits_;
};

class PlaPersonality {
public:
    // Rows of and_plane are products (num_inputs literals each); rows of
    // or_plane are products (num_outputs flags each). Empty label lists get
    // default names. Throws ContractError when the shape invariants fail.
    PlaPersonality(std::size_t num_inputs, std::size_t num_outputs,
                   std::vector<std::vector<Literal>> and_plane,
                   std::vector<std::vector<bool>> or_plane,
                   std::vector<std::string> input_labels = {},
                   std::vector<std::string> output_labels = {});

    std::size_t num_inputs() const noexcept { return num_inputs_; }
    std::size_t num_products() const noexcept { return num_products_; }
    std::size_t num_outputs() const noexcept { return num_outputs_; }

    std::span<const Literal> and_row(std::size_t product) const;
    bool feeds(std::size_t product, std::size_t output) const;

    const std::vector<std::string>& input_labels() const noexcept { return input_labels_; }
    const std::vector<std::string>& output_labels() const noexcept { return output_labels_; }

    // Labels a fresh personality gets: A, B, C, ... (x0, x1, ... past 26
    // inputs) and f0, f1, ...
    static std::vector<std::string> default_input_labels(std::size_t n);
    static std::vector<std::string> default_output_labels(std::size_t m);

    friend bool operator==(const PlaPersonality&, const PlaPersonality&) = default;

private:
    std::size_t num_inputs_;
    std::size_t num_products_;
    std::size_t num_outputs_;
    std::vector<Literal> and_plane_;  // row-major, num_products x num_inputs
    std::vector<bool> or_plane_;      // row-major, num_products x num_outputs
    std::vector<std::string> input_labels_;
    std::vector<std::string> output_labels_;
};

// Berkeley `.pla` (type f). Accepts .i .o .p .e/.end .type f .ilb .ob,
// `#` comment lines, LF or CRLF. Throws ParseError naming the line.
PlaPersonality parse_pla(std::istream& in);
PlaPersonality parse_pla(std::string_view text);
PlaPersonality load_pla(const std::string& path);

std::string serialize_pla(const PlaPersonality& p);

bool product_true(const PlaPersonality& p, std::size_t product, const InputVector& v);
std::vector<bool> evaluate(const PlaPersonality& p, const InputVector& v);

// Every vector (ascending) for which `output_index` evaluates true.
std::vector<InputVector> expand_minterms(const PlaPersonality& p, std::size_t output_index);

}  // namespace plagate
