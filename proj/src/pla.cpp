#include "plagate/pla.hpp"

#include "plagate/errors.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace plagate {

char to_char(Literal lit) {
    switch (lit) {
    case Literal::use_complement: return '0';
    case Literal::use_true: return '1';
    case Literal::dont_care: return '-';
    }
    return '?';
}

InputVector InputVector::from_string(std::string_view text) {
    std::vector<bool> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw ContractError("input vector '" + std::string(text) + "' must contain only 0 and 1");
        bits.push_back(c == '1');
    }
    return InputVector(std::move(bits));
}

InputVector InputVector::from_index(std::uint64_t index, std::size_t width) {
    if (width > 64) throw CapacityError("input vector wider than 64 bits cannot be built from an index");
    std::vector<bool> bits(width);
    for (std::size_t i = 0; i < width; ++i) bits[i] = (index >> (width - 1 - i)) & 1U;
    return InputVector(std::move(bits));
}

std::string InputVector::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

std::uint64_t InputVector::to_index() const {
    if (bits_.size() > 64) throw CapacityError("input vector wider than 64 bits has no index");
    std::uint64_t index = 0;
    for (bool b : bits_) index = (index << 1) | (b ? 1U : 0U);
    return index;
}

// --- PlaPersonality --------------------------------------------------------

std::vector<std::string> PlaPersonality::default_input_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back(n <= 26 ? std::string(1, static_cast<char>('A' + i)) : "x" + std::to_string(i));
    return labels;
}

std::vector<std::string> PlaPersonality::default_output_labels(std::size_t m) {
    std::vector<std::string> labels;
    labels.reserve(m);
    for (std::size_t j = 0; j < m; ++j) labels.push_back("f" + std::to_string(j));
    return labels;
}

PlaPersonality::PlaPersonality(std::size_t num_inputs, std::size_t num_outputs,
                               std::vector<std::vector<Literal>> and_plane,
                               std::vector<std::vector<bool>> or_plane,
                               std::vector<std::string> input_labels,
                               std::vector<std::string> output_labels)
    : num_inputs_(num_inputs), num_products_(and_plane.size()), num_outputs_(num_outputs) {
    if (num_inputs_ < 1) throw ContractError("a PLA needs at least one input");
    if (num_outputs_ < 1) throw ContractError("a PLA needs at least one output");
    if (or_plane.size() != num_products_)
        throw ContractError("or_plane has " + std::to_string(or_plane.size()) + " rows, and_plane has " +
                            std::to_string(num_products_));

    and_plane_.reserve(num_products_ * num_inputs_);
    or_plane_.reserve(num_products_ * num_outputs_);
    for (std::size_t i = 0; i < num_products_; ++i) {
        if (and_plane[i].size() != num_inputs_)
            throw ContractError("and_plane row " + std::to_string(i) + " has " +
                                std::to_string(and_plane[i].size()) + " literals, expected " +
                                std::to_string(num_inputs_));
        if (or_plane[i].size() != num_outputs_)
            throw ContractError("or_plane row " + std::to_string(i) + " has " + std::to_string(or_plane[i].size()) +
                                " entries, expected " + std::to_string(num_outputs_));
        and_plane_.insert(and_plane_.end(), and_plane[i].begin(), and_plane[i].end());
        or_plane_.insert(or_plane_.end(), or_plane[i].begin(), or_plane[i].end());
    }

    input_labels_ = input_labels.empty() ? default_input_labels(num_inputs_) : std::move(input_labels);
    output_labels_ = output_labels.empty() ? default_output_labels(num_outputs_) : std::move(output_labels);
    if (input_labels_.size() != num_inputs_) throw ContractError("input label count does not match num_inputs");
    if (output_labels_.size() != num_outputs_) throw ContractError("output label count does not match num_outputs");
}

std::span<const Literal> PlaPersonality::and_row(std::size_t product) const {
    if (product >= num_products_) throw ContractError("product index out of range");
    return std::span<const Literal>(and_plane_).subspan(product * num_inputs_, num_inputs_);
}

bool PlaPersonality::feeds(std::size_t product, std::size_t output) const {
    if (product >= num_products_ || output >= num_outputs_) throw ContractError("or_plane index out of range");
    return or_plane_[product * num_outputs_ + output];
}

// --- parsing ---------------------------------------------------------------

namespace {

std::vector<std::string_view> split_blanks(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

std::size_t parse_count(std::string_view token, std::size_t line_no, std::string_view directive) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError(line_no, "malformed directive " + std::string(directive) + ": '" + std::string(token) +
                                      "' is not a count");
    return value;
}

}  // namespace

PlaPersonality parse_pla(std::istream& in) {
    std::optional<std::size_t> num_inputs;
    std::optional<std::size_t> num_outputs;
    std::optional<std::size_t> declared_products;
    std::size_t products_line = 0;
    std::vector<std::string> input_labels;
    std::vector<std::string> output_labels;
    std::vector<std::vector<Literal>> and_plane;
    std::vector<std::vector<bool>> or_plane;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto tokens = split_blanks(line);
        if (tokens.empty() || tokens.front().front() == '#') continue;

        const std::string_view head = tokens.front();
        if (head.front() == '.') {
            if (head == ".e" || head == ".end") break;
            if (head == ".i" || head == ".o" || head == ".p") {
                if (tokens.size() != 2)
                    throw ParseError(line_no, "malformed directive " + std::string(head) + ": expects one count");
                const std::size_t value = parse_count(tokens[1], line_no, head);
                if (head == ".p") {
                    declared_products = value;
                    products_line = line_no;
                    continue;
                }
                if (!and_plane.empty())
                    throw ParseError(line_no, std::string(head) + " must precede the product rows");
                if (value == 0) throw ParseError(line_no, std::string(head) + " must be at least 1");
                (head == ".i" ? num_inputs : num_outputs) = value;
            } else if (head == ".type") {
                if (tokens.size() != 2) throw ParseError(line_no, "malformed directive .type");
                if (tokens[1] != "f")
                    throw ParseError(line_no, "unsupported .type " + std::string(tokens[1]) + " (only type f is accepted)");
            } else if (head == ".ilb" || head == ".ob") {
                auto& labels = head == ".ilb" ? input_labels : output_labels;
                labels.assign(tokens.begin() + 1, tokens.end());
            } else {
                throw ParseError(line_no, "unsupported directive " + std::string(head));
            }
            continue;
        }

        if (!num_inputs || !num_outputs)
            throw ParseError(line_no, "product row before .i and .o are declared");
        if (tokens.size() != 2)
            throw ParseError(line_no, "product row must be an input cube and an output part separated by blanks");

        const std::string_view cube = tokens[0];
        const std::string_view outs = tokens[1];
        if (cube.size() != *num_inputs)
            throw ParseError(line_no, "cube width " + std::to_string(cube.size()) + " != declared " +
                                          std::to_string(*num_inputs));
        if (outs.size() != *num_outputs)
            throw ParseError(line_no, "output width " + std::to_string(outs.size()) + " != declared " +
                                          std::to_string(*num_outputs));

        std::vector<Literal> row;
        row.reserve(cube.size());
        for (char c : cube) {
            switch (c) {
            case '0': row.push_back(Literal::use_complement); break;
            case '1': row.push_back(Literal::use_true); break;
            case '-': row.push_back(Literal::dont_care); break;
            default:
                throw ParseError(line_no, std::string("invalid cube character '") + c + "' (expected 0, 1 or -)");
            }
        }
        std::vector<bool> out_row;
        out_row.reserve(outs.size());
        for (char c : outs) {
            if (c != '0' && c != '1')
                throw ParseError(line_no, std::string("invalid output character '") + c + "' (expected 0 or 1)");
            out_row.push_back(c == '1');
        }
        and_plane.push_back(std::move(row));
        or_plane.push_back(std::move(out_row));
    }

    if (!num_inputs) throw ParseError(line_no, "missing .i directive");
    if (!num_outputs) throw ParseError(line_no, "missing .o directive");
    if (declared_products && *declared_products != and_plane.size())
        throw ParseError(products_line, ".p declares " + std::to_string(*declared_products) + " products but " +
                                            std::to_string(and_plane.size()) + " rows follow");
    if (!input_labels.empty() && input_labels.size() != *num_inputs)
        throw ParseError(line_no, ".ilb names " + std::to_string(input_labels.size()) + " inputs, .i declares " +
                                      std::to_string(*num_inputs));
    if (!output_labels.empty() && output_labels.size() != *num_outputs)
        throw ParseError(line_no, ".ob names " + std::to_string(output_labels.size()) + " outputs, .o declares " +
                                      std::to_string(*num_outputs));

    return PlaPersonality(*num_inputs, *num_outputs, std::move(and_plane), std::move(or_plane),
                          std::move(input_labels), std::move(output_labels));
}

PlaPersonality parse_pla(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_pla(in);
}

PlaPersonality load_pla(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open .pla file '" + path + "'");
    try {
        return parse_pla(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path);
    }
}

std::string serialize_pla(const PlaPersonality& p) {
    std::ostringstream out;
    out << ".i " << p.num_inputs() << '\n' << ".o " << p.num_outputs() << '\n';
    auto join = [&](const char* directive, const std::vector<std::string>& labels) {
        out << directive;
        for (const auto& l : labels) out << ' ' << l;
        out << '\n';
    };
    if (p.input_labels() != PlaPersonality::default_input_labels(p.num_inputs())) join(".ilb", p.input_labels());
    if (p.output_labels() != PlaPersonality::default_output_labels(p.num_outputs())) join(".ob", p.output_labels());
    out << ".p " << p.num_products() << '\n';
    for (std::size_t i = 0; i < p.num_products(); ++i) {
        for (Literal lit : p.and_row(i)) out << to_char(lit);
        out << ' ';
        for (std::size_t j = 0; j < p.num_outputs(); ++j) out << (p.feeds(i, j) ? '1' : '0');
        out << '\n';
    }
    out << ".e\n";
    return out.str();
}

// --- evaluation ------------------------------------------------------------

bool product_true(const PlaPersonality& p, std::size_t product, const InputVector& v) {
    const auto row = p.and_row(product);
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] == Literal::use_true && !v[k]) return false;
        if (row[k] == Literal::use_complement && v[k]) return false;
    }
    return true;
}

std::vector<bool> evaluate(const PlaPersonality& p, const InputVector& v) {
    if (v.size() != p.num_inputs())
        throw ContractError("input vector has " + std::to_string(v.size()) + " bits, PLA has " +
                            std::to_string(p.num_inputs()) + " inputs");
    std::vector<bool> outputs(p.num_outputs(), false);
    for (std::size_t i = 0; i < p.num_products(); ++i) {
        if (!product_true(p, i, v)) continue;
        for (std::size_t j = 0; j < p.num_outputs(); ++j)
            if (p.feeds(i, j)) outputs[j] = true;
    }
    return outputs;
}

std::vector<InputVector> expand_minterms(const PlaPersonality& p, std::size_t output_index) {
    if (output_index >= p.num_outputs())
        throw ContractError("output index " + std::to_string(output_index) + " out of range");
    if (p.num_inputs() > kMaxEnumerationInputs)
        throw CapacityError("cannot enumerate " + std::to_string(p.num_inputs()) + " inputs (limit " +
                            std::to_string(kMaxEnumerationInputs) + ")");
    std::vector<InputVector> result;
    const std::uint64_t count = std::uint64_t{1} << p.num_inputs();
    for (std::uint64_t index = 0; index < count; ++index) {
        auto v = InputVector::from_index(index, p.num_inputs());
        if (evaluate(p, v)[output_index]) result.push_back(std::move(v));
    }
    return result;
}

}  // namespace plagate
