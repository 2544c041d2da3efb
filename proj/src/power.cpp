#include "plagate/power.hpp"

#include "plagate/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace plagate {

namespace {

constexpr double kPicowattsPerWatt = 1e12;

double mean(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

// Flags entries far from the median relative to a floored MAD.
std::vector<bool> flag_outliers(const std::vector<double>& xs) {
    std::vector<bool> flags(xs.size(), false);
    if (xs.size() < 3) return flags;
    const double med = median(xs);
    std::vector<double> deviations;
    deviations.reserve(xs.size());
    for (double x : xs) deviations.push_back(std::abs(x - med));
    const double spread = std::max(median(deviations), kSpreadFloor * std::abs(med));
    for (std::size_t i = 0; i < xs.size(); ++i) flags[i] = deviations[i] > kOutlierFactor * spread;
    return flags;
}

const FooterConfig& driver_footer(const GatedNetlist& n, std::size_t line, const PowerParams& params) {
    const auto& driver = n.gates()[n.line_driver(line)];
    if (driver.sleep_domain) return n.sleep_domains()[*driver.sleep_domain].footer;
    return params.footer;
}

double sleep_active_ratio(const FooterConfig& footer, double vdd) {
    const double vgnd = virtual_ground_closed_form(footer, vdd).clamped;
    return leakage_saving_ratio(footer, vdd, vgnd);
}

std::string key_of(const InputVector& v, const std::string& line) {
    return v.to_string() + '\x1f' + line;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        const auto first = cell.find_first_not_of(" \t");
        const auto last = cell.find_last_not_of(" \t");
        cells.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& text, std::size_t line_no, const std::string& column) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
        throw ParseError(line_no, "column " + column + ": '" + text + "' is not a number");
    if (value < 0) throw ParseError(line_no, "column " + column + ": power must be non-negative");
    return value;
}

// Reads a CSV with a header row into a list of (line number, column -> cell).
std::vector<std::pair<std::size_t, std::map<std::string, std::string>>> read_table(
    std::istream& in, const std::vector<std::string>& required) {
    std::vector<std::pair<std::size_t, std::map<std::string, std::string>>> table;
    std::vector<std::string> header;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.find_first_not_of(" \t") == std::string::npos || raw.front() == '#') continue;
        auto cells = split_csv(raw);
        if (header.empty()) {
            header = std::move(cells);
            for (const auto& col : required)
                if (std::find(header.begin(), header.end(), col) == header.end())
                    throw ParseError(line_no, "CSV header lacks column '" + col + "'");
            continue;
        }
        if (cells.size() != header.size())
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " cells, found " +
                                          std::to_string(cells.size()));
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
        table.emplace_back(line_no, std::move(row));
    }
    if (header.empty()) throw ParseError(line_no, "CSV has no header row");
    return table;
}

InputVector parse_vector(const std::string& text, std::size_t line_no) {
    if (text.empty()) throw ParseError(line_no, "empty input vector");
    try {
        return InputVector::from_string(text);
    } catch (const ContractError& e) {
        throw ParseError(line_no, e.what());
    }
}

}  // namespace

std::string format_full(double value) {
    if (value == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

// --- LineCalibration -------------------------------------------------------

const LineCalibration::Line* LineCalibration::find(const std::string& name) const {
    auto it = std::find_if(lines.begin(), lines.end(), [&](const Line& l) { return l.name == name; });
    return it == lines.end() ? nullptr : &*it;
}

void LineCalibration::validate() const {
    for (const auto& l : lines) {
        if (!(l.base_pw >= 0) || !std::isfinite(l.base_pw))
            throw ConfigError("line " + l.name + ": base power must be non-negative");
        if (!(l.gated_scale > 0 && l.gated_scale <= 1))
            throw ConfigError("line " + l.name + ": gated scaling must lie in (0, 1]");
    }
}

// --- reports ---------------------------------------------------------------

double PowerRow::saving_fraction() const noexcept {
    return conventional_pw > 0 ? 1.0 - gated_pw / conventional_pw : 0.0;
}

PowerReport::PowerReport(std::vector<PowerRow> rows) : rows_(std::move(rows)) {}

std::vector<std::string> PowerReport::lines() const {
    std::vector<std::string> names;
    for (const auto& r : rows_)
        if (std::find(names.begin(), names.end(), r.line) == names.end()) names.push_back(r.line);
    return names;
}

const PowerRow* PowerReport::find(const InputVector& v, const std::string& line) const {
    auto it = std::find_if(rows_.begin(), rows_.end(),
                           [&](const PowerRow& r) { return r.vector == v && r.line == line; });
    return it == rows_.end() ? nullptr : &*it;
}

VariantReport column(const PowerReport& report, Variant variant) {
    VariantReport out{variant, {}};
    out.rows.reserve(report.rows().size());
    for (const auto& r : report.rows())
        out.rows.push_back({r.vector, r.line, variant == Variant::conventional ? r.conventional_pw : r.gated_pw});
    return out;
}

PowerReport merge(const VariantReport& conventional, const VariantReport& gated) {
    if (conventional.rows.size() != gated.rows.size())
        throw ReportShapeError("reports have " + std::to_string(conventional.rows.size()) + " and " +
                               std::to_string(gated.rows.size()) + " rows");
    std::map<std::string, double> gated_by_key;
    for (const auto& r : gated.rows) gated_by_key[key_of(r.vector, r.line)] = r.power_pw;
    std::vector<PowerRow> rows;
    rows.reserve(conventional.rows.size());
    for (const auto& r : conventional.rows) {
        auto it = gated_by_key.find(key_of(r.vector, r.line));
        if (it == gated_by_key.end())
            throw ReportShapeError("gated report lacks (" + r.vector.to_string() + ", " + r.line + ")");
        rows.push_back({r.vector, r.line, r.power_pw, it->second});
    }
    return PowerReport(std::move(rows));
}

// --- power model -----------------------------------------------------------

std::vector<LinePower> line_power(const GatedNetlist& n, const InputVector& v, const LineCalibration& cal,
                                  const PowerParams& params) {
    if (v.size() != n.num_inputs())
        throw ContractError("input vector has " + std::to_string(v.size()) + " bits, netlist has " +
                            std::to_string(n.num_inputs()) + " inputs");
    cal.validate();
    params.supply.validate();

    const PowerBreakdown shape = average_power(params.supply, 0.0);
    const double non_leak = shape.switching + shape.short_circuit;
    const auto names = n.line_names();

    std::vector<LinePower> result;
    result.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto* line = cal.find(names[i]);
        if (line == nullptr) throw ConfigError("no calibration for line " + names[i]);

        LinePower lp;
        lp.line = names[i];
        if (v[i]) {
            const double base = line->base_pw;
            const double scale = line->gated_scale;
            const double ratio = sleep_active_ratio(driver_footer(n, i, params), params.supply.vdd);
            double leak_share = 0.0;
            if (scale < 1.0) {
                if (ratio >= 1.0)
                    throw ConfigError("line " + names[i] + ": gated scaling below 1 but the footer saves no leakage");
                leak_share = (1.0 - scale) / (1.0 - ratio);
                if (leak_share > 1.0)
                    throw ConfigError("line " + names[i] + ": gated scaling " + format_full(scale) +
                                      " needs more leakage saving than the footer provides (ratio " +
                                      format_full(ratio) + ")");
            }
            const double other = base * (1.0 - leak_share);
            const double switching = non_leak > 0 ? other * shape.switching / non_leak : other;
            const double short_circuit = non_leak > 0 ? other * shape.short_circuit / non_leak : 0.0;
            lp.conventional = {switching, short_circuit, base * leak_share};
            lp.gated = {switching, short_circuit, base * leak_share * ratio};
            lp.conventional_pw = base;
            lp.gated_pw = base * scale;
        }
        result.push_back(std::move(lp));
    }
    return result;
}

PowerReport sweep_all_vectors(const GatedNetlist& n, const LineCalibration& cal, const PowerParams& params) {
    if (n.num_inputs() > kMaxEnumerationInputs)
        throw CapacityError("cannot sweep " + std::to_string(n.num_inputs()) + " inputs (limit " +
                            std::to_string(kMaxEnumerationInputs) + ")");
    std::vector<PowerRow> rows;
    const std::uint64_t count = std::uint64_t{1} << n.num_inputs();
    rows.reserve(count * n.num_inputs());
    for (std::uint64_t index = 0; index < count; ++index) {
        const auto v = InputVector::from_index(index, n.num_inputs());
        for (auto& lp : line_power(n, v, cal, params)) rows.push_back({v, lp.line, lp.conventional_pw, lp.gated_pw});
    }
    return PowerReport(std::move(rows));
}

LineCalibration model_calibration(const GatedNetlist& n, const PowerParams& params) {
    params.supply.validate();
    LineCalibration cal;
    const auto names = n.line_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        const FooterConfig& footer = driver_footer(n, i, params);
        const double i_leak = subthreshold_leakage(footer.circuit, 0.0, params.supply.vdd);
        const PowerBreakdown p = average_power(params.supply, i_leak);
        const double total = p.total();
        const double leak_share = total > 0 ? p.leakage / total : 0.0;
        const double ratio = sleep_active_ratio(footer, params.supply.vdd);
        cal.lines.push_back({names[i], total * kPicowattsPerWatt, 1.0 - leak_share * (1.0 - ratio)});
    }
    return cal;
}

// --- calibration -----------------------------------------------------------

std::vector<Residual> Calibration::outliers() const {
    std::vector<Residual> out;
    std::copy_if(residuals.begin(), residuals.end(), std::back_inserter(out), [](const Residual& r) { return r.outlier; });
    return out;
}

Calibration calibrate(const PowerReport& reference) {
    Calibration result;
    for (const auto& name : reference.lines()) {
        std::vector<const PowerRow*> conv_rows;
        std::vector<const PowerRow*> ratio_rows;
        for (const auto& r : reference.rows()) {
            if (r.line != name) continue;
            if (r.conventional_pw > 0) conv_rows.push_back(&r);
            if (r.conventional_pw > 0 && r.gated_pw > 0) ratio_rows.push_back(&r);
        }
        if (conv_rows.empty()) throw CalibrationError("line " + name + " has no nonzero conventional entry");
        if (ratio_rows.empty())
            throw CalibrationError("line " + name + " has no row with both conventional and gated power");

        std::vector<double> conv;
        for (const auto* r : conv_rows) conv.push_back(r->conventional_pw);
        std::vector<double> ratios;
        for (const auto* r : ratio_rows) ratios.push_back(r->gated_pw / r->conventional_pw);
        const auto conv_flags = flag_outliers(conv);
        const auto ratio_flags = flag_outliers(ratios);

        std::vector<double> kept_conv;
        for (std::size_t i = 0; i < conv.size(); ++i)
            if (!conv_flags[i]) kept_conv.push_back(conv[i]);
        std::vector<double> kept_ratios;
        for (std::size_t i = 0; i < ratios.size(); ++i)
            if (!ratio_flags[i]) kept_ratios.push_back(ratios[i]);

        const double base = mean(kept_conv);
        const double scale = mean(kept_ratios);
        if (scale > 1.0) throw CalibrationError("line " + name + ": gated power exceeds conventional power");
        result.calibration.lines.push_back({name, base, scale});

        for (std::size_t i = 0; i < conv_rows.size(); ++i) {
            const auto* r = conv_rows[i];
            result.residuals.push_back({r->vector, name, ReferenceColumn::conventional, r->conventional_pw, base,
                                        (base - r->conventional_pw) / r->conventional_pw, conv_flags[i]});
        }
        for (const auto& r : reference.rows()) {
            if (r.line != name || r.gated_pw <= 0) continue;
            bool outlier = true;
            double model = 0.0;
            auto it = std::find(ratio_rows.begin(), ratio_rows.end(), &r);
            if (it != ratio_rows.end()) {
                outlier = ratio_flags[static_cast<std::size_t>(it - ratio_rows.begin())];
                model = base * scale;
            }
            result.residuals.push_back(
                {r.vector, name, ReferenceColumn::gated, r.gated_pw, model, (model - r.gated_pw) / r.gated_pw, outlier});
        }
    }
    return result;
}

// --- comparison ------------------------------------------------------------

const LineSummary* ComparisonSummary::find(const std::string& line) const {
    auto it = std::find_if(lines.begin(), lines.end(), [&](const LineSummary& l) { return l.line == line; });
    return it == lines.end() ? nullptr : &*it;
}

ComparisonSummary compare_designs(const VariantReport& conventional, const VariantReport& gated) {
    const PowerReport joined = merge(conventional, gated);

    ComparisonSummary summary;
    double conv_total = 0.0;
    double gated_total = 0.0;
    for (const auto& name : joined.lines()) {
        LineSummary s;
        s.line = name;
        std::vector<double> savings;
        for (const auto& r : joined.rows()) {
            if (r.line != name || r.conventional_pw <= 0) continue;
            savings.push_back(r.saving_fraction());
        }
        if (!savings.empty()) {
            s.mean_saving = mean(savings);
            s.min_saving = *std::min_element(savings.begin(), savings.end());
            s.max_saving = *std::max_element(savings.begin(), savings.end());
            s.rows_used = savings.size();
        }
        summary.lines.push_back(std::move(s));
    }
    for (const auto& r : joined.rows()) {
        conv_total += r.conventional_pw;
        gated_total += r.gated_pw;
    }
    summary.total_saving = conv_total > 0 ? 1.0 - gated_total / conv_total : 0.0;
    return summary;
}

// --- CSV / JSON ------------------------------------------------------------

void write_report_csv(std::ostream& out, const PowerReport& report) {
    out << "vector,line,conventional_pw,gated_pw,saving_fraction\n";
    for (const auto& r : report.rows())
        out << r.vector.to_string() << ',' << r.line << ',' << format_full(r.conventional_pw) << ','
            << format_full(r.gated_pw) << ',' << format_full(r.saving_fraction()) << '\n';
}

PowerReport read_report_csv(std::istream& in) {
    std::vector<PowerRow> rows;
    for (auto& [line_no, row] : read_table(in, {"vector", "line", "conventional_pw", "gated_pw"})) {
        if (row["line"].empty()) throw ParseError(line_no, "empty line name");
        rows.push_back({parse_vector(row["vector"], line_no), row["line"],
                        parse_number(row["conventional_pw"], line_no, "conventional_pw"),
                        parse_number(row["gated_pw"], line_no, "gated_pw")});
    }
    return PowerReport(std::move(rows));
}

PowerReport load_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open report CSV '" + path + "'");
    try {
        return read_report_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path);
    }
}

void write_variant_csv(std::ostream& out, const VariantReport& report) {
    out << "vector,line,power_pw\n";
    for (const auto& r : report.rows)
        out << r.vector.to_string() << ',' << r.line << ',' << format_full(r.power_pw) << '\n';
}

VariantReport read_variant_csv(std::istream& in, Variant variant) {
    VariantReport report{variant, {}};
    for (auto& [line_no, row] : read_table(in, {"vector", "line", "power_pw"}))
        report.rows.push_back(
            {parse_vector(row["vector"], line_no), row["line"], parse_number(row["power_pw"], line_no, "power_pw")});
    return report;
}

void write_summary_csv(std::ostream& out, const ComparisonSummary& summary) {
    out << "line,mean_saving,min_saving,max_saving,rows_used\n";
    for (const auto& l : summary.lines)
        out << l.line << ',' << format_full(l.mean_saving) << ',' << format_full(l.min_saving) << ','
            << format_full(l.max_saving) << ',' << l.rows_used << '\n';
    out << "total," << format_full(summary.total_saving) << ",,,\n";
}

nlohmann::json to_json(const PowerReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows())
        rows.push_back({{"vector", r.vector.to_string()},
                        {"line", r.line},
                        {"conventional_pw", r.conventional_pw},
                        {"gated_pw", r.gated_pw},
                        {"saving_fraction", r.saving_fraction()}});
    return {{"rows", rows}};
}

nlohmann::json to_json(const ComparisonSummary& summary) {
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& l : summary.lines)
        lines.push_back({{"line", l.line},
                         {"mean_saving", l.mean_saving},
                         {"min_saving", l.min_saving},
                         {"max_saving", l.max_saving},
                         {"rows_used", l.rows_used}});
    return {{"lines", lines}, {"total_saving", summary.total_saving}};
}

}  // namespace plagate
