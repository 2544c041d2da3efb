#pragma once

// Per-input-vector, per-line power for conventional and footer-gated PLAs.
//
// Power is attributed to the input-line drivers: a line dissipates nothing
// while its bit is 0, and its calibrated base power while the bit is 1. The
// gated design scales the leakage share of that power by the sleep/active
// leakage ratio of the driver's sleep domain.

#include "plagate/device.hpp"
#include "plagate/netlist.hpp"
#include "plagate/pla.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace plagate {

struct LineCalibration {
    struct Line {
        std::string name;
        double base_pw = 0.0;      // driver power at logic high
        double gated_scale = 1.0;  // gated / conventional, in (0, 1]
    };
    std::vector<Line> lines;

    const Line* find(const std::string& name) const;
    void validate() const;
};

struct PowerParams {
    SupplyConfig supply;
    // Used for conventional netlists; gated netlists use each line driver's
    // own domain footer.
    FooterConfig footer;
};

struct LinePower {
    std::string line;
    double conventional_pw = 0.0;
    double gated_pw = 0.0;
    PowerBreakdown conventional;  // picowatts, same decomposition as average_power
    PowerBreakdown gated;
};

struct PowerRow {
    InputVector vector;
    std::string line;
    double conventional_pw = 0.0;
    double gated_pw = 0.0;

    // 1 - gated/conventional, or 0 when conventional is 0.
    double saving_fraction() const noexcept;
};

class PowerReport {
public:
    PowerReport() = default;
    explicit PowerReport(std::vector<PowerRow> rows);

    const std::vector<PowerRow>& rows() const noexcept { return rows_; }
    // Line names in first-appearance order.
    std::vector<std::string> lines() const;

    const PowerRow* find(const InputVector& v, const std::string& line) const;

private:
    std::vector<PowerRow> rows_;
};

// Power of one design variant: (vector, line) -> picowatts.
struct VariantRow {
    InputVector vector;
    std::string line;
    double power_pw = 0.0;
};

struct VariantReport {
    Variant variant;
    std::vector<VariantRow> rows;
};

VariantReport column(const PowerReport& report, Variant variant);
PowerReport merge(const VariantReport& conventional, const VariantReport& gated);

std::vector<LinePower> line_power(const GatedNetlist& n, const InputVector& v, const LineCalibration& cal,
                                  const PowerParams& params);

// Rows ordered vectors ascending, then lines in declaration order.
PowerReport sweep_all_vectors(const GatedNetlist& n, const LineCalibration& cal, const PowerParams& params);

// Calibration derived from the device model alone: base = average power of one
// off driver, gated scale = 1 - leakage_share * (1 - sleep/active ratio).
LineCalibration model_calibration(const GatedNetlist& n, const PowerParams& params);

enum class ReferenceColumn { conventional, gated };

struct Residual {
    InputVector vector;
    std::string line;
    ReferenceColumn column;
    double reference_pw;
    double model_pw;
    double relative_error;  // (model - reference) / reference
    bool outlier;
};

struct Calibration {
    LineCalibration calibration;
    std::vector<Residual> residuals;

    std::vector<Residual> outliers() const;
};

// Robust outlier threshold: an entry is an outlier when its deviation from the
// line median exceeds kOutlierFactor * max(MAD, kSpreadFloor * |median|).
inline constexpr double kOutlierFactor = 3.0;
inline constexpr double kSpreadFloor = 0.005;

// Per line: base = mean of non-outlier nonzero conventional entries, gated
// scale = mean of non-outlier gated/conventional ratios.
Calibration calibrate(const PowerReport& reference);

struct LineSummary {
    std::string line;
    double mean_saving = 0.0;  // fractions, not percent
    double min_saving = 0.0;
    double max_saving = 0.0;
    std::size_t rows_used = 0;
};

struct ComparisonSummary {
    std::vector<LineSummary> lines;
    double total_saving = 0.0;  // 1 - sum(gated) / sum(conventional)

    const LineSummary* find(const std::string& line) const;
};

// Means over rows where the conventional power is nonzero. Throws
// ReportShapeError when the two reports do not cover the same keys.
ComparisonSummary compare_designs(const VariantReport& conventional, const VariantReport& gated);

// CSV: vector,line,conventional_pw,gated_pw,saving_fraction (full precision).
void write_report_csv(std::ostream& out, const PowerReport& report);
// Accepts the same columns; saving_fraction is optional and recomputed.
PowerReport read_report_csv(std::istream& in);
PowerReport load_report_csv(const std::string& path);

// CSV: vector,line,power_pw
void write_variant_csv(std::ostream& out, const VariantReport& report);
VariantReport read_variant_csv(std::istream& in, Variant variant);

void write_summary_csv(std::ostream& out, const ComparisonSummary& summary);

nlohmann::json to_json(const PowerReport& report);
nlohmann::json to_json(const ComparisonSummary& summary);

// Shortest text that round-trips the double.
std::string format_full(double value);

}  // namespace plagate
