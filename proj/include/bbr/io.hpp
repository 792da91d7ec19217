#pragma once

// Serialization of the library's value types and the table emitter shared by
// the CLI and the verification report.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bbr/caratheodory.hpp"
#include "bbr/classes.hpp"
#include "bbr/series.hpp"
#include "bbr/transforms.hpp"

namespace bbr {

using json = nlohmann::json;

/// Malformed input document.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// {"atoms": [{"s": .., "w": ..}], "k": .., "beta": ..}
[[nodiscard]] json measure_to_json(const AtomicMeasure& m, const ClassParams& params);
struct MeasureDocument {
    AtomicMeasure measure;
    ClassParams params;
};
[[nodiscard]] MeasureDocument measure_from_json(const json& j);

// {"closed_form": r, "lo": a, "hi": b, "discrepancy": d}; unknown values are null.
[[nodiscard]] json radius_report_to_json(const RadiusReport& r);
[[nodiscard]] RadiusReport radius_report_from_json(const json& j);

// {"sigma": s, "coeffs_re": [...], "coeffs_im": [...], "order": N}
[[nodiscard]] json normalized_function_to_json(const NormalizedFunction& f);
[[nodiscard]] NormalizedFunction normalized_function_from_json(const json& j);

// {"coeffs_re": [...], "coeffs_im": [...], "order": N[, "tail_bound_rate": B]}
[[nodiscard]] json series_to_json(const TruncatedSeries& s);
[[nodiscard]] TruncatedSeries series_from_json(const json& j);

enum class OutputKind { csv, json };

struct OutputFormat {
    OutputKind kind = OutputKind::csv;
    int precision = 12;  // significant digits, 1..17

    void validate() const;
};

[[nodiscard]] OutputKind output_kind_from_string(std::string_view s);

/// Fixed number of significant digits, trailing zeros kept ("%#.*g").
/// Non-finite values print as nan / inf / -inf.
[[nodiscard]] std::string format_number(double x, int precision);

/// RFC 4180 field quoting.
[[nodiscard]] std::string csv_escape(std::string_view field);
[[nodiscard]] std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// A rectangular table of numeric rows with a mandatory header.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// CSV: header row then CRLF-terminated records. JSON: an array of objects
/// keyed by header, numbers rendered at the requested precision.
void write_table(std::ostream& out, const Table& t, const OutputFormat& fmt);
[[nodiscard]] Table read_table_csv(std::string_view text);
[[nodiscard]] Table read_table_json(std::string_view text);

}  // namespace bbr
