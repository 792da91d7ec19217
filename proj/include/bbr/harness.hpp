#pragma once

// Property suite over parameter grids. Every case records the tolerance it was
// judged against, the worst deviation it measured and, on failure, the inputs
// that produced it.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bbr/caratheodory.hpp"
#include "bbr/io.hpp"
#include "bbr/transforms.hpp"

namespace bbr {

enum class CaseStatus { pass, fail, skipped };

[[nodiscard]] std::string_view to_string(CaseStatus s);
[[nodiscard]] CaseStatus case_status_from_string(std::string_view s);

struct VerificationCase {
    std::string name;
    ClassParams params;
    std::optional<TransformSpec> spec;
    double tolerance = 0.0;
    CaseStatus status = CaseStatus::pass;
    double measured = 0.0;       // worst deviation seen; its meaning is per family
    std::string detail;          // skip reason or a note on what was (not) covered
    std::optional<json> witness; // present whenever status == fail
};

[[nodiscard]] json case_to_json(const VerificationCase& c);
[[nodiscard]] VerificationCase case_from_json(const json& j);

/// Axis values of the parameter grid. Entries are validated when the suite
/// runs, not here, so that bad entries surface as skipped cases.
struct Grid {
    std::vector<double> k{2.0, 2.5, 3.0, 4.0, 6.0};
    std::vector<double> beta{0.0, 0.25, 0.5, 0.75};
    std::vector<double> sigma{1.0, 2.5, 4.0};
    std::vector<int> n{0, 1, 2};
    std::vector<int> j{1, 2};
};

/// "k=2,3;beta=0,0.5" style overrides on top of the default grid. Throws
/// DomainError on unknown axes, unparsable numbers or an empty axis.
[[nodiscard]] Grid parse_grid(std::string_view text);
/// {"k": [...], "beta": [...], ...}; missing axes keep their defaults.
[[nodiscard]] Grid grid_from_json(const json& j);

struct SuiteOptions {
    std::uint64_t seed = 7;
    std::size_t order = kDefaultOrder;
    int members_per_cell = 10;
    int sample_points = 200;
    int identity_cases = 100;
    int oracle_cases = 50;
    int f_cases = 50;
};

/// Runs every family on every valid cell. Never stops at a failure. The
/// result is sorted by case name (stable), so it is a pure function of
/// (grid, options).
[[nodiscard]] std::vector<VerificationCase> run_suite(const Grid& grid, const SuiteOptions& opts);

[[nodiscard]] bool any_failed(const std::vector<VerificationCase>& cases);

/// One JSON object per line.
void write_report(std::ostream& out, const std::vector<VerificationCase>& cases);
/// Per-family pass/fail/skip counts and the worst measured deviation.
void write_summary(std::ostream& out, const std::vector<VerificationCase>& cases);

struct ScanRow {
    double r = 0.0;
    double bound = 0.0;
    double value_at_H = 0.0;
    double gap = 0.0;       // |value_at_H - bound|
    double min_re = 0.0;    // min of Re phi(H) on |z| = r
    int sign = 0;           // sign of min_re
    bool inside = false;    // r < r(k, beta)
};

/// Bound, transformed extremal value and their gap at each radius in [0, 0.95].
[[nodiscard]] std::vector<ScanRow> sharpness_scan(const ClassParams& params, const TransformSpec& spec,
                                                  const std::vector<double>& radii);

}  // namespace bbr
