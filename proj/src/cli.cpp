#include "bbr/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bbr/harness.hpp"
#include "bbr/io.hpp"

namespace bbr {

namespace {

struct Common {
    double k = 2.0;
    double beta = 0.0;
    int j = 1;
    double sigma = 1.0;
    int n = 0;
    std::string format = "csv";
    int precision = 12;

    [[nodiscard]] OutputFormat output() const {
        OutputFormat f{output_kind_from_string(format), precision};
        f.validate();
        return f;
    }
    [[nodiscard]] ClassParams params() const {
        ClassParams p{k, beta};
        p.validate();
        return p;
    }
    [[nodiscard]] TransformSpec spec() const {
        TransformSpec s{transform_kind(j), sigma, n};
        s.validate();
        return s;
    }
};

std::size_t default_order() {
    const char* env = std::getenv("BBR_ORDER");
    if (env == nullptr || *env == '\0') {
        return kDefaultOrder;
    }
    std::size_t pos = 0;
    const std::string s(env);
    unsigned long v = 0;
    try {
        v = std::stoul(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || v < 1 || v > (1UL << 20)) {
        throw DomainError("BBR_ORDER must be an integer in [1, 1048576]");
    }
    return v;
}

void add_class_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--k", c.k, "boundary rotation parameter, k >= 2")->capture_default_str();
    cmd->add_option("--beta", c.beta, "order, 0 <= beta < 1")->capture_default_str();
}

void add_spec_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--j", c.j, "transform family, 1 or 2")->capture_default_str();
    cmd->add_option("--sigma", c.sigma, "sigma > 0")->capture_default_str();
    cmd->add_option("--n", c.n, "level n >= 0")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "csv or json")->capture_default_str();
    cmd->add_option("--precision", c.precision, "significant digits, 1..17")->capture_default_str();
}

std::vector<double> parse_r_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = text.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) {
        throw DomainError("--r-grid must be start:stop:step");
    }
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    try {
        std::size_t p1 = 0;
        std::size_t p2 = 0;
        std::size_t p3 = 0;
        const std::string s1 = text.substr(0, a);
        const std::string s2 = text.substr(a + 1, b - a - 1);
        const std::string s3 = text.substr(b + 1);
        start = std::stod(s1, &p1);
        stop = std::stod(s2, &p2);
        step = std::stod(s3, &p3);
        if (p1 != s1.size() || p2 != s2.size() || p3 != s3.size()) {
            throw std::invalid_argument("trailing characters");
        }
    } catch (const std::exception&) {
        throw DomainError("--r-grid must be start:stop:step");
    }
    if (!(step > 0.0) || !(start >= 0.0) || !(stop <= 0.95) || !(start <= stop)) {
        throw DomainError("--r-grid must satisfy 0 <= start <= stop <= 0.95 and step > 0");
    }
    std::vector<double> radii;
    // Index-based so the stop value is not lost to accumulated rounding.
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
        radii.push_back(std::min(stop, start + static_cast<double>(i) * step));
    }
    return radii;
}

int cmd_radius(const Common& c, bool numeric_check, std::ostream& out) {
    const auto params = c.params();
    const auto fmt = c.output();
    const double cf = radius_closed_form(params);
    Table t;
    if (!numeric_check) {
        t.header = {"k", "beta", "radius"};
        t.rows.push_back({params.k, params.beta, cf});
    } else {
        const auto report = radius_numeric_adaptive(
            [&](std::size_t order) { return extremal_H(params, order); }, 1e-8, cf);
        t.header = {"k", "beta", "closed_form", "lo", "hi", "discrepancy", "order"};
        t.rows.push_back({params.k, params.beta, cf, report.lo, report.hi, *report.discrepancy,
                          static_cast<double>(report.order)});
    }
    write_table(out, t, fmt);
    return kExitOk;
}

int cmd_bound(const Common& c, const std::string& r_grid, std::ostream& out) {
    const auto params = c.params();
    const auto spec = c.spec();
    const auto fmt = c.output();
    Table t;
    t.header = {"r", "bound", "value_at_H", "gap"};
    for (const auto& row : sharpness_scan(params, spec, parse_r_grid(r_grid))) {
        t.rows.push_back({row.r, row.bound, row.value_at_H, row.gap});
    }
    write_table(out, t, fmt);
    return kExitOk;
}

int cmd_coeffs(const Common& c, int max_l, std::ostream& out) {
    const auto spec = c.spec();
    const auto fmt = c.output();
    if (max_l < 1) {
        throw DomainError("--max-l must be >= 1");
    }
    Table t;
    t.header = {"l", "c"};
    for (int l = 1; l <= max_l; ++l) {
        t.rows.push_back({static_cast<double>(l), coeff_multiplier(spec, static_cast<std::size_t>(l))});
    }
    write_table(out, t, fmt);
    return kExitOk;
}

std::string read_all(std::istream& in) {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_source(const std::string& path, std::istream& in) {
    if (path == "-") {
        return read_all(in);
    }
    std::ifstream f(path);
    if (!f) {
        throw DomainError("cannot open " + path);
    }
    return read_all(f);
}

int cmd_transform(const Common& c, const std::string& input, std::size_t order, std::istream& in,
                  std::ostream& out) {
    const auto spec = c.spec();
    const auto fmt = c.output();
    json doc;
    try {
        doc = json::parse(read_source(input, in));
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    }
    // A measure document carries its own (k, beta); a series is taken as given.
    TruncatedSeries h = doc.contains("atoms")
                            ? [&] {
                                  const auto m = measure_from_json(doc);
                                  return herglotz_series(m.measure, m.params.beta, order);
                              }()
                            : series_from_json(doc);
    const auto g = apply_phi(spec, h);
    Table t;
    t.header = {"l", "re", "im"};
    for (std::size_t l = 0; l <= g.order(); ++l) {
        t.rows.push_back({static_cast<double>(l), g[l].real(), g[l].imag()});
    }
    write_table(out, t, fmt);
    return kExitOk;
}

void write_cases_csv(std::ostream& out, const std::vector<VerificationCase>& cases, int precision) {
    out << "name,k,beta,j,sigma,n,tolerance,status,measured,detail\r\n";
    for (const auto& v : cases) {
        out << csv_escape(v.name) << ',' << format_number(v.params.k, precision) << ','
            << format_number(v.params.beta, precision) << ',';
        if (v.spec) {
            out << v.spec->j_index() << ',' << format_number(v.spec->sigma, precision) << ',' << v.spec->n;
        } else {
            out << ",,";
        }
        out << ',' << format_number(v.tolerance, precision) << ',' << to_string(v.status) << ','
            << format_number(v.measured, precision) << ',' << csv_escape(v.detail) << "\r\n";
    }
}

int cmd_verify(const Common& c, const std::string& grid_arg, std::uint64_t seed, std::size_t order,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
    const auto fmt = c.output();
    Grid grid;
    if (grid_arg != "default") {
        if (std::filesystem::is_regular_file(grid_arg)) {
            std::ifstream f(grid_arg);
            try {
                grid = grid_from_json(json::parse(read_all(f)));
            } catch (const json::exception& e) {
                throw FormatError(e.what());
            }
        } else {
            grid = parse_grid(grid_arg);
        }
    }
    SuiteOptions opts;
    opts.seed = seed;
    opts.order = order;
    const auto cases = run_suite(grid, opts);

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) {
            throw DomainError("cannot write " + out_path);
        }
    }
    std::ostream& report = out_path.empty() ? out : file;
    if (fmt.kind == OutputKind::json) {
        write_report(report, cases);
    } else {
        write_cases_csv(report, cases, fmt.precision);
    }
    // Keep standard output machine-readable when it carries the report.
    write_summary(out_path.empty() ? err : out, cases);
    return any_failed(cases) ? kExitFailedCase : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Analytic functions of bounded boundary rotation: radii, bounds and property checks", "bbr"};
    app.require_subcommand(1);

    Common common;
    std::size_t order = 0;
    bool numeric_check = false;
    std::string r_grid = "0:0.95:0.05";
    int max_l = 10;
    std::string grid_arg = "default";
    std::uint64_t seed = 7;
    std::string out_path;
    std::string input = "-";

    auto* radius = app.add_subcommand("radius", "radius of positivity r(k, beta)");
    add_class_flags(radius, common);
    radius->add_flag("--numeric-check", numeric_check, "also bracket the radius of the extremal function");
    add_output_flags(radius, common);

    auto* bound = app.add_subcommand("bound", "sharp lower bound for Re phi(h) against the extremal value");
    add_class_flags(bound, common);
    add_spec_flags(bound, common);
    bound->add_option("--r-grid", r_grid, "start:stop:step inside [0, 0.95]")->capture_default_str();
    add_output_flags(bound, common);

    auto* coeffs = app.add_subcommand("coeffs", "coefficient multipliers c_{l,n}");
    add_spec_flags(coeffs, common);
    coeffs->add_option("--max-l", max_l, "largest l")->capture_default_str();
    add_output_flags(coeffs, common);

    auto* verify = app.add_subcommand("verify", "run the property suite");
    verify->add_option("--grid", grid_arg, "default, a JSON file, or k=..;beta=..;sigma=..;n=..;j=..")
        ->capture_default_str();
    verify->add_option("--seed", seed, "random seed")->capture_default_str();
    verify->add_option("--order", order, "truncation order (default: BBR_ORDER or 64)");
    verify->add_option("--out", out_path, "write the report here instead of standard output");
    common.format = "json";
    add_output_flags(verify, common);

    auto* transform = app.add_subcommand("transform", "apply phi to a series or measure given as JSON");
    add_spec_flags(transform, common);
    transform->add_option("--input", input, "JSON file, - for standard input")->capture_default_str();
    transform->add_option("--order", order, "truncation order for measure input (default: BBR_ORDER or 64)");
    add_output_flags(transform, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    // verify defaults to JSON lines; the other commands to CSV.
    if (!verify->parsed() && (radius->count("--format") + bound->count("--format") + coeffs->count("--format") +
                              transform->count("--format")) == 0) {
        common.format = "csv";
    }

    try {
        if (order == 0) {
            order = default_order();
        }
        if (radius->parsed()) {
            return cmd_radius(common, numeric_check, out);
        }
        if (bound->parsed()) {
            return cmd_bound(common, r_grid, out);
        }
        if (coeffs->parsed()) {
            return cmd_coeffs(common, max_l, out);
        }
        if (verify->parsed()) {
            return cmd_verify(common, grid_arg, seed, order, out_path, out, err);
        }
        return cmd_transform(common, input, order, in, out);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace bbr
