#include "bbr/io.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace bbr {

namespace {

json nullable(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_number(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<double>();
}

json coeff_arrays(const TruncatedSeries& s) {
    json re = json::array();
    json im = json::array();
    for (const auto& c : s.coeffs()) {
        re.push_back(c.real());
        im.push_back(c.imag());
    }
    return {{"coeffs_re", std::move(re)}, {"coeffs_im", std::move(im)}, {"order", s.order()}};
}

std::vector<complex> coeffs_from(const json& j) {
    const auto re = j.at("coeffs_re").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("coeffs_im")) {
        im = j.at("coeffs_im").get<std::vector<double>>();
    }
    if (re.size() != im.size() || re.empty()) {
        throw FormatError("series: coeffs_re and coeffs_im must be non-empty and equally long");
    }
    if (j.contains("order") && j.at("order").get<std::size_t>() + 1 != re.size()) {
        throw FormatError("series: order must equal the number of coefficients minus one");
    }
    std::vector<complex> c(re.size());
    for (std::size_t l = 0; l < re.size(); ++l) {
        c[l] = {re[l], im[l]};
    }
    return c;
}

template <typename F>
auto rethrow_as_format(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw FormatError(e.what());
    }
}

}  // namespace

json measure_to_json(const AtomicMeasure& m, const ClassParams& params) {
    json atoms = json::array();
    for (const auto& a : m.atoms()) {
        atoms.push_back({{"s", a.s}, {"w", a.w}});
    }
    return {{"atoms", std::move(atoms)}, {"k", params.k}, {"beta", params.beta}};
}

MeasureDocument measure_from_json(const json& j) {
    return rethrow_as_format([&] {
        std::vector<Atom> atoms;
        for (const auto& a : j.at("atoms")) {
            atoms.push_back({a.at("s").get<double>(), a.at("w").get<double>()});
        }
        ClassParams params{j.at("k").get<double>(), j.at("beta").get<double>()};
        params.validate();
        AtomicMeasure m(std::move(atoms));
        if (!m.admissible_for(params)) {
            throw DomainError("measure: total variation exceeds k");
        }
        return MeasureDocument{std::move(m), params};
    });
}

json radius_report_to_json(const RadiusReport& r) {
    return {{"closed_form", nullable(r.closed_form)},
            {"lo", r.lo},
            {"hi", r.hi},
            {"discrepancy", nullable(r.discrepancy)}};
}

RadiusReport radius_report_from_json(const json& j) {
    return rethrow_as_format([&] {
        RadiusReport r;
        r.closed_form = optional_number(j, "closed_form");
        r.lo = j.at("lo").get<double>();
        r.hi = j.at("hi").get<double>();
        r.discrepancy = optional_number(j, "discrepancy");
        return r;
    });
}

json normalized_function_to_json(const NormalizedFunction& f) {
    json j = coeff_arrays(f.unit_series);
    j["sigma"] = f.sigma;
    return j;
}

NormalizedFunction normalized_function_from_json(const json& j) {
    return rethrow_as_format([&] {
        return NormalizedFunction(TruncatedSeries(coeffs_from(j)), j.at("sigma").get<double>());
    });
}

json series_to_json(const TruncatedSeries& s) {
    json j = coeff_arrays(s);
    if (s.tail_bound_rate()) {
        j["tail_bound_rate"] = *s.tail_bound_rate();
    }
    return j;
}

TruncatedSeries series_from_json(const json& j) {
    return rethrow_as_format([&] { return TruncatedSeries(coeffs_from(j), optional_number(j, "tail_bound_rate")); });
}

void OutputFormat::validate() const {
    if (precision < 1 || precision > 17) {
        throw DomainError("precision must lie in [1, 17]");
    }
}

OutputKind output_kind_from_string(std::string_view s) {
    if (s == "csv") {
        return OutputKind::csv;
    }
    if (s == "json") {
        return OutputKind::json;
    }
    throw DomainError("format must be csv or json");
}

std::string format_number(double x, int precision) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    return fmt::format("{:#.{}g}", x, precision);
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                field_started = true;
                break;
            case ',':
                record.push_back(std::move(field));
                field.clear();
                field_started = true;
                break;
            case '\r':
                break;
            case '\n':
                record.push_back(std::move(field));
                field.clear();
                records.push_back(std::move(record));
                record.clear();
                field_started = false;
                break;
            default:
                field += c;
                field_started = true;
        }
    }
    if (quoted) {
        throw FormatError("csv: unterminated quoted field");
    }
    if (field_started || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

void write_table(std::ostream& out, const Table& t, const OutputFormat& fmt) {
    fmt.validate();
    if (fmt.kind == OutputKind::csv) {
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            out << (i ? "," : "") << csv_escape(t.header[i]);
        }
        out << "\r\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << format_number(row[i], fmt.precision);
            }
            out << "\r\n";
        }
        return;
    }
    // Numbers are emitted verbatim so the precision contract holds in JSON too.
    out << "[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out << (r ? ",\n " : "\n ") << "{";
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            const double v = i < t.rows[r].size() ? t.rows[r][i] : std::nan("");
            out << (i ? ", " : "") << json(t.header[i]).dump() << ": ";
            out << (std::isfinite(v) ? format_number(v, fmt.precision) : std::string("null"));
        }
        out << "}";
    }
    out << (t.rows.empty() ? "]\n" : "\n]\n");
}

Table read_table_csv(std::string_view text) {
    auto records = parse_csv(text);
    if (records.empty()) {
        throw FormatError("csv: missing header row");
    }
    Table t;
    t.header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.header.size()) {
            throw FormatError("csv: ragged row");
        }
        std::vector<double> row;
        for (const auto& f : records[r]) {
            row.push_back(std::stod(f));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table read_table_json(std::string_view text) {
    return rethrow_as_format([&] {
        const auto doc = nlohmann::ordered_json::parse(text);
        Table t;
        for (const auto& obj : doc) {
            if (t.header.empty()) {
                for (const auto& [key, _] : obj.items()) {
                    t.header.push_back(key);
                }
            }
            std::vector<double> row;
            for (const auto& key : t.header) {
                const auto& v = obj.at(key);
                row.push_back(v.is_null() ? std::nan("") : v.get<double>());
            }
            t.rows.push_back(std::move(row));
        }
        return t;
    });
}

}  // namespace bbr
