/**
 * @file csv.hpp
 * @brief Comma-separated reports: `#` comment lines, one header row, data
 * rows, then `#` summary lines of the form `# PASS key: detail` or
 * `# FAIL key: detail`. Reals are written with 17 significant digits so they
 * read back bit-for-bit.
 */
#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace lbern {

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

struct SummaryLine {
    bool pass = true;
    std::string key;
    std::string detail;
};

struct CsvReport {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<SummaryLine> summary;

    void add_summary(bool pass, std::string key, std::string detail) {
        summary.push_back({pass, std::move(key), std::move(detail)});
    }

    [[nodiscard]] bool all_pass() const {
        return std::all_of(summary.begin(), summary.end(), [](const auto& s) { return s.pass; });
    }
};

/// Incremental row builder: row << 1.5 << "name" << true.
class RowBuilder {
  public:
    RowBuilder& operator<<(double v) { return push(format_real(v)); }
    RowBuilder& operator<<(int v) { return push(std::to_string(v)); }
    RowBuilder& operator<<(long v) { return push(std::to_string(v)); }
    RowBuilder& operator<<(unsigned long v) { return push(std::to_string(v)); }
    RowBuilder& operator<<(unsigned long long v) { return push(std::to_string(v)); }
    RowBuilder& operator<<(bool v) { return push(format_bool(v)); }
    RowBuilder& operator<<(const char* v) { return push(v); }
    RowBuilder& operator<<(std::string v) { return push(std::move(v)); }

    [[nodiscard]] std::vector<std::string> take() { return std::move(cells_); }

  private:
    RowBuilder& push(std::string s) {
        cells_.push_back(std::move(s));
        return *this;
    }
    std::vector<std::string> cells_;
};

namespace detail {

inline std::string quote_field(std::string_view f) {
    if (f.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(f);
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_record(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << quote_field(fields[i]);
    }
    os << '\n';
}

/// Splits one record; quoted fields may contain commas and doubled quotes.
inline std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace detail

inline void write_csv(std::ostream& os, const CsvReport& r) {
    for (const auto& c : r.comments) os << "# " << c << '\n';
    detail::write_record(os, r.header);
    for (const auto& row : r.rows) detail::write_record(os, row);
    for (const auto& s : r.summary)
        os << "# " << (s.pass ? "PASS " : "FAIL ") << s.key << ": " << s.detail << '\n';
}

inline std::string to_csv_string(const CsvReport& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

/// Inverse of write_csv for reports whose fields contain no line breaks.
inline CsvReport parse_csv(std::istream& is) {
    CsvReport r;
    std::string line;
    bool seen_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# ", 0) == 0) {
            const std::string body = line.substr(2);
            if (!seen_header) {
                r.comments.push_back(body);
                continue;
            }
            const bool pass = body.rfind("PASS ", 0) == 0;
            const bool fail = body.rfind("FAIL ", 0) == 0;
            if (pass || fail) {
                const auto rest = body.substr(5);
                const auto colon = rest.find(": ");
                r.summary.push_back({pass, rest.substr(0, colon),
                                     colon == std::string::npos ? "" : rest.substr(colon + 2)});
            }
            continue;
        }
        if (!seen_header) {
            r.header = detail::split_record(line);
            seen_header = true;
        } else {
            r.rows.push_back(detail::split_record(line));
        }
    }
    return r;
}

} // namespace lbern
