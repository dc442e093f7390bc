#include "lqdiv/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace lqdiv {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

CsvWriter& CsvWriter::comment(std::string_view text) {
    out_ << "# " << text << '\n';
    return *this;
}

CsvWriter& CsvWriter::header(const std::vector<std::string>& columns) {
    for (const auto& c : columns) cell(std::string_view(c));
    return end_row();
}

void CsvWriter::sep() {
    if (row_started_) out_ << ',';
    row_started_ = true;
}

CsvWriter& CsvWriter::cell(double v) {
    sep();
    out_ << format_number(v);
    return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t v) {
    sep();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
    sep();
    if (text.find_first_of(",\"\n") == std::string_view::npos) {
        out_ << text;
        return *this;
    }
    out_ << '"';
    for (char ch : text) {
        if (ch == '"') out_ << '"';
        out_ << ch;
    }
    out_ << '"';
    return *this;
}

CsvWriter& CsvWriter::empty() {
    sep();
    return *this;
}

CsvWriter& CsvWriter::end_row() {
    out_ << '\n';
    row_started_ = false;
    return *this;
}

}  // namespace lqdiv
