#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lqdiv {

/// 12 significant digits, '.' separator, locale-independent. -0 prints as 0.
std::string format_number(double v);

std::string hex64(std::uint64_t v);

/// Minimal CSV emitter: LF line endings, optional leading comment line.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    CsvWriter& comment(std::string_view text);
    CsvWriter& header(const std::vector<std::string>& columns);

    CsvWriter& cell(double v);
    CsvWriter& cell(std::int64_t v);
    CsvWriter& cell(std::uint64_t v) { return cell(static_cast<std::int64_t>(v)); }
    CsvWriter& cell(int v) { return cell(static_cast<std::int64_t>(v)); }
    CsvWriter& cell(std::string_view text);
    CsvWriter& empty();
    CsvWriter& end_row();

private:
    void sep();
    std::ostream& out_;
    bool row_started_ = false;
};

}  // namespace lqdiv
