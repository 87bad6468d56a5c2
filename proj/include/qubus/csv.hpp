#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace qubus {

// Locale-independent numeric formatting: shortest general form at the given
// significant-digit count. NaN renders as an empty string (blank CSV cell).
std::string format_double(double v, int precision);

// Minimal CSV emitter with RFC-4180-style quoting. Rows are terminated by
// '\n'; cells containing commas, quotes, or newlines are quoted with inner
// quotes doubled. Output is byte-deterministic for identical inputs.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out, int precision = 12);

    CsvWriter& cell(std::string_view text);
    CsvWriter& cell(const char* text) { return cell(std::string_view{text}); }
    CsvWriter& cell(double v) { return cell(format_double(v, precision_)); }
    CsvWriter& cell(std::int64_t v);
    CsvWriter& cell(std::uint64_t v);
    CsvWriter& blank() { return cell(std::string_view{}); }
    void end_row();

private:
    std::ostream& out_;
    int precision_;
    bool row_open_ = false;
};

}  // namespace qubus
