#include "qubus/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace qubus {

std::string format_double(double v, int precision) {
    if (std::isnan(v)) return {};
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

CsvWriter::CsvWriter(std::ostream& out, int precision) : out_(out), precision_(precision) {
    if (precision < 1 || precision > 17) {
        throw std::invalid_argument("csv precision must lie in [1, 17]");
    }
}

CsvWriter& CsvWriter::cell(std::string_view text) {
    if (row_open_) out_ << ',';
    row_open_ = true;
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
        out_ << text;
    } else {
        out_ << '"';
        for (char c : text) {
            if (c == '"') out_ << '"';
            out_ << c;
        }
        out_ << '"';
    }
    return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return cell(std::string_view(buf, ptr - buf));
}

CsvWriter& CsvWriter::cell(std::uint64_t v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return cell(std::string_view(buf, ptr - buf));
}

void CsvWriter::end_row() {
    out_ << '\n';
    row_open_ = false;
}

}  // namespace qubus
