#include "cvtel/csv.hpp"

#include <cstdio>

namespace cvtel::csv {

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Writer::meta(const std::string& key, const std::string& value) {
    os_ << "# " << key << "=" << value << "\n";
}

void Writer::meta(const std::string& key, double value) { meta(key, format(value)); }

void Writer::meta(const std::string& key, long value) {
    meta(key, std::to_string(value));
}

void Writer::header(const std::vector<std::string>& columns) {
    for (size_t i = 0; i < columns.size(); ++i)
        os_ << (i ? "," : "") << columns[i];
    os_ << "\n";
}

void Writer::row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i)
        os_ << (i ? "," : "") << format(values[i]);
    os_ << "\n";
}

void Writer::raw_line(const std::string& line) { os_ << line << "\n"; }

}  // namespace cvtel::csv
