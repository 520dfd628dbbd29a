// CSV output with a '#'-prefixed configuration echo.  Numbers are written in
// full double precision with '.' as the decimal separator regardless of
// locale, so identical configurations produce byte-identical files.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cvtel::csv {

/// Shortest exact decimal form of a double ("%.17g", locale-independent).
std::string format(double v);

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    /// One "# key=value" echo line.
    void meta(const std::string& key, const std::string& value);
    void meta(const std::string& key, double value);
    void meta(const std::string& key, long value);

    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void raw_line(const std::string& line);

private:
    std::ostream& os_;
};

}  // namespace cvtel::csv
