#pragma once

#include <string>
#include <vector>

namespace ccbell {

// Shortest round-trip decimal form, '.' separator regardless of locale; "inf"/"-inf"/"nan".
std::string format_double(double v);

// Minimal CSV table with a header row; cells are written verbatim.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void add_row(std::vector<std::string> cells);
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace ccbell
