#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace logconc {

struct SuiteTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::size_t failures = 0;
};

struct Report {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<SuiteTable> tables;

    std::size_t total_failures() const;
    SuiteTable* find(const std::string& name);
};

// 12 significant digits, locale-independent
std::string format_double(double v);

// One RFC-4180 CSV per table (UTF-8, LF) plus a machine-readable summary
// document when "json" is among the formats.
void emit(const Report& report, const std::string& out_dir,
          const std::vector<std::string>& formats);

}  // namespace logconc
