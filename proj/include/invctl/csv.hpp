#pragma once

#include "invctl/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace invctl {

/// Column order: t,u,y,y_ref,d,d_forecast,warmup, plus F_forecast for
/// model-free runs.
std::vector<std::string> csv_columns(ControllerVariant variant);

/// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_number(double v);

void write_csv(const RunResult& result, std::ostream& out);
void write_csv_file(const RunResult& result, const std::filesystem::path& path);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

} // namespace invctl
