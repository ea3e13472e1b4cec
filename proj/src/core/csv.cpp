#include "invctl/csv.hpp"

#include "invctl/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace invctl {

std::vector<std::string> csv_columns(ControllerVariant variant)
{
    std::vector<std::string> cols{"t", "u", "y", "y_ref", "d", "d_forecast", "warmup"};
    if (variant == ControllerVariant::model_free_ip)
        cols.emplace_back("F_forecast");
    return cols;
}

std::string format_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

void write_csv(const RunResult& r, std::ostream& out)
{
    const auto cols = csv_columns(r.variant);
    for (std::size_t c = 0; c < cols.size(); ++c)
        out << (c ? "," : "") << cols[c];
    out << '\n';
    const bool model_free = r.variant == ControllerVariant::model_free_ip;
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
        line.clear();
        for (double v : {r.y.time_at(i), r.u[i], r.y[i], r.y_ref[i], r.d[i], r.d_forecast[i]}) {
            line += format_number(v);
            line += ',';
        }
        line += r.warmup[i] ? '1' : '0';
        if (model_free) {
            line += ',';
            line += format_number(r.f_forecast[i]);
        }
        line += '\n';
        out << line;
    }
}

void write_csv_file(const RunResult& result, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    write_csv(result, out);
    out.flush();
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

namespace {

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos)
            return out;
        pos = comma + 1;
    }
}

} // namespace

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw IoError("empty CSV input");
    for (auto cell : split(line))
        table.header.emplace_back(cell);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size())
            throw IoError("CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                          " fields, expected " + std::to_string(table.header.size()));
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            auto [ptr, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), row[c]);
            if (ec != std::errc() || ptr != cells[c].data() + cells[c].size())
                throw IoError("CSV line " + std::to_string(line_no) + ": bad number '" + std::string(cells[c]) + "'");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable read_csv_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    return read_csv(in);
}

} // namespace invctl
