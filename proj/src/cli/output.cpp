#include "output.hpp"

#include "lvsg/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

namespace lvsg::cli {

namespace fs = std::filesystem;

fs::path resolve_output(const std::string& requested, const std::string& fallback)
{
    const std::string name = requested.empty() ? fallback : requested;
    if (name == "-") return name;
    fs::path p(name);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("LVSG_OUTPUT_DIR"); dir && *dir) p = fs::path(dir) / p;
    }
    return p;
}

void write_atomic(const fs::path& path, const std::string& content)
{
    if (path == "-") {
        std::cout << content << std::flush;
        return;
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move output into place: " + path.string() + ": " + ec.message());
    }
}

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void CsvTable::add_row(const std::vector<double>& values)
{
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_number(v));
    rows.push_back(std::move(row));
}

std::string CsvTable::str() const
{
    std::ostringstream out;
    for (const auto& [k, v] : header) out << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    return out.str();
}

std::string format_json(const nlohmann::json& doc)
{
    return doc.dump(2) + "\n";
}

} // namespace lvsg::cli
