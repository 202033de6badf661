#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace lvsg::cli {

/// Relative paths land in $LVSG_OUTPUT_DIR when it is set; "-" means stdout.
std::filesystem::path resolve_output(const std::string& requested, const std::string& fallback);

/// Write via a temporary file in the same directory and rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string format_number(double v); // 10 significant digits

struct CsvTable {
    std::vector<std::pair<std::string, std::string>> header; ///< "# key=value" lines
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& values);
    std::string str() const;
};

std::string format_json(const nlohmann::json& doc);

} // namespace lvsg::cli
