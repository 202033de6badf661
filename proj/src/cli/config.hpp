#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lvsg::cli {

/// Flat "key = value" file; '#' starts a comment. Each entry becomes the
/// flag pair "--key value" (or "--key" alone for an empty value).
std::vector<std::string> read_config(const std::filesystem::path& path);

/// Splices config-file flags in front of the command-line flags of the
/// subcommand so later (command-line) values win. Removes --config itself.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

} // namespace lvsg::cli
