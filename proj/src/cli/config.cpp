#include "config.hpp"

#include "lvsg/error.hpp"

#include <fstream>

namespace lvsg::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<std::string> read_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file " + path.string());
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        out.push_back("--" + key);
        if (!value.empty()) out.push_back(value);
    }
    return out;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args)
{
    // args[0] is the program, args[1] the subcommand (if any)
    std::vector<std::string> rest;
    std::vector<std::string> config;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw ValidationError("--config needs a file name");
            config = read_config(args[++i]);
        } else if (a.rfind("--config=", 0) == 0) {
            config = read_config(a.substr(9));
        } else {
            rest.push_back(a);
        }
    }
    std::vector<std::string> out{args.empty() ? std::string("lvsg") : args[0]};
    std::size_t i = 0;
    if (!rest.empty() && rest[0].rfind("-", 0) != 0) out.push_back(rest[i++]);
    out.insert(out.end(), config.begin(), config.end());
    out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(i), rest.end());
    return out;
}

} // namespace lvsg::cli
