#pragma once

#include "CLI11.hpp"

#include <functional>
#include <memory>

namespace lvsg::cli {

/// Registers every subcommand on `app`; the selected one's work is stored in
/// `action` and runs after parsing succeeds.
void register_commands(CLI::App& app, std::function<void()>& action);

} // namespace lvsg::cli
