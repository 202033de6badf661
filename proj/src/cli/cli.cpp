#include "lvsg/cli.hpp"

#include "commands.hpp"
#include "config.hpp"

#include "lvsg/error.hpp"

#include <iostream>

#ifndef LVSG_SCHEMA_VERSION
#define LVSG_SCHEMA_VERSION "0.0.0"
#endif

namespace lvsg::cli {

int run(const std::vector<std::string>& raw)
{
    std::function<void()> action;
    try {
        const std::vector<std::string> args = expand_config(raw);
        CLI::App app{"Lotka-Volterra / spin-glass numerics"};
        app.name("lvsg");
        app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        app.set_version_flag("--version", std::string(LVSG_SCHEMA_VERSION));
        app.require_subcommand(1);
        register_commands(app, action);
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        try {
            app.parse(reversed);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e) == 0 ? 0 : 2;
        } catch (const CLI::CallForVersion& e) {
            app.exit(e);
            return 0;
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }
        if (action) action();
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "not converged: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int run(int argc, const char* const* argv)
{
    return run(std::vector<std::string>(argv, argv + argc));
}

} // namespace lvsg::cli
