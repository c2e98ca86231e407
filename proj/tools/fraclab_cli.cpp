#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "fraclab/cli.hpp"

namespace {

/// Flag spellings for config keys whose CLI name differs from key with '-' for '_'.
const std::map<std::string, std::string> kAliases{
    {"values", "--values,--a,--q,--t"},
    {"eps", "--eps,--epsilon"},
};

std::string flag_for(const std::string& key) {
    if (auto it = kAliases.find(key); it != kAliases.end()) return it->second;
    std::string flag = "--" + key;
    for (char& c : flag) {
        if (c == '_') c = '-';
    }
    return flag;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fraclab: fractional gradient-nonlinearity experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(FRACLAB_VERSION));

    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::string> config_paths;
    const std::vector<std::pair<std::string, std::string>> subcommands{
        {"solve", "Solve one problem with a chosen scheme"},
        {"scan", "Refinement scan of a swept exponent"},
        {"validate-operator", "Check the discrete operator against its oracles"},
        {"dirac", "Gradient norms under mollified Dirac data"},
        {"nonexist", "Boundary integrand scan for the non-existence regime"},
        {"compare", "Solve an ordered data pair and check the comparison principle"},
    };
    for (const auto& [name, help] : subcommands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_paths[name], "key=value config file");
        for (const auto& key : fraclab::config_keys()) {
            sub->add_option(flag_for(key), values[name][key], "config key '" + key + "'");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fraclab::kExitInvalid;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    fraclab::ExperimentConfig cfg;
    cfg.subcommand = name;
    try {
        if (!config_paths[name].empty()) fraclab::apply_settings(cfg, fraclab::read_config_file(config_paths[name]));
        fraclab::apply_environment(cfg);
        for (const auto& key : fraclab::config_keys()) {
            if (chosen->get_option(flag_for(key).substr(0, flag_for(key).find(',')))->count() > 0) {
                fraclab::apply_setting(cfg, key, values[name][key]);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "fraclab: invalid configuration: " << e.what() << '\n';
        return fraclab::kExitInvalid;
    }
    return fraclab::run(cfg, std::cout, std::cerr);
}
