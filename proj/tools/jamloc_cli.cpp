// SPDX-License-Identifier: Apache-2.0
//
// jamloc: Monte Carlo experiments for UAV bearing-based jammer localization.
//
//   jamloc ideal      [--config FILE] [--seed N] [--trials N] [--threads N] [--out DIR]
//   jamloc multi      ... [--lean strong|slight] [--m 2|3]
//   jamloc modulation ... [--lean strong|slight] [--freq-mode constant|random]
//   jamloc run        --config FILE
//
// Each command writes <out>/<command>.csv and <out>/<command>.manifest.json. Exit status is 0 on
// success, 2 for configuration or usage errors and 1 for any other failure.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "jamloc/jamloc.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

int exit_code_for(jl_status s) {
    switch (s) {
        case JL_OK: return 0;
        case JL_ERR_CONFIG:
        case JL_ERR_INVALID_ARGUMENT:
        case JL_ERR_IO: return kExitConfig;
        default: return kExitFailure;
    }
}

int report(jl_status s, const std::string& context) {
    std::cerr << "jamloc: " << context << ": " << jl_last_error() << " (" << jl_status_name(s) << ")\n";
    return exit_code_for(s);
}

struct Args {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string out = "results";
    std::vector<std::string> set;
    std::string lean;
    int m_jammers = 0;
    std::string freq_mode;
};

struct ConfigHandle {
    jl_config* ptr = nullptr;
    ~ConfigHandle() { jl_config_free(ptr); }
};

struct ResultHandle {
    jl_result* ptr = nullptr;
    ~ResultHandle() { jl_result_free(ptr); }
};

int execute(const std::string& preset, const Args& a) {
    ConfigHandle cfg;
    jl_status s = a.config.empty() ? jl_config_default(&cfg.ptr) : jl_config_load_file(a.config.c_str(), &cfg.ptr);
    if (s != JL_OK) return report(s, "loading config");

    if (a.trials && (s = jl_config_set_trials(cfg.ptr, *a.trials)) != JL_OK) return report(s, "--trials");
    if (a.seed && (s = jl_config_set_seed(cfg.ptr, *a.seed)) != JL_OK) return report(s, "--seed");
    for (const std::string& kv : a.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "jamloc: --set expects name=value, got '" << kv << "'\n";
            return kExitConfig;
        }
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
        } catch (const std::exception&) {
            std::cerr << "jamloc: --set " << kv << ": value is not a number\n";
            return kExitConfig;
        }
        if ((s = jl_config_set_number(cfg.ptr, kv.substr(0, eq).c_str(), value)) != JL_OK) return report(s, "--set " + kv);
    }

    jl_preset_options opts;
    jl_preset_options_init(&opts);
    opts.threads = a.threads;
    opts.lean = a.lean.empty() ? nullptr : a.lean.c_str();
    opts.m_jammers = a.m_jammers;
    opts.freq_mode = a.freq_mode.empty() ? nullptr : a.freq_mode.c_str();

    ResultHandle result;
    if ((s = jl_run_preset(cfg.ptr, preset.c_str(), &opts, &result.ptr)) != JL_OK) return report(s, preset);

    char* csv_path = nullptr;
    if ((s = jl_result_write(result.ptr, a.out.c_str(), &csv_path)) != JL_OK) {
        report(s, "writing results");
        return kExitFailure;
    }
    std::cout << "wrote " << csv_path << " (" << jl_result_row_count(result.ptr) << " rows)\n";
    jl_string_free(csv_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jamloc: UAV bearing-based jammer localization experiments"};
    app.set_version_flag("--version", std::string(jl_version()));
    app.require_subcommand(1);

    Args a;
    auto add_common = [&a](CLI::App* cmd) {
        cmd->add_option("--config", a.config, "JSON scenario config (defaults are used when omitted)");
        cmd->add_option("--seed", a.seed, "Master seed (overrides config)");
        cmd->add_option("--trials", a.trials, "Monte Carlo trials per grid point (overrides config)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--threads", a.threads, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--out", a.out, "Output directory");
        cmd->add_option("--set", a.set, "Numeric scenario override name=value (repeatable)");
    };

    auto* ideal = app.add_subcommand("ideal", "Single jammer: N x peak-power grid");
    auto* multi = app.add_subcommand("multi", "Several jammers: attribution probability sweep");
    auto* modulation = app.add_subcommand("modulation", "Two power-modulated jammers: phase and window sweeps");
    auto* run = app.add_subcommand("run", "Custom scenario from the config file");
    for (auto* cmd : {ideal, multi, modulation, run}) add_common(cmd);

    multi->add_option("--lean", a.lean, "Restrict to one lean case")->check(CLI::IsMember({"strong", "slight"}));
    multi->add_option("--m", a.m_jammers, "Restrict to one jammer count")->check(CLI::Range(2, 16));
    modulation->add_option("--lean", a.lean, "Cruise lean toward jammer A (default strong)")
        ->check(CLI::IsMember({"strong", "slight"}));
    modulation->add_option("--freq-mode", a.freq_mode, "Restrict the window sweep to one frequency mode")
        ->check(CLI::IsMember({"constant", "random"}));
    run->get_option("--config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    for (auto* cmd : {ideal, multi, modulation, run}) {
        if (cmd->parsed()) return execute(cmd->get_name(), a);
    }
    return kExitConfig;
}
