// SPDX-License-Identifier: Apache-2.0
//
// msisac: multistatic OFDM sensing simulator for cellular layouts
// Copyright (C) 2026 The msisac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msisac/config.hpp"
#include "msisac/errors.hpp"
#include "msisac/experiment.hpp"
#include "msisac/report.hpp"

namespace msisac {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::vector<std::string> modes;
    std::string out;
};

void add_common(CLI::App* cmd, Options& o, bool with_trials, bool with_mode) {
    cmd->add_option("-c,--config", o.config, "JSON experiment config (defaults apply when omitted)");
    cmd->add_option("--seed", o.seed, "override the config seed");
    if (with_trials) cmd->add_option("--trials", o.trials, "override the number of Monte Carlo trials");
    if (with_mode)
        cmd->add_option("--mode", o.modes, "sensing mode: monostatic, bistatic or multistatic")->delimiter(',');
    cmd->add_option("-o,--out", o.out, "output file (default: <config output>/<artifact>)");
}

ExperimentConfig resolve(const Options& o) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.trials) {
        if (*o.trials < 1) throw ConfigError("--trials must be >= 1");
        cfg.trials = *o.trials;
    }
    if (!o.modes.empty()) {
        cfg.modes.clear();
        for (const auto& m : o.modes) cfg.modes.push_back(parse_snr_mode(m));
    }
    cfg.validate();
    return cfg;
}

fs::path output_path(const Options& o, const ExperimentConfig& cfg, const char* artifact) {
    return o.out.empty() ? fs::path(cfg.output) / artifact : fs::path(o.out);
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open '" + path.string() + "' for writing");
    f << content;
    if (!f.flush()) throw Error("failed writing '" + path.string() + "'");
}

int cmd_validate(const Options& o, std::ostream& out) {
    const ExperimentConfig cfg = resolve(o);
    out << "ok: " << (o.config.empty() ? std::string("<defaults>") : o.config) << " (schema_version "
        << cfg.schema_version << ")\n";
    return kExitOk;
}

int cmd_snr_map(const Options& o, std::ostream& out) {
    ExperimentConfig cfg = resolve(o);
    if (o.modes.size() > 1) throw ConfigError("snr-map takes a single --mode");
    const SnrMode mode = o.modes.empty() ? SnrMode::Multistatic : cfg.modes.front();
    const Heatmap map = run_snr_map(cfg, mode);
    std::ostringstream ss;
    write_snr_map_csv(ss, map);
    const fs::path path = output_path(o, cfg, "snr_map.csv");
    write_file(path, ss.str());
    out << "wrote " << path.string() << " (" << map.nx << " x " << map.ny << ", " << to_string(mode) << ")\n";
    return kExitOk;
}

int cmd_rmse(const Options& o, std::ostream& out) {
    const ExperimentConfig cfg = resolve(o);
    const auto records = run_rmse_sweep(cfg);
    std::ostringstream ss;
    write_rmse_csv(ss, records);
    const fs::path path = output_path(o, cfg, "rmse.csv");
    write_file(path, ss.str());
    out << "wrote " << path.string() << " (" << records.size() << " records)\n";
    return kExitOk;
}

int cmd_single_shot(const Options& o, std::ostream& out) {
    const ExperimentConfig cfg = resolve(o);
    const auto trace = run_single_shot(cfg, cfg.seed);
    const fs::path path = output_path(o, cfg, "trace.json");
    write_file(path, trace.dump(2) + "\n");
    out << "wrote " << path.string() << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"msisac: multistatic OFDM sensing simulator", "msisac"};
    app.require_subcommand(1);

    Options o;
    CLI::App* snr = app.add_subcommand("snr-map", "SNR heatmap of the sub-sensing cell (CSV)");
    CLI::App* rmse = app.add_subcommand("rmse", "Monte Carlo RMSE sweep (CSV)");
    CLI::App* single = app.add_subcommand("single-shot", "one traced pipeline pass (JSON)");
    CLI::App* validate = app.add_subcommand("validate-config", "check a config file and exit");
    add_common(snr, o, false, true);
    add_common(rmse, o, true, true);
    add_common(single, o, false, true);
    validate->add_option("config", o.config, "JSON experiment config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfigError;
    }

    try {
        if (*validate) return cmd_validate(o, out);
        if (*snr) return cmd_snr_map(o, out);
        if (*rmse) return cmd_rmse(o, out);
        if (*single) return cmd_single_shot(o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
    return kExitConfigError;
}

}  // namespace msisac
