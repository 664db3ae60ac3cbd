// Command-line driver for the rotating HOM simulator.
//
//   homrot simulate-dip        --config lab.ini --seed 7 --out results/
//   homrot simulate-rotation   --preset lab --threads 4
//   homrot calibrate-classical --convention physical-hz
//   homrot satellite
//   homrot print-config        --preset lab > lab.ini
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "homrot/commands.hpp"
#include "homrot/config.hpp"
#include "homrot/errors.hpp"
#include "homrot/scenarios.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
    std::string config_path;
    std::string preset_name = "lab";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> convention;
    std::optional<std::string> angles;
    std::string format = "csv";
    unsigned threads = 1;
    bool noiseless = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "Experiment configuration file");
    cmd->add_option("--preset", c.preset_name, "Named preset used when no config is given")
        ->check(CLI::IsMember({"lab"}));
    cmd->add_option("--seed", c.seed, "Master seed (overrides the config)");
    cmd->add_option("--out", c.out_dir, "Output directory (overrides the config)");
    cmd->add_option("--convention", c.convention, "Rotation-rate convention")
        ->check(CLI::IsMember({"paper-f", "physical-hz"}));
    cmd->add_option("--angles", c.angles, "Angle unit for classical outputs")
        ->check(CLI::IsMember({"deg", "rad"}));
    cmd->add_option("--format", c.format, "Tabular output format")->check(CLI::IsMember({"csv"}));
    cmd->add_option("--threads", c.threads, "Worker threads for the rotation protocol")
        ->check(CLI::Range(1u, 256u));
    cmd->add_flag("--noiseless", c.noiseless, "Replace Poisson and phase noise by expected values");
}

homrot::ExperimentConfig resolve(const Common& c) {
    auto cfg = c.config_path.empty() ? homrot::preset(c.preset_name)
                                     : homrot::load_config(c.config_path);
    if (c.seed) cfg.seed = *c.seed;
    if (c.out_dir) cfg.output_dir = *c.out_dir;
    if (c.convention) cfg.apparatus.convention = homrot::parse_convention(*c.convention);
    if (c.angles) cfg.angles = *c.angles == "rad" ? homrot::AngleUnit::Radians
                                                  : homrot::AngleUnit::Degrees;
    if (c.noiseless) {
        cfg.rotation.noiseless = true;
        cfg.classical.noiseless = true;
    }
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hong-Ou-Mandel interference on a rotating platform: simulation and analysis"};
    app.require_subcommand(1);
    Common common;

    auto* dip = app.add_subcommand("simulate-dip", "Scan the delay stage and fit the HOM dip");
    auto* rot = app.add_subcommand("simulate-rotation",
                                   "Rotation protocol at the steepest point and shift slope");
    auto* cls = app.add_subcommand("calibrate-classical", "Classical Sagnac phase calibration");
    auto* sat = app.add_subcommand("satellite", "Gravitomagnetic delay estimate for an orbit");
    auto* show = app.add_subcommand("print-config", "Print the resolved configuration");
    for (auto* cmd : {dip, rot, cls, sat, show}) add_common(cmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const auto cfg = resolve(common);
        if (show->parsed()) {
            std::cout << homrot::serialize_config(cfg);
            return 0;
        }
        homrot::CommandOptions opts;
        opts.out_dir = cfg.output_dir;
        opts.threads = common.threads;
        homrot::CommandReport report;
        if (dip->parsed()) report = homrot::cmd_simulate_dip(cfg, opts);
        if (rot->parsed()) report = homrot::cmd_simulate_rotation(cfg, opts);
        if (cls->parsed()) report = homrot::cmd_calibrate_classical(cfg, opts);
        if (sat->parsed()) report = homrot::cmd_satellite(cfg, opts);
        std::cout << report.summary;
        for (const auto& f : report.files) std::cout << "wrote " << f.string() << '\n';
        return 0;
    } catch (const homrot::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const homrot::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const homrot::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
