#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "porosol/campaign.hpp"
#include "porosol/config.hpp"
#include "porosol/material.hpp"
#include "porosol/rom.hpp"

namespace {

using namespace porosol;

StudyConfig study_from_args(const std::string& config_path, const std::string& out_dir,
                            int workers) {
    StudyConfig cfg = load_study_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (workers > 0) cfg.workers = workers;
    return cfg;
}

std::vector<double> parse_at(const std::string& at) {
    // k=v pairs for the eight inputs, e.g.
    //   a=30,b=30,p_f=2.7e7,G=1.2e10,nu_u=0.29,nu=0.15,B=0.73,kappa=-12
    const InputSpace& space = rom_input_space();
    std::vector<double> x(space.size());
    std::vector<bool> seen(space.size(), false);
    static const std::vector<std::vector<std::string>> aliases = {
        {"a", "half_length_m"},   {"b", "spacing_m"},
        {"p_f", "pf", "production_pressure_pa"},
        {"G", "g", "shear_modulus_pa"},
        {"nu_u", "undrained_poisson"},
        {"nu", "drained_poisson"},
        {"B", "skempton_b"},
        {"kappa", "log_kappa", "log10_mobility"},
    };
    std::stringstream ss(at);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--at expects k=v pairs, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const double value = std::stod(item.substr(eq + 1));
        bool matched = false;
        for (std::size_t d = 0; d < aliases.size(); ++d) {
            for (const auto& name : aliases[d]) {
                if (name == key) {
                    x[d] = value;
                    seen[d] = true;
                    matched = true;
                }
            }
        }
        if (!matched) throw std::invalid_argument("--at: unknown input '" + key + "'");
    }
    for (std::size_t d = 0; d < seen.size(); ++d) {
        if (!seen[d]) {
            throw std::invalid_argument("--at: missing input '" + space.dims[d].name + "'");
        }
    }
    return x;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"porosol: poroelastic depletion simulator, Sobol sensitivity engine and "
                 "reduced-order models for fractured horizontal wells"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int workers = 0;

    auto* simulate = app.add_subcommand(
        "simulate", "Run the rock-preset depletion study (midline profiles)");
    simulate->add_option("config", config_path, "Study config file")->required();
    simulate->add_option("--out", out_dir, "Output directory (overrides config)");
    simulate->add_option("--workers", workers, "Worker thread count");

    auto* sobol = app.add_subcommand(
        "sobol", "Run the Sobol sensitivity campaign over the sampled input space");
    sobol->add_option("config", config_path, "Study config file")->required();
    sobol->add_option("--out", out_dir, "Output directory (overrides config)");
    sobol->add_option("--workers", workers, "Worker thread count");

    double threshold = 0.9;
    auto* rom_fit = app.add_subcommand(
        "rom-fit", "Fit reduced-order models from a completed Sobol campaign");
    rom_fit->add_option("config", config_path, "Study config file")->required();
    rom_fit->add_option("--threshold", threshold,
                        "Cumulative index contribution the components must reach");
    rom_fit->add_option("--out", out_dir, "Output directory (overrides config)");

    std::string quantity_arg = "pore_pressure", point_arg = "P1", at_arg, rom_file;
    auto* rom_eval = app.add_subcommand("rom-eval", "Evaluate a reduced-order model");
    rom_eval->add_option("--quantity", quantity_arg, "pore_pressure | sigma_min | sigma_max");
    rom_eval->add_option("--point", point_arg, "P1 | P5 | P6");
    rom_eval->add_option("--at", at_arg, "Input point as k=v pairs")->required();
    rom_eval->add_option("--rom", rom_file, "Evaluate a stored .rom file instead of the catalog");

    std::string presets_out;
    auto* presets = app.add_subcommand("presets", "Print or write the rock preset catalog");
    presets->add_option("--write", presets_out, "Write the catalog to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            const StudyConfig cfg = study_from_args(config_path, out_dir, workers);
            const DepletionStudyResult res = run_depletion_study(cfg);
            std::cout << "wrote " << res.profile_files.size() << " profile files to "
                      << cfg.output_dir << "\n";
            for (const auto& f : res.failures) std::cout << "FAILED " << f << "\n";
            return res.failures.empty() ? 0 : 1;
        }
        if (sobol->parsed()) {
            const StudyConfig cfg = study_from_args(config_path, out_dir, workers);
            const CampaignResult res = run_sobol_study(cfg);
            std::cout << "completed " << res.design.total_evaluations() << " runs ("
                      << res.failed_runs.size() << " failed); indices in " << cfg.output_dir
                      << "/sobol_indices.csv\n";
            return 0;
        }
        if (rom_fit->parsed()) {
            const StudyConfig cfg = study_from_args(config_path, out_dir, 0);
            const CampaignResult campaign = load_campaign(cfg);
            const RomBuildResult res = run_rom_build(cfg, campaign, threshold);
            for (const auto& e : res.entries) {
                std::cout << e.rom.name << ": " << e.rom.components.size()
                          << " components, declared accuracy "
                          << format_double(e.rom.declared_accuracy) << ", holdout R2 "
                          << format_double(e.holdout_r2) << "\n";
            }
            return 0;
        }
        if (rom_eval->parsed()) {
            const std::vector<double> x = parse_at(at_arg);
            RomSpec rom;
            if (!rom_file.empty()) {
                rom = load_rom(rom_file);
            } else {
                const RomSpec* r =
                    find_catalog_rom(quantity_from_name(quantity_arg), point_arg);
                if (!r) {
                    std::cerr << "no catalog model for " << quantity_arg << " at " << point_arg
                              << " (catalog covers P1, P5, P6)\n";
                    return 1;
                }
                rom = *r;
            }
            RangeWarning warning;
            const double value = eval_rom(rom, x, &warning);
            if (warning.out_of_box) {
                std::cerr << "warning: input outside the sampled box in dim(s):";
                for (int d : warning.dims) std::cerr << " " << rom_input_space().dims[d - 1].name;
                std::cerr << " (extrapolating)\n";
            }
            std::printf("%.6e\n", value);
            return 0;
        }
        if (presets->parsed()) {
            const std::string text = rock_catalog_text(rock_presets());
            if (presets_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(presets_out);
                out << text;
                if (!out) throw std::runtime_error("cannot write " + presets_out);
                std::cout << "wrote " << presets_out << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
