#ifndef POROSOL_CAMPAIGN_HPP
#define POROSOL_CAMPAIGN_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "porosol/config.hpp"
#include "porosol/material.hpp"
#include "porosol/pddm.hpp"
#include "porosol/rom.hpp"
#include "porosol/rom_fit.hpp"
#include "porosol/sobol.hpp"

namespace porosol {

enum class FidelityTier { coarse, paper };

constexpr double kMonthS = 30.0 * 24.0 * 3600.0;
constexpr double kYearS = 365.0 * 24.0 * 3600.0;

/// Far-field presets for the two built-in studies; they differ in the
/// maximum horizontal stress.
FarFieldState far_field_sensitivity();    // 58.60 / 55.15 / 48.26 MPa
FarFieldState far_field_depletion();  // 56.53 / 55.15 / 48.26 MPa

/// Observation points P1..P6, placed parametrically from the current
/// half-length and spacing:
///   P6 = (0, 0)            mid-spacing on the well axis
///   P5 = (0, a)            on the line joining the two fracture tips
///   P2 = (1.5 b, 0)        next-stage child-fracture initiation point
///   P3 = (1.5 b, a)        on that child-fracture path, tip height
///   P4 = (1.5 b, a + b)    offset-well path above the child position
///   P1 = (0, a + b)        offset-well path above the mid-spacing
/// Any point can be overridden with explicit coordinates.
struct ObservationPoints {
    std::array<std::optional<std::pair<double, double>>, 6> overrides;

    std::array<std::pair<double, double>, 6> locate(double half_length_m,
                                                    double spacing_m) const;
};

/// How the producing fracture loads its faces: `total_stress` holds the
/// total normal traction at -p_f (fluid carries the faces; the default),
/// `drawdown` keeps the mechanical face load at the far-field value (propped
/// faces) and only moves the fluid pressure.
enum class ProductionMode { total_stress, drawdown };

struct ScenarioConfig {
    double half_length_m = 30.0;
    double spacing_m = 30.0;
    double production_pressure_pa = 27.0e6;
    FarFieldState far_field = far_field_sensitivity();
    std::vector<double> horizons_s = {kMonthS, kYearS, 3 * kYearS};
    std::vector<std::string> horizon_labels = {"1month", "1year", "3years"};
    FidelityTier tier = FidelityTier::coarse;
    std::optional<int> elements_override;
    std::optional<int> steps_override;
    ProductionMode production_mode = ProductionMode::total_stress;
    KernelOptions kernel_options;

    int elements_per_fracture() const;
    int n_steps() const;
    BoundaryCondition production_bc(int n_steps, const std::vector<Element>& elements,
                                    double pressure_pa) const;
};

struct StudyConfig {
    ScenarioConfig scenario;
    InputSpace space = rom_input_space();
    int base_samples = 64;
    std::uint64_t seed = 42;
    DesignGenerator generator = DesignGenerator::sobol_sequence;
    int bootstrap_resamples = 200;
    ObservationPoints points;
    std::vector<std::string> depletion_rocks;  // empty: all presets
    int workers = 0;                           // 0: POROSOL_WORKERS or hardware
    double failure_budget = 0.01;
    std::string output_dir = "out";
    bool stamp_outputs = false;  // timestamps off keeps files byte-reproducible
    std::string config_hash;     // echoed in every output header
};

StudyConfig read_study_config(const ConfigFile& cfg);
StudyConfig load_study_config(const std::string& path);

int resolve_worker_count(const StudyConfig& cfg);

/// Quantity layout of one scenario evaluation: for each horizon, for each
/// point P1..P6, the triple (pore pressure, sigma_min, sigma_max), stress
/// magnitudes taken along the far-field principal axes.
int scenario_output_count(const ScenarioConfig& scenario);
std::string scenario_output_name(const ScenarioConfig& scenario, int output_index);
int scenario_output_index(const ScenarioConfig& scenario, Quantity q, int point_1based,
                          int horizon_index);

/// Full forward model for one Table-3 sample.
std::vector<double> evaluate_scenario(const ScenarioConfig& scenario,
                                      const ObservationPoints& points,
                                      const std::vector<double>& x);

/// Midline scan for the depletion study: Region 1 covers |y| <= a between
/// the fractures, Region 2 reaches beyond the tips.
std::vector<std::pair<double, double>> midline_scan(double half_length_m, int points_count = 121,
                                                    double reach_factor = 3.0);

/// Per-rock, per-horizon midline profiles of the preset rocks; failures are
/// isolated per rock and reported in the returned list.
struct DepletionStudyResult {
    std::vector<std::string> profile_files;
    std::vector<std::string> figure_files;
    std::vector<std::string> failures;  // "rock: reason"
};
DepletionStudyResult run_depletion_study(const StudyConfig& cfg);

/// Sobol campaign over the Table-3 space. Run records persist in
/// runs.csv; re-running a partially completed campaign recomputes only the
/// missing run ids (records are keyed by the config hash).
struct CampaignResult {
    SampleDesign design;
    DesignOutputs outputs;
    std::vector<std::string> output_names;
    std::vector<long> failed_runs;
    // analyze() result per scenario output, same indexing as output_names.
    std::vector<SobolResult> analyses;
};
CampaignResult run_sobol_study(const StudyConfig& cfg);

/// Component selection + typed fits from stored campaign outputs.
struct RomBuildEntry {
    RomSpec rom;
    double holdout_r2 = 0.0;
    std::vector<std::string> dropped_components;
    std::vector<ComponentFit> fits;
};
struct RomBuildResult {
    std::vector<RomBuildEntry> entries;
};
RomBuildResult run_rom_build(const StudyConfig& cfg, const CampaignResult& campaign,
                             double threshold);

/// Reload a stored campaign (runs.csv) for rom-fit without re-running the
/// simulator. Throws when records are missing or belong to a different
/// configuration.
CampaignResult load_campaign(const StudyConfig& cfg);

}  // namespace porosol

#endif
