#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "porosol/campaign.hpp"
#include "porosol/csv.hpp"

using namespace porosol;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

StudyConfig tiny_study(const std::string& out_dir) {
    const std::string text =
        "[scenario]\n"
        "half_length_m = 30\n"
        "spacing_m = 30\n"
        "production_pressure_pa = 27e6\n"
        "far_field = sensitivity\n"
        "horizons = 1year\n"
        "[mesh]\n"
        "tier = coarse\n"
        "elements_per_fracture = 6\n"
        "n_steps = 6\n"
        "[sobol]\n"
        "base_samples = 8\n"
        "seed = 41\n"
        "[run]\n"
        "workers = 2\n"
        "output_dir = " + out_dir + "\n";
    return read_study_config(parse_config(text));
}

}  // namespace

TEST_CASE("study config reading") {
    StudyConfig cfg = tiny_study("/tmp/porosol_cfg_probe");
    CHECK(cfg.scenario.half_length_m == 30.0);
    CHECK(cfg.scenario.far_field.sigma_max_pa == 58.60e6);
    CHECK(cfg.scenario.horizons_s == std::vector<double>{kYearS});
    CHECK(cfg.scenario.elements_per_fracture() == 6);
    CHECK(cfg.scenario.n_steps() == 6);
    CHECK(cfg.base_samples == 8);
    CHECK(cfg.space.size() == 8);
    CHECK(!cfg.config_hash.empty());

    SUBCASE("tier defaults") {
        ScenarioConfig coarse;
        CHECK(coarse.elements_per_fracture() == 20);
        CHECK(coarse.n_steps() == 20);
        ScenarioConfig paper;
        paper.tier = FidelityTier::paper;
        CHECK(paper.elements_per_fracture() == 30);
        CHECK(paper.n_steps() == 50);
    }

    SUBCASE("depletion preset and horizon tokens") {
        const ConfigFile alt = parse_config(
            "[scenario]\nfar_field = depletion\nhorizons = 1month,5years\n");
        const StudyConfig c2 = read_study_config(alt);
        CHECK(c2.scenario.far_field.sigma_max_pa == 56.53e6);
        CHECK(c2.scenario.horizons_s[0] == kMonthS);
        CHECK(c2.scenario.horizons_s[1] == 5 * kYearS);
        // anisotropy presets from the two far-field states
        CHECK(far_field_sensitivity().sigma_max_pa - far_field_sensitivity().sigma_min_pa ==
              doctest::Approx(3.45e6));
        CHECK(far_field_depletion().sigma_max_pa - far_field_depletion().sigma_min_pa ==
              doctest::Approx(1.38e6));
    }

    SUBCASE("bad tokens rejected") {
        CHECK_THROWS_AS(
            read_study_config(parse_config("[scenario]\nfar_field = moon\n")),
            std::invalid_argument);
        CHECK_THROWS_AS(
            read_study_config(parse_config("[scenario]\nhorizons = fortnight\n")),
            std::invalid_argument);
        CHECK_THROWS_AS(
            read_study_config(parse_config("[scenario]\nproduction_mode = wishful\n")),
            std::invalid_argument);
    }

    SUBCASE("production mode selection") {
        CHECK(tiny_study("/tmp/x").scenario.production_mode == ProductionMode::total_stress);
        const StudyConfig dd = read_study_config(
            parse_config("[scenario]\nproduction_mode = drawdown\n"));
        CHECK(dd.scenario.production_mode == ProductionMode::drawdown);
    }
}

TEST_CASE("sampled input space always yields admissible materials") {
    const InputSpace space = rom_input_space();
    REQUIRE(space.size() == 8);
    CHECK(space.dims[0].name == "half_length_m");
    CHECK(space.dims[7].lower == -17.0);
    for (double nuu : {0.30, 0.45}) {
        for (double nu : {0.10, 0.29}) {
            PoroelasticMaterial m{1e9, nu, nuu, 0.3, 1e-17};
            CHECK(validate(m).empty());
        }
    }
}

TEST_CASE("observation points sit on their documented paths") {
    ObservationPoints pts;
    const auto p = pts.locate(30.0, 20.0);
    CHECK(p[5] == std::pair{0.0, 0.0});    // P6 mid-spacing
    CHECK(p[4] == std::pair{0.0, 30.0});   // P5 between the tips
    CHECK(p[0] == std::pair{0.0, 50.0});   // P1 offset-well path
    CHECK(p[1].first == doctest::Approx(30.0));  // P2 child-fracture start
    CHECK(p[3].second == doctest::Approx(50.0));

    ObservationPoints with_override;
    with_override.overrides[0] = std::make_pair(1.0, 2.0);
    CHECK(with_override.locate(30.0, 20.0)[0] == std::pair{1.0, 2.0});
}

TEST_CASE("scenario evaluation produces the full output block") {
    StudyConfig cfg = tiny_study("/tmp/porosol_unused");
    const std::vector<double> x = {30.0, 30.0, 27.0e6, 12.0e9, 0.29, 0.15, 0.73, -12.0};
    const std::vector<double> out = evaluate_scenario(cfg.scenario, cfg.points, x);
    REQUIRE(static_cast<int>(out.size()) == scenario_output_count(cfg.scenario));
    REQUIRE(out.size() == 18);
    const FarFieldState far = cfg.scenario.far_field;
    for (int p = 0; p < 6; ++p) {
        const double pp = out[p * 3 + 0];
        const double sh = out[p * 3 + 1];
        const double sH = out[p * 3 + 2];
        // depletion bounded by the production differential
        CHECK(pp < far.pore_pressure_pa + 1e4);
        CHECK(pp > 27.0e6 - 1e4);
        // stresses stay near the far-field magnitudes
        CHECK(sh > 0.3 * far.sigma_min_pa);
        CHECK(sh < 1.7 * far.sigma_min_pa);
        CHECK(sH > 0.3 * far.sigma_max_pa);
        CHECK(sH < 1.7 * far.sigma_max_pa);
    }
    CHECK(scenario_output_name(cfg.scenario, 0) == "pore_pressure_P1_1year");
    CHECK(scenario_output_name(cfg.scenario, 17) == "sigma_max_P6_1year");
    CHECK(scenario_output_index(cfg.scenario, Quantity::pore_pressure, 1, 0) == 0);
    CHECK(scenario_output_index(cfg.scenario, Quantity::sigma_max, 6, 0) == 17);
}

TEST_CASE("depletion study writes per-rock per-horizon profiles") {
    const fs::path dir = fs::temp_directory_path() / "porosol_depletion_test";
    fs::remove_all(dir);
    StudyConfig cfg = tiny_study(dir.string());
    cfg.depletion_rocks = {"Weber Sandstone"};
    const DepletionStudyResult res = run_depletion_study(cfg);
    CHECK(res.failures.empty());
    REQUIRE(res.profile_files.size() == 1);
    const CsvTable profile = read_csv(res.profile_files[0]);
    CHECK(profile.header ==
          std::vector<std::string>{"x_m", "y_m", "t_s", "p_Pa", "sxx_Pa", "syy_Pa", "sxy_Pa"});
    CHECK(profile.rows.size() == 121);
    REQUIRE(!profile.comments.empty());
    CHECK(profile.comments[0].find(cfg.config_hash) != std::string::npos);

    const CsvTable fig = read_csv(res.figure_files[0]);
    CHECK(fig.header == std::vector<std::string>{"y_m", "p_Pa", "sigma_max_Pa", "sigma_min_Pa",
                                                 "anisotropy_Pa"});
    SUBCASE("unknown rock is rejected") {
        cfg.depletion_rocks = {"Imaginary Stone"};
        CHECK_THROWS_AS(run_depletion_study(cfg), std::invalid_argument);
    }
    fs::remove_all(dir);
}

TEST_CASE("empty sample set yields header-only files") {
    const fs::path dir = fs::temp_directory_path() / "porosol_empty_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        CsvWriter csv((dir / "empty.csv").string());
        csv.comment("config_hash=none");
        csv.row({"x_m", "y_m", "t_s", "p_Pa", "sxx_Pa", "syy_Pa", "sxy_Pa"});
    }
    const CsvTable t = read_csv((dir / "empty.csv").string());
    CHECK(t.header.size() == 7);
    CHECK(t.rows.empty());
    fs::remove_all(dir);
}

TEST_CASE("sobol study end to end at desk scale") {
    const fs::path dir = fs::temp_directory_path() / "porosol_campaign_test";
    fs::remove_all(dir);
    StudyConfig cfg = tiny_study(dir.string());
    const CampaignResult res = run_sobol_study(cfg);
    CHECK(res.design.total_evaluations() == 8 * 18);
    CHECK(res.failed_runs.empty());
    REQUIRE(res.analyses.size() == 18);

    SUBCASE("records persist and reload") {
        const CampaignResult back = load_campaign(cfg);
        CHECK(back.outputs.on_a == res.outputs.on_a);
        CHECK(back.analyses[0].f0_hat == res.analyses[0].f0_hat);
    }

    SUBCASE("byte-identical outputs on a rerun") {
        const std::string runs_1 = slurp(dir / "runs.csv");
        const std::string idx_1 = slurp(dir / "sobol_indices.csv");
        fs::remove(dir / "runs.csv");
        run_sobol_study(cfg);
        CHECK(slurp(dir / "runs.csv") == runs_1);
        CHECK(slurp(dir / "sobol_indices.csv") == idx_1);
    }

    SUBCASE("resume recomputes only missing rows and converges to the same bytes") {
        const std::string runs_1 = slurp(dir / "runs.csv");
        // drop a third of the records, keeping the header and hash comment
        std::istringstream in(runs_1);
        std::ostringstream out;
        std::string line;
        int data_row = 0;
        while (std::getline(in, line)) {
            const bool is_data = !line.empty() && line[0] != '#' &&
                                 line.rfind("run_id", 0) != 0;
            if (is_data && (data_row++ % 3 == 0)) continue;
            out << line << "\n";
        }
        {
            std::ofstream f(dir / "runs.csv");
            f << out.str();
        }
        run_sobol_study(cfg);
        CHECK(slurp(dir / "runs.csv") == runs_1);
    }

    SUBCASE("stale records from another config are not reused") {
        StudyConfig other = cfg;
        other.scenario.production_pressure_pa = 20e6;
        other.config_hash = "deadbeefdeadbeef";
        CHECK_THROWS_AS(load_campaign(other), std::runtime_error);
    }

    SUBCASE("index files carry the filter and the schema") {
        const CsvTable idx = read_csv((dir / "sobol_indices.csv").string());
        CHECK(idx.header ==
              std::vector<std::string>{"index_name", "order", "estimate", "boot_stderr",
                                       "point", "quantity", "horizon"});
        for (const auto& row : idx.rows) {
            const double est = std::stod(row[2]);
            const int order = std::stoi(row[1]);
            CHECK(est >= (order == 1 ? 0.01 : 0.03));
        }
        const CsvTable all = read_csv((dir / "sobol_indices_all.csv").string());
        CHECK(all.rows.size() == 18u * 36u);  // 8 first + 28 second per output
        const CsvTable bars =
            read_csv((dir / "bars_pore_pressure_1year_first.csv").string());
        CHECK(bars.header.size() == 7);
    }

    fs::remove_all(dir);
}

TEST_CASE("rom build from a synthetic campaign") {
    // Synthetic outputs in place of the simulator: an additive model over
    // the Table-3 variables with a mild interaction.
    const fs::path dir = fs::temp_directory_path() / "porosol_rombuild_test";
    fs::remove_all(dir);
    StudyConfig cfg = tiny_study(dir.string());
    cfg.base_samples = 512;

    CampaignResult campaign;
    campaign.design = design(cfg.space, cfg.base_samples, cfg.seed, cfg.generator);
    const int n_out = scenario_output_count(cfg.scenario);
    auto model = [](const std::vector<double>& x) {
        const double pf = x[2];
        const double lk = x[7];
        return 3.0e7 + 0.5 * pf + 2.0e6 * lk + 1.0e-2 * pf * (lk + 13.5);
    };
    auto fill = [&](const Eigen::MatrixXd& pts) {
        Eigen::MatrixXd out(pts.rows(), n_out);
        std::vector<double> x(cfg.space.size());
        for (long r = 0; r < pts.rows(); ++r) {
            for (int j = 0; j < cfg.space.size(); ++j) x[j] = pts(r, j);
            const double v = model(x);
            for (int k = 0; k < n_out; ++k) out(r, k) = v;
        }
        return out;
    };
    campaign.outputs.on_a = fill(campaign.design.a);
    campaign.outputs.on_b = fill(campaign.design.b);
    for (int i = 0; i < cfg.space.size(); ++i) {
        campaign.outputs.on_a_cross.push_back(fill(campaign.design.a_cross[i]));
        campaign.outputs.on_b_cross.push_back(fill(campaign.design.b_cross[i]));
    }
    for (int k = 0; k < n_out; ++k) {
        campaign.output_names.push_back(scenario_output_name(cfg.scenario, k));
        campaign.analyses.push_back(analyze(campaign.design, campaign.outputs, k, 100, 7));
    }

    SUBCASE("threshold zero keeps only the constant") {
        const RomBuildResult res = run_rom_build(cfg, campaign, 0.0);
        REQUIRE(res.entries.size() == 9);
        for (const auto& e : res.entries) {
            CHECK(e.rom.components.empty());
            CHECK(e.rom.f0_pa == doctest::Approx(campaign.analyses[0].f0_hat));
        }
    }

    SUBCASE("threshold 0.9 reproduces the synthetic model out of sample") {
        const RomBuildResult res = run_rom_build(cfg, campaign, 0.9);
        REQUIRE(!res.entries.empty());
        for (const auto& e : res.entries) {
            CHECK(e.holdout_r2 > 0.9);
        }
        CHECK(fs::exists(dir / "rom_build_summary.csv"));
        CHECK(fs::exists(dir / "rom_pore_pressure_P1_1year.rom"));
        // round-trip one emitted file
        const RomSpec loaded = load_rom((dir / "rom_pore_pressure_P1_1year.rom").string());
        CHECK(loaded.f0_pa == doctest::Approx(campaign.analyses[0].f0_hat));
    }

    fs::remove_all(dir);
}

TEST_CASE("fidelity tiers share schemas") {
    const fs::path dir_c = fs::temp_directory_path() / "porosol_tier_coarse";
    const fs::path dir_p = fs::temp_directory_path() / "porosol_tier_paper";
    fs::remove_all(dir_c);
    fs::remove_all(dir_p);
    StudyConfig coarse = tiny_study(dir_c.string());
    coarse.depletion_rocks = {"Weber Sandstone"};
    StudyConfig paper = coarse;
    paper.output_dir = dir_p.string();
    paper.scenario.elements_override = 8;  // still desk scale, different mesh
    paper.scenario.steps_override = 8;

    const DepletionStudyResult rc = run_depletion_study(coarse);
    const DepletionStudyResult rp = run_depletion_study(paper);
    REQUIRE(rc.profile_files.size() == 1);
    REQUIRE(rp.profile_files.size() == 1);
    const CsvTable tc = read_csv(rc.profile_files[0]);
    const CsvTable tp = read_csv(rp.profile_files[0]);
    CHECK(tc.header == tp.header);
    CHECK(tc.rows.size() == tp.rows.size());
    // values differ across tiers
    bool any_diff = false;
    for (std::size_t r = 0; r < tc.rows.size(); ++r) {
        if (tc.rows[r][3] != tp.rows[r][3]) any_diff = true;
    }
    CHECK(any_diff);
    fs::remove_all(dir_c);
    fs::remove_all(dir_p);
}

TEST_CASE("worker resolution") {
    StudyConfig cfg = tiny_study("/tmp/porosol_unused2");
    cfg.workers = 3;
    CHECK(resolve_worker_count(cfg) == 3);
    cfg.workers = 0;
    CHECK(resolve_worker_count(cfg) >= 1);
}
