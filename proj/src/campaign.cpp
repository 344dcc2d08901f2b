#include "porosol/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "porosol/csv.hpp"

namespace porosol {

namespace fs = std::filesystem;

FarFieldState far_field_sensitivity() { return FarFieldState{58.60e6, 55.15e6, 48.26e6}; }
FarFieldState far_field_depletion() { return FarFieldState{56.53e6, 55.15e6, 48.26e6}; }

std::array<std::pair<double, double>, 6> ObservationPoints::locate(double a, double b) const {
    std::array<std::pair<double, double>, 6> pts;
    pts[0] = {0.0, a + b};        // P1
    pts[1] = {1.5 * b, 0.0};      // P2
    pts[2] = {1.5 * b, a};        // P3
    pts[3] = {1.5 * b, a + b};    // P4
    pts[4] = {0.0, a};            // P5
    pts[5] = {0.0, 0.0};          // P6
    for (int i = 0; i < 6; ++i) {
        if (overrides[i]) pts[i] = *overrides[i];
    }
    return pts;
}

int ScenarioConfig::elements_per_fracture() const {
    if (elements_override) return *elements_override;
    return tier == FidelityTier::paper ? 30 : 20;
}

int ScenarioConfig::n_steps() const {
    if (steps_override) return *steps_override;
    return tier == FidelityTier::paper ? 50 : 20;
}

BoundaryCondition ScenarioConfig::production_bc(int steps,
                                                const std::vector<Element>& elements,
                                                double pressure_pa) const {
    if (production_mode == ProductionMode::drawdown) {
        return BoundaryCondition::pressure_drawdown(steps, elements, pressure_pa, far_field);
    }
    return BoundaryCondition::constant_pressure_production(
        steps, static_cast<int>(elements.size()), pressure_pa);
}

namespace {

double horizon_seconds(const std::string& token) {
    if (token == "1month") return kMonthS;
    if (token == "1year") return kYearS;
    if (token == "3years") return 3 * kYearS;
    if (token == "5years") return 5 * kYearS;
    try {
        std::size_t pos = 0;
        const double v = std::stod(token, &pos);
        if (pos == token.size() || token.substr(pos) == "s") return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("unknown horizon token: " + token);
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

StudyConfig read_study_config(const ConfigFile& cfg) {
    StudyConfig sc;
    // The hash identifies the study definition; execution context ([run]:
    // output dir, worker count, stamping) stays out so reruns and moved
    // output trees keep their identity.
    ConfigFile hashed = cfg;
    hashed.sections.erase("run");
    sc.config_hash = config_hash_hex(hashed);

    ScenarioConfig& s = sc.scenario;
    s.half_length_m = cfg.get_double("scenario", "half_length_m", s.half_length_m);
    s.spacing_m = cfg.get_double("scenario", "spacing_m", s.spacing_m);
    s.production_pressure_pa =
        cfg.get_double("scenario", "production_pressure_pa", s.production_pressure_pa);

    const std::string ff = cfg.get("scenario", "far_field", "sensitivity");
    if (ff == "sensitivity") {
        s.far_field = far_field_sensitivity();
    } else if (ff == "depletion") {
        s.far_field = far_field_depletion();
    } else if (ff == "explicit") {
        s.far_field.sigma_max_pa = cfg.get_double("far_field", "sigma_max_pa");
        s.far_field.sigma_min_pa = cfg.get_double("far_field", "sigma_min_pa");
        s.far_field.pore_pressure_pa = cfg.get_double("far_field", "pore_pressure_pa");
    } else {
        throw std::invalid_argument("scenario.far_field must be sensitivity, depletion or explicit");
    }

    if (cfg.has("scenario", "horizons")) {
        s.horizons_s.clear();
        s.horizon_labels.clear();
        for (const std::string& tok : split_tokens(cfg.get("scenario", "horizons"))) {
            s.horizons_s.push_back(horizon_seconds(tok));
            s.horizon_labels.push_back(tok);
        }
    }
    if (s.horizons_s.empty()) throw std::invalid_argument("scenario: empty horizon set");

    const std::string tier = cfg.get("mesh", "tier", "coarse");
    if (tier == "coarse") {
        s.tier = FidelityTier::coarse;
    } else if (tier == "paper") {
        s.tier = FidelityTier::paper;
    } else {
        throw std::invalid_argument("mesh.tier must be coarse or paper");
    }
    if (cfg.has("mesh", "elements_per_fracture")) {
        s.elements_override = static_cast<int>(cfg.get_long("mesh", "elements_per_fracture", 0));
    }
    if (cfg.has("mesh", "n_steps")) {
        s.steps_override = static_cast<int>(cfg.get_long("mesh", "n_steps", 0));
    }
    const std::string mode = cfg.get("scenario", "production_mode", "total_stress");
    if (mode == "total_stress") {
        s.production_mode = ProductionMode::total_stress;
    } else if (mode == "drawdown") {
        s.production_mode = ProductionMode::drawdown;
    } else {
        throw std::invalid_argument("scenario.production_mode must be total_stress or drawdown");
    }
    s.kernel_options.pressure_coupling =
        cfg.get("mesh", "pressure_coupling", "off") == "on";

    sc.base_samples = static_cast<int>(cfg.get_long("sobol", "base_samples", sc.base_samples));
    sc.seed = static_cast<std::uint64_t>(cfg.get_long("sobol", "seed", 42));
    const std::string gen = cfg.get("sobol", "generator", "sobol");
    if (gen == "sobol") {
        sc.generator = DesignGenerator::sobol_sequence;
    } else if (gen == "random") {
        sc.generator = DesignGenerator::pseudo_random;
    } else {
        throw std::invalid_argument("sobol.generator must be sobol or random");
    }
    sc.bootstrap_resamples =
        static_cast<int>(cfg.get_long("sobol", "bootstrap_resamples", sc.bootstrap_resamples));

    for (int i = 0; i < 6; ++i) {
        const std::string key = "p" + std::to_string(i + 1);
        if (cfg.has("points", key)) {
            const auto xy = cfg.get_double_list("points", key);
            if (xy.size() != 2) {
                throw std::invalid_argument("points." + key + " must be 'x,y'");
            }
            sc.points.overrides[i] = std::make_pair(xy[0], xy[1]);
        }
    }

    if (cfg.has("depletion", "rocks")) {
        sc.depletion_rocks = split_tokens(cfg.get("depletion", "rocks"));
    }

    sc.workers = static_cast<int>(cfg.get_long("run", "workers", 0));
    sc.failure_budget = cfg.get_double("run", "failure_budget", sc.failure_budget);
    sc.output_dir = cfg.get("run", "output_dir", sc.output_dir);
    sc.stamp_outputs = cfg.get("run", "stamp", "off") == "on";
    return sc;
}

StudyConfig load_study_config(const std::string& path) {
    return read_study_config(load_config(path));
}

int resolve_worker_count(const StudyConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    if (const char* env = std::getenv("POROSOL_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int scenario_output_count(const ScenarioConfig& scenario) {
    return static_cast<int>(scenario.horizons_s.size()) * 6 * 3;
}

std::string scenario_output_name(const ScenarioConfig& scenario, int output_index) {
    const int per_h = 18;
    const int h = output_index / per_h;
    const int rest = output_index % per_h;
    const int point = rest / 3;
    const int q = rest % 3;
    static const char* qn[] = {"pore_pressure", "sigma_min", "sigma_max"};
    return std::string(qn[q]) + "_P" + std::to_string(point + 1) + "_" +
           scenario.horizon_labels[h];
}

int scenario_output_index(const ScenarioConfig& scenario, Quantity q, int point_1based,
                          int horizon_index) {
    (void)scenario;
    const int qi = q == Quantity::pore_pressure ? 0 : (q == Quantity::sigma_min ? 1 : 2);
    return horizon_index * 18 + (point_1based - 1) * 3 + qi;
}

std::vector<double> evaluate_scenario(const ScenarioConfig& scenario,
                                      const ObservationPoints& points,
                                      const std::vector<double>& x) {
    if (x.size() != 8) throw std::invalid_argument("evaluate_scenario: expected 8 inputs");
    const double a = x[0];
    const double b = x[1];
    const double pf = x[2];

    PoroelasticMaterial mat;
    mat.shear_modulus_pa = x[3];
    mat.undrained_poisson = x[4];
    mat.drained_poisson = x[5];
    mat.skempton_b = x[6];
    mat.mobility = std::pow(10.0, x[7]);

    const FractureSystem system =
        FractureSystem::parallel_pair(a, b, scenario.elements_per_fracture());
    Simulator sim(system, mat, scenario.far_field, scenario.kernel_options);
    const int n_steps = scenario.n_steps();

    const auto obs = points.locate(a, b);
    std::vector<double> out;
    out.reserve(scenario_output_count(scenario));
    for (double horizon : scenario.horizons_s) {
        const double dt = horizon / n_steps;
        const BoundaryCondition bc = scenario.production_bc(n_steps, sim.elements(), pf);
        const DiscontinuityHistory hist = sim.march(bc, dt, n_steps);
        for (const auto& [px, py] : obs) {
            const FieldSample f = sim.field_at(hist, px, py, horizon);
            out.push_back(f.pore_pressure_pa);
            out.push_back(-f.sigma_xx_pa);  // sigma_h magnitude along x
            out.push_back(-f.sigma_yy_pa);  // sigma_H magnitude along y
        }
    }
    return out;
}

std::vector<std::pair<double, double>> midline_scan(double half_length_m, int points_count,
                                                    double reach_factor) {
    std::vector<std::pair<double, double>> line;
    line.reserve(points_count);
    const double reach = reach_factor * half_length_m;
    for (int i = 0; i < points_count; ++i) {
        const double y = -reach + 2.0 * reach * i / (points_count - 1);
        line.push_back({0.0, y});
    }
    return line;
}

namespace {

// Optional wall-clock stamp; off by default so outputs stay byte-reproducible.
std::string stamp_line() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("generated=") + buf;
}

std::string sanitize(std::string name) {
    for (char& c : name) {
        if (c == ' ' || c == '/') c = '_';
    }
    return name;
}

void write_profile_csv(const std::string& path, const std::vector<FieldSample>& samples,
                       const std::string& hash) {
    CsvWriter csv(path);
    csv.comment("config_hash=" + hash);
    csv.row({"x_m", "y_m", "t_s", "p_Pa", "sxx_Pa", "syy_Pa", "sxy_Pa"});
    for (const auto& s : samples) {
        csv.row({format_double(s.x_m), format_double(s.y_m), format_double(s.t_s),
                 format_double(s.pore_pressure_pa), format_double(s.sigma_xx_pa),
                 format_double(s.sigma_yy_pa), format_double(s.sigma_xy_pa)});
    }
}

void write_figure_profile_csv(const std::string& path, const std::vector<FieldSample>& samples,
                              const std::string& hash) {
    // Plot-data analogue of the depletion figures: pore pressure, both
    // horizontal stress magnitudes, and the anisotropy along the scan line.
    CsvWriter csv(path);
    csv.comment("config_hash=" + hash);
    csv.row({"y_m", "p_Pa", "sigma_max_Pa", "sigma_min_Pa", "anisotropy_Pa"});
    for (const auto& s : samples) {
        const double sig_h = -s.sigma_xx_pa;
        const double sig_H = -s.sigma_yy_pa;
        csv.row({format_double(s.y_m), format_double(s.pore_pressure_pa), format_double(sig_H),
                 format_double(sig_h), format_double(sig_H - sig_h)});
    }
}

}  // namespace

DepletionStudyResult run_depletion_study(const StudyConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    DepletionStudyResult result;

    std::vector<RockPreset> rocks;
    if (cfg.depletion_rocks.empty()) {
        rocks = rock_presets();
    } else {
        for (const auto& name : cfg.depletion_rocks) {
            const RockPreset* p = find_rock_preset(name);
            if (!p) throw std::invalid_argument("unknown rock preset: " + name);
            rocks.push_back(*p);
        }
    }

    const ScenarioConfig& s = cfg.scenario;
    const auto line = midline_scan(s.half_length_m);
    for (const auto& rock : rocks) {
        try {
            const FractureSystem system = FractureSystem::parallel_pair(
                s.half_length_m, s.spacing_m, s.elements_per_fracture());
            Simulator sim(system, rock.material, s.far_field, s.kernel_options);
            for (std::size_t h = 0; h < s.horizons_s.size(); ++h) {
                const double horizon = s.horizons_s[h];
                const int n_steps = s.n_steps();
                const BoundaryCondition bc =
                    s.production_bc(n_steps, sim.elements(), s.production_pressure_pa);
                const DiscontinuityHistory hist = sim.march(bc, horizon / n_steps, n_steps);
                const auto samples = sim.depletion_profile(hist, line, horizon);
                const std::string base = sanitize(rock.name) + "_" + s.horizon_labels[h];
                const std::string profile = cfg.output_dir + "/profile_" + base + ".csv";
                const std::string figure = cfg.output_dir + "/fig_profile_" + base + ".csv";
                const std::string hash =
                    cfg.stamp_outputs ? cfg.config_hash + " " + stamp_line() : cfg.config_hash;
                write_profile_csv(profile, samples, hash);
                write_figure_profile_csv(figure, samples, hash);
                result.profile_files.push_back(profile);
                result.figure_files.push_back(figure);
            }
        } catch (const std::exception& e) {
            result.failures.push_back(rock.name + ": " + e.what());
        }
    }

    if (!result.failures.empty()) {
        CsvWriter csv(cfg.output_dir + "/depletion_failures.csv");
        csv.comment("config_hash=" + cfg.config_hash);
        csv.row({"rock", "error"});
        for (const auto& f : result.failures) {
            const auto colon = f.find(':');
            csv.row({f.substr(0, colon), f.substr(colon + 2)});
        }
    }
    return result;
}

namespace {

struct RunRecord {
    long run_id;
    std::vector<double> outputs;
};

// run id layout over the design: block * N + row, blocks ordered
// A, B, A_B^(1..n), B_A^(1..n).
void run_point(const SampleDesign& d, long run_id, std::vector<double>& x) {
    const long nb = d.base_count;
    const int n = d.space.size();
    const long block = run_id / nb;
    const long row = run_id % nb;
    const Eigen::MatrixXd* m = nullptr;
    if (block == 0) {
        m = &d.a;
    } else if (block == 1) {
        m = &d.b;
    } else if (block < 2 + n) {
        m = &d.a_cross[block - 2];
    } else {
        m = &d.b_cross[block - 2 - n];
    }
    x.resize(n);
    for (int j = 0; j < n; ++j) x[j] = (*m)(row, j);
}

std::pair<std::string, int> run_matrix_tag(const SampleDesign& d, long run_id) {
    const long nb = d.base_count;
    const int n = d.space.size();
    const long block = run_id / nb;
    if (block == 0) return {"A", 0};
    if (block == 1) return {"B", 0};
    if (block < 2 + n) return {"AB", static_cast<int>(block - 1)};
    return {"BA", static_cast<int>(block - 1 - n)};
}

}  // namespace

CampaignResult run_sobol_study(const StudyConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    CampaignResult result;
    result.design = design(cfg.space, cfg.base_samples, cfg.seed, cfg.generator);
    const SampleDesign& d = result.design;
    const int n = cfg.space.size();
    const long total = d.total_evaluations();
    const int n_out = scenario_output_count(cfg.scenario);
    for (int k = 0; k < n_out; ++k) {
        result.output_names.push_back(scenario_output_name(cfg.scenario, k));
    }

    Eigen::MatrixXd all = Eigen::MatrixXd::Constant(total, n_out,
                                                    std::numeric_limits<double>::quiet_NaN());
    std::vector<char> done(total, 0);

    // Resume: accept stored rows only when they belong to this configuration.
    const std::string runs_path = cfg.output_dir + "/runs.csv";
    if (fs::exists(runs_path)) {
        const CsvTable stored = read_csv(runs_path);
        bool hash_ok = false;
        for (const auto& c : stored.comments) {
            if (c.find("config_hash=" + cfg.config_hash) != std::string::npos) hash_ok = true;
        }
        if (hash_ok && static_cast<int>(stored.header.size()) == 3 + n + n_out) {
            for (const auto& row : stored.rows) {
                const long id = std::stol(row[0]);
                if (id < 0 || id >= total) continue;
                for (int k = 0; k < n_out; ++k) {
                    all(id, k) = std::stod(row[3 + n + k]);
                }
                done[id] = 1;
            }
        }
    }

    std::atomic<long> next{0};
    std::atomic<long> failures{0};
    std::mutex failed_mutex;
    const int workers = resolve_worker_count(cfg);
    auto worker = [&]() {
        std::vector<double> x;
        for (;;) {
            const long id = next.fetch_add(1);
            if (id >= total) break;
            if (done[id]) continue;
            run_point(d, id, x);
            try {
                const std::vector<double> y = evaluate_scenario(cfg.scenario, cfg.points, x);
                for (int k = 0; k < n_out; ++k) all(id, k) = y[k];
            } catch (const std::exception&) {
                failures.fetch_add(1);
                std::lock_guard<std::mutex> lock(failed_mutex);
                result.failed_runs.push_back(id);
            }
        }
    };
    {
        std::vector<std::thread> pool;
        const int nw = std::max<int>(1, static_cast<int>(std::min<long>(workers, total)));
        pool.reserve(nw);
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Previously stored failures count too.
    for (long id = 0; id < total; ++id) {
        if (done[id] && !std::isfinite(all(id, 0))) result.failed_runs.push_back(id);
    }
    std::sort(result.failed_runs.begin(), result.failed_runs.end());
    result.failed_runs.erase(
        std::unique(result.failed_runs.begin(), result.failed_runs.end()),
        result.failed_runs.end());

    // Persist every record, sorted by run id.
    {
        CsvWriter csv(runs_path);
        csv.comment("config_hash=" + cfg.config_hash);
        if (cfg.stamp_outputs) csv.comment(stamp_line());
        std::vector<std::string> header = {"run_id", "matrix", "dim_swap"};
        for (int j = 0; j < n; ++j) header.push_back("x" + std::to_string(j + 1));
        for (int k = 0; k < n_out; ++k) header.push_back(result.output_names[k]);
        csv.row(header);
        std::vector<double> x;
        for (long id = 0; id < total; ++id) {
            const auto [tag, swap] = run_matrix_tag(d, id);
            run_point(d, id, x);
            std::vector<std::string> row = {std::to_string(id), tag, std::to_string(swap)};
            for (int j = 0; j < n; ++j) row.push_back(format_double(x[j]));
            for (int k = 0; k < n_out; ++k) row.push_back(format_double(all(id, k)));
            csv.row(row);
        }
    }

    const double failure_rate = static_cast<double>(result.failed_runs.size()) / total;
    if (failure_rate > cfg.failure_budget) {
        throw std::runtime_error("sobol study: failure rate " + std::to_string(failure_rate) +
                                 " exceeds budget " + std::to_string(cfg.failure_budget));
    }

    // Column-mean imputation for the (rare, budgeted) failed runs so the
    // estimators stay defined; the run records keep the NaNs.
    if (!result.failed_runs.empty()) {
        for (int k = 0; k < n_out; ++k) {
            double sum = 0.0;
            long cnt = 0;
            for (long id = 0; id < total; ++id) {
                if (std::isfinite(all(id, k))) {
                    sum += all(id, k);
                    ++cnt;
                }
            }
            const double mean = cnt > 0 ? sum / cnt : 0.0;
            for (long id = 0; id < total; ++id) {
                if (!std::isfinite(all(id, k))) all(id, k) = mean;
            }
        }
    }

    // Slice the flat evaluation table back into the design structure.
    const long nb = d.base_count;
    result.outputs.on_a = all.middleRows(0, nb);
    result.outputs.on_b = all.middleRows(nb, nb);
    result.outputs.on_a_cross.resize(n);
    result.outputs.on_b_cross.resize(n);
    for (int i = 0; i < n; ++i) {
        result.outputs.on_a_cross[i] = all.middleRows(nb * (2 + i), nb);
        result.outputs.on_b_cross[i] = all.middleRows(nb * (2 + n + i), nb);
    }

    for (int k = 0; k < n_out; ++k) {
        result.analyses.push_back(
            analyze(d, result.outputs, k, cfg.bootstrap_resamples, cfg.seed ^ 0x5b5b5b5bull));
    }

    // Retained-index table at the display thresholds (first order 0.01,
    // interactions 0.03) plus the unfiltered table.
    auto emit_indices = [&](const std::string& path, bool filtered) {
        CsvWriter csv(path);
        csv.comment("config_hash=" + cfg.config_hash);
        if (cfg.stamp_outputs) csv.comment(stamp_line());
        if (!result.failed_runs.empty()) {
            csv.comment("imputed_failed_runs=" + std::to_string(result.failed_runs.size()));
        }
        csv.row({"index_name", "order", "estimate", "boot_stderr", "point", "quantity",
                 "horizon"});
        for (int k = 0; k < n_out; ++k) {
            const int h = k / 18;
            const int point = (k % 18) / 3;
            const int q = k % 3;
            static const char* qn[] = {"pore_pressure", "sigma_min", "sigma_max"};
            auto emit_one = [&](const IndexEstimate& e) {
                const double value = filtered ? e.display() : e.raw;
                if (filtered) {
                    const double threshold = e.order == 1 ? 0.01 : 0.03;
                    if (value < threshold) return;
                }
                csv.row({e.name, std::to_string(e.order), format_double(value),
                         format_double(e.boot_stderr), "P" + std::to_string(point + 1), qn[q],
                         cfg.scenario.horizon_labels[h]});
            };
            for (const auto& e : result.analyses[k].first_order) emit_one(e);
            for (const auto& e : result.analyses[k].second_order) emit_one(e);
        }
    };
    emit_indices(cfg.output_dir + "/sobol_indices.csv", true);
    emit_indices(cfg.output_dir + "/sobol_indices_all.csv", false);

    // Bar-chart data, one file per quantity and horizon, columns P1..P6.
    for (std::size_t h = 0; h < cfg.scenario.horizons_s.size(); ++h) {
        for (int q = 0; q < 3; ++q) {
            static const char* qn[] = {"pore_pressure", "sigma_min", "sigma_max"};
            for (int order = 1; order <= 2; ++order) {
                const double threshold = order == 1 ? 0.01 : 0.03;
                std::vector<std::string> names;
                for (const auto& e :
                     order == 1 ? result.analyses[h * 18 + q].first_order
                                : result.analyses[h * 18 + q].second_order) {
                    bool retained = false;
                    for (int point = 0; point < 6; ++point) {
                        const int k = static_cast<int>(h) * 18 + point * 3 + q;
                        const IndexEstimate* est = result.analyses[k].find(e.name);
                        if (est && est->display() >= threshold) retained = true;
                    }
                    if (retained) names.push_back(e.name);
                }
                const std::string path = cfg.output_dir + "/bars_" + std::string(qn[q]) + "_" +
                                         cfg.scenario.horizon_labels[h] +
                                         (order == 1 ? "_first.csv" : "_second.csv");
                CsvWriter csv(path);
                csv.comment("config_hash=" + cfg.config_hash);
                csv.row({"index_name", "P1", "P2", "P3", "P4", "P5", "P6"});
                for (const auto& name : names) {
                    std::vector<std::string> row = {name};
                    for (int point = 0; point < 6; ++point) {
                        const int k = static_cast<int>(h) * 18 + point * 3 + q;
                        const IndexEstimate* est = result.analyses[k].find(name);
                        row.push_back(format_double(est ? est->display() : 0.0));
                    }
                    csv.row(row);
                }
            }
        }
    }

    return result;
}

CampaignResult load_campaign(const StudyConfig& cfg) {
    const std::string runs_path = cfg.output_dir + "/runs.csv";
    if (!fs::exists(runs_path)) {
        throw std::runtime_error("no stored campaign at " + runs_path);
    }
    CampaignResult result;
    result.design = design(cfg.space, cfg.base_samples, cfg.seed, cfg.generator);
    const SampleDesign& d = result.design;
    const int n = cfg.space.size();
    const long total = d.total_evaluations();
    const int n_out = scenario_output_count(cfg.scenario);
    for (int k = 0; k < n_out; ++k) {
        result.output_names.push_back(scenario_output_name(cfg.scenario, k));
    }

    const CsvTable stored = read_csv(runs_path);
    bool hash_ok = false;
    for (const auto& c : stored.comments) {
        if (c.find("config_hash=" + cfg.config_hash) != std::string::npos) hash_ok = true;
    }
    if (!hash_ok) {
        throw std::runtime_error("stored campaign belongs to a different configuration");
    }
    if (static_cast<int>(stored.header.size()) != 3 + n + n_out ||
        static_cast<long>(stored.rows.size()) != total) {
        throw std::runtime_error("stored campaign is incomplete: re-run the sobol study");
    }

    Eigen::MatrixXd all(total, n_out);
    for (const auto& row : stored.rows) {
        const long id = std::stol(row[0]);
        for (int k = 0; k < n_out; ++k) all(id, k) = std::stod(row[3 + n + k]);
    }
    for (long id = 0; id < total; ++id) {
        if (!std::isfinite(all(id, 0))) result.failed_runs.push_back(id);
    }
    if (!result.failed_runs.empty()) {
        for (int k = 0; k < n_out; ++k) {
            double sum = 0.0;
            long cnt = 0;
            for (long id = 0; id < total; ++id) {
                if (std::isfinite(all(id, k))) {
                    sum += all(id, k);
                    ++cnt;
                }
            }
            const double mean = cnt > 0 ? sum / cnt : 0.0;
            for (long id = 0; id < total; ++id) {
                if (!std::isfinite(all(id, k))) all(id, k) = mean;
            }
        }
    }

    const long nb = d.base_count;
    result.outputs.on_a = all.middleRows(0, nb);
    result.outputs.on_b = all.middleRows(nb, nb);
    result.outputs.on_a_cross.resize(n);
    result.outputs.on_b_cross.resize(n);
    for (int i = 0; i < n; ++i) {
        result.outputs.on_a_cross[i] = all.middleRows(nb * (2 + i), nb);
        result.outputs.on_b_cross[i] = all.middleRows(nb * (2 + n + i), nb);
    }
    for (int k = 0; k < n_out; ++k) {
        result.analyses.push_back(
            analyze(d, result.outputs, k, cfg.bootstrap_resamples, cfg.seed ^ 0x5b5b5b5bull));
    }
    return result;
}

RomBuildResult run_rom_build(const StudyConfig& cfg, const CampaignResult& campaign,
                             double threshold) {
    fs::create_directories(cfg.output_dir);
    RomBuildResult result;

    // The catalog surrogates are one-year models; build at the horizon
    // closest to one year.
    int h_idx = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < cfg.scenario.horizons_s.size(); ++h) {
        const double err = std::fabs(cfg.scenario.horizons_s[h] - kYearS);
        if (err < best) {
            best = err;
            h_idx = static_cast<int>(h);
        }
    }

    const int n_samples = campaign.design.base_count;
    const int bins_1d = std::clamp(n_samples / 20, 4, 32);
    const int bins_2d = std::clamp(static_cast<int>(std::sqrt(n_samples / 20.0)), 4, 16);

    CsvWriter summary(cfg.output_dir + "/rom_build_summary.csv");
    summary.comment("config_hash=" + cfg.config_hash);
    summary.row({"quantity", "point", "horizon", "selected", "dropped", "declared_accuracy",
                 "holdout_r2", "file"});

    for (const std::string point : {"P1", "P5", "P6"}) {
        const int point_num = point[1] - '0';
        for (Quantity q : {Quantity::pore_pressure, Quantity::sigma_min, Quantity::sigma_max}) {
            const int col = scenario_output_index(cfg.scenario, q, point_num, h_idx);
            const SobolResult& analysis = campaign.analyses[col];

            // Rank all indices and keep the head of the list until the
            // cumulative contribution reaches the threshold.
            std::vector<const IndexEstimate*> ranked;
            for (const auto& e : analysis.first_order) ranked.push_back(&e);
            for (const auto& e : analysis.second_order) ranked.push_back(&e);
            std::sort(ranked.begin(), ranked.end(),
                      [](const IndexEstimate* a, const IndexEstimate* b) {
                          if (a->display() != b->display()) return a->display() > b->display();
                          return a->name < b->name;
                      });
            std::vector<const IndexEstimate*> selected;
            double cumulative = 0.0;
            for (const IndexEstimate* e : ranked) {
                if (cumulative >= threshold) break;
                if (e->display() <= 0.0) break;
                selected.push_back(e);
                cumulative += e->display();
            }

            RomBuildEntry entry;
            entry.rom.name = quantity_name(q) + "_" + point + "_" +
                             cfg.scenario.horizon_labels[h_idx] + "_fitted";
            entry.rom.quantity = q;
            entry.rom.point_id = point;
            entry.rom.horizon_s = cfg.scenario.horizons_s[h_idx];
            entry.rom.f0_pa = analysis.f0_hat;
            entry.rom.declared_accuracy = 0.0;

            const RomSpec* catalog_rom = find_catalog_rom(q, point);
            const Eigen::VectorXd ys = campaign.outputs.on_a.col(col);
            for (const IndexEstimate* e : selected) {
                FormKind kind =
                    e->order == 1 ? FormKind::cubic_1d : FormKind::bivariate_poly_3;
                const std::string component_label = "f" + e->name.substr(1);
                if (catalog_rom) {
                    for (const auto& c : catalog_rom->components) {
                        if (c.label == component_label) kind = c.kind;
                    }
                }
                try {
                    ComponentFit fit =
                        e->order == 1
                            ? fit_first_order(campaign.design.a, ys, cfg.space, e->dim_i, kind,
                                              bins_1d)
                            : fit_second_order(campaign.design.a, ys, cfg.space, e->dim_i,
                                               e->dim_j, kind, bins_2d);
                    const std::string fit_path = cfg.output_dir + "/fit_" + quantity_name(q) +
                                                 "_" + point + "_" + fit.fitted.label + ".csv";
                    write_component_fit_csv(fit_path, fit, "config_hash=" + cfg.config_hash);
                    entry.rom.components.push_back(fit.fitted);
                    entry.rom.declared_accuracy += e->display();
                    entry.fits.push_back(std::move(fit));
                } catch (const std::exception& ex) {
                    entry.dropped_components.push_back(e->name + ": " + ex.what());
                }
            }

            // Holdout: the B matrix never participates in the fits.
            {
                const Eigen::VectorXd yb = campaign.outputs.on_b.col(col);
                double sse = 0.0, sst = 0.0;
                const double mean = yb.mean();
                std::vector<double> x(cfg.space.size());
                for (long r = 0; r < campaign.design.b.rows(); ++r) {
                    for (int j = 0; j < cfg.space.size(); ++j) x[j] = campaign.design.b(r, j);
                    const double pred = eval_rom(entry.rom, x);
                    sse += (yb(r) - pred) * (yb(r) - pred);
                    sst += (yb(r) - mean) * (yb(r) - mean);
                }
                entry.holdout_r2 = sst > 0 ? 1.0 - sse / sst : 0.0;
            }

            const std::string rom_path = cfg.output_dir + "/rom_" + quantity_name(q) + "_" +
                                         point + "_" + cfg.scenario.horizon_labels[h_idx] +
                                         ".rom";
            save_rom(entry.rom, rom_path);
            std::string selected_names, dropped_names;
            for (const auto& c : entry.rom.components) {
                if (!selected_names.empty()) selected_names += "+";
                selected_names += c.label;
            }
            for (const auto& s : entry.dropped_components) {
                if (!dropped_names.empty()) dropped_names += "+";
                dropped_names += s.substr(0, s.find(':'));
            }
            summary.row({quantity_name(q), point, cfg.scenario.horizon_labels[h_idx],
                         selected_names, dropped_names,
                         format_double(entry.rom.declared_accuracy),
                         format_double(entry.holdout_r2), rom_path});
            result.entries.push_back(std::move(entry));
        }
    }
    return result;
}

}  // namespace porosol
