#include "porosol/sobol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "porosol/config.hpp"
#include "porosol/csv.hpp"
#include "porosol/sobol_sequence.hpp"

namespace porosol {

namespace {

double kahan_sum(const double* v, long n) {
    double sum = 0.0, comp = 0.0;
    for (long i = 0; i < n; ++i) {
        const double y = v[i] - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double kahan_mean(const Eigen::VectorXd& v) { return kahan_sum(v.data(), v.size()) / v.size(); }

void check_finite(const Eigen::VectorXd& v) {
    for (long i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i))) throw NonFiniteOutputError(i);
    }
}

}  // namespace

void InputSpace::require_valid() const {
    if (dims.empty()) throw std::invalid_argument("input space: needs at least one dimension");
    std::set<std::string> names;
    for (const auto& d : dims) {
        if (!(d.lower < d.upper)) {
            throw std::invalid_argument("input space: dim '" + d.name + "' needs lower < upper");
        }
        if (d.scale == DimScale::log10 && !(d.lower > 0.0)) {
            throw std::invalid_argument("input space: log10 dim '" + d.name +
                                        "' needs positive bounds");
        }
        if (!names.insert(d.name).second) {
            throw std::invalid_argument("input space: duplicate dim name '" + d.name + "'");
        }
    }
}

double InputSpace::map_unit(int dim, double u) const {
    const InputDim& d = dims[dim];
    if (d.scale == DimScale::log10) {
        const double lo = std::log10(d.lower);
        const double hi = std::log10(d.upper);
        return std::pow(10.0, lo + u * (hi - lo));
    }
    return d.lower + u * (d.upper - d.lower);
}

bool InputSpace::contains(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != size()) return false;
    for (int i = 0; i < size(); ++i) {
        const double tol = 1e-12 * (std::fabs(dims[i].lower) + std::fabs(dims[i].upper));
        if (x[i] < dims[i].lower - tol || x[i] > dims[i].upper + tol) return false;
    }
    return true;
}

SampleDesign design(const InputSpace& space, int base_count, std::uint64_t seed,
                    DesignGenerator generator) {
    space.require_valid();
    if (base_count < 2) throw std::invalid_argument("design: base_count must be >= 2");
    const int n = space.size();

    SampleDesign d;
    d.space = space;
    d.base_count = base_count;
    d.seed = seed;
    d.generator = generator;
    d.a.resize(base_count, n);
    d.b.resize(base_count, n);

    if (generator == DesignGenerator::sobol_sequence) {
        SobolSequence seq(2 * n, seed);
        std::vector<double> pt;
        for (int m = 0; m < base_count; ++m) {
            seq.next(pt);
            for (int j = 0; j < n; ++j) {
                d.a(m, j) = space.map_unit(j, pt[j]);
                d.b(m, j) = space.map_unit(j, pt[n + j]);
            }
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int m = 0; m < base_count; ++m) {
            for (int j = 0; j < n; ++j) d.a(m, j) = space.map_unit(j, uni(rng));
            for (int j = 0; j < n; ++j) d.b(m, j) = space.map_unit(j, uni(rng));
        }
    }

    d.a_cross.reserve(n);
    d.b_cross.reserve(n);
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd ab = d.a;
        ab.col(i) = d.b.col(i);
        d.a_cross.push_back(std::move(ab));
        Eigen::MatrixXd ba = d.b;
        ba.col(i) = d.a.col(i);
        d.b_cross.push_back(std::move(ba));
    }
    return d;
}

namespace {

void eval_matrix(const Eigen::MatrixXd& points, const VectorModel& model, int n_outputs,
                 int workers, long id_offset, Eigen::MatrixXd& out) {
    const long rows = points.rows();
    out.resize(rows, n_outputs);
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&](long begin, long end) {
        std::vector<double> x(points.cols());
        try {
            for (long m = begin; m < end; ++m) {
                for (long j = 0; j < points.cols(); ++j) x[j] = points(m, j);
                const std::vector<double> y = model(x);
                if (static_cast<int>(y.size()) != n_outputs) {
                    throw std::runtime_error("model returned wrong output count");
                }
                for (int k = 0; k < n_outputs; ++k) {
                    if (!std::isfinite(y[k])) throw NonFiniteOutputError(id_offset + m);
                    out(m, k) = y[k];
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    if (workers <= 1 || rows < 2) {
        worker(0, rows);
    } else {
        const int nw = std::min<long>(workers, rows);
        std::vector<std::thread> threads;
        threads.reserve(nw);
        for (int w = 0; w < nw; ++w) {
            const long begin = rows * w / nw;
            const long end = rows * (w + 1) / nw;
            threads.emplace_back(worker, begin, end);
        }
        for (auto& t : threads) t.join();
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

DesignOutputs evaluate_design(const SampleDesign& d, const VectorModel& model, int n_outputs,
                              int workers) {
    const int n = d.space.size();
    const long nb = d.base_count;
    DesignOutputs out;
    eval_matrix(d.a, model, n_outputs, workers, 0, out.on_a);
    eval_matrix(d.b, model, n_outputs, workers, nb, out.on_b);
    out.on_a_cross.resize(n);
    out.on_b_cross.resize(n);
    for (int i = 0; i < n; ++i) {
        eval_matrix(d.a_cross[i], model, n_outputs, workers, nb * (2 + i), out.on_a_cross[i]);
        eval_matrix(d.b_cross[i], model, n_outputs, workers, nb * (2 + n + i), out.on_b_cross[i]);
    }
    return out;
}

DesignOutputs evaluate_design(const SampleDesign& d, const ScalarModel& model, int workers) {
    VectorModel wrapped = [&model](const std::vector<double>& x) {
        return std::vector<double>{model(x)};
    };
    return evaluate_design(d, wrapped, 1, workers);
}

double estimate_mean(const Eigen::VectorXd& outputs_on_a) {
    if (outputs_on_a.size() == 0) throw std::invalid_argument("estimate_mean: empty outputs");
    check_finite(outputs_on_a);
    return kahan_mean(outputs_on_a);
}

double estimate_variance(const Eigen::VectorXd& outputs_on_a) {
    if (outputs_on_a.size() == 0) throw std::invalid_argument("estimate_variance: empty outputs");
    check_finite(outputs_on_a);
    const double f0 = kahan_mean(outputs_on_a);
    const Eigen::VectorXd sq = outputs_on_a.array().square();
    return kahan_mean(sq) - f0 * f0;
}

namespace {

struct EstimatorCore {
    double f0 = 0.0;
    double variance = 0.0;

    // D_i = mean(f(A) f(B_A^(i))) - f0^2
    double partial_first(const Eigen::VectorXd& fa, const Eigen::VectorXd& fba) const {
        const Eigen::VectorXd prod = fa.array() * fba.array();
        return kahan_mean(prod) - f0 * f0;
    }

    // D_ij = mean(f(A_B^(i)) f(B_A^(j))) - f0^2 - D_i - D_j, symmetrized
    // over the two pairings.
    double partial_second(const Eigen::VectorXd& fab_i, const Eigen::VectorXd& fba_j,
                          const Eigen::VectorXd& fab_j, const Eigen::VectorXd& fba_i, double di,
                          double dj) const {
        const Eigen::VectorXd p1 = fab_i.array() * fba_j.array();
        const Eigen::VectorXd p2 = fab_j.array() * fba_i.array();
        const double closed = 0.5 * (kahan_mean(p1) + kahan_mean(p2)) - f0 * f0;
        return closed - di - dj;
    }
};

EstimatorCore make_core(const Eigen::VectorXd& on_a) {
    EstimatorCore core;
    core.f0 = estimate_mean(on_a);
    core.variance = estimate_variance(on_a);
    return core;
}

}  // namespace

double first_order_index(const DesignOutputs& outputs, int dim_i, int output) {
    const Eigen::VectorXd fa = outputs.on_a.col(output);
    const EstimatorCore core = make_core(fa);
    if (!(core.variance > 0.0)) throw ZeroVarianceError{};
    return core.partial_first(fa, outputs.on_b_cross[dim_i].col(output)) / core.variance;
}

double second_order_index(const DesignOutputs& outputs, int dim_i, int dim_j, int output) {
    if (dim_i == dim_j) throw std::invalid_argument("second_order_index: requires i != j");
    const Eigen::VectorXd fa = outputs.on_a.col(output);
    const EstimatorCore core = make_core(fa);
    if (!(core.variance > 0.0)) throw ZeroVarianceError{};
    const double di = core.partial_first(fa, outputs.on_b_cross[dim_i].col(output));
    const double dj = core.partial_first(fa, outputs.on_b_cross[dim_j].col(output));
    const double dij = core.partial_second(
        outputs.on_a_cross[dim_i].col(output), outputs.on_b_cross[dim_j].col(output),
        outputs.on_a_cross[dim_j].col(output), outputs.on_b_cross[dim_i].col(output), di, dj);
    return dij / core.variance;
}

double IndexEstimate::display() const {
    return std::clamp(raw, -noise_bound, 1.0 + noise_bound);
}

const IndexEstimate* SobolResult::find(const std::string& name) const {
    for (const auto& e : first_order) {
        if (e.name == name) return &e;
    }
    for (const auto& e : second_order) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

double SobolResult::displayed_index_sum() const {
    double s = 0.0;
    for (const auto& e : first_order) s += e.display();
    for (const auto& e : second_order) s += e.display();
    return s;
}

SobolResult analyze(const SampleDesign& d, const DesignOutputs& outputs, int output,
                    int bootstrap_resamples, std::uint64_t bootstrap_seed) {
    const int n = d.space.size();
    const long nb = d.base_count;

    const Eigen::VectorXd fa = outputs.on_a.col(output);
    std::vector<Eigen::VectorXd> fab(n), fba(n);
    for (int i = 0; i < n; ++i) {
        fab[i] = outputs.on_a_cross[i].col(output);
        fba[i] = outputs.on_b_cross[i].col(output);
        check_finite(fab[i]);
        check_finite(fba[i]);
    }

    const EstimatorCore core = make_core(fa);
    if (!(core.variance > 0.0)) throw ZeroVarianceError{};

    SobolResult result;
    result.f0_hat = core.f0;
    result.total_variance = core.variance;
    result.sample_count = static_cast<int>(nb);

    std::vector<double> di(n);
    for (int i = 0; i < n; ++i) di[i] = core.partial_first(fa, fba[i]);

    for (int i = 0; i < n; ++i) {
        IndexEstimate e;
        e.name = "S" + std::to_string(i + 1);
        e.order = 1;
        e.dim_i = i + 1;
        e.raw = di[i] / core.variance;
        result.first_order.push_back(e);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            IndexEstimate e;
            e.name = "S" + std::to_string(i + 1) + std::to_string(j + 1);
            e.order = 2;
            e.dim_i = i + 1;
            e.dim_j = j + 1;
            e.raw = core.partial_second(fab[i], fba[j], fab[j], fba[i], di[i], di[j]) /
                    core.variance;
            result.second_order.push_back(e);
        }
    }

    if (bootstrap_resamples > 0) {
        std::mt19937_64 rng(bootstrap_seed);
        std::uniform_int_distribution<long> pick(0, nb - 1);
        const int n_first = n;
        const int n_second = static_cast<int>(result.second_order.size());
        Eigen::MatrixXd boot_first(bootstrap_resamples, n_first);
        Eigen::MatrixXd boot_second(bootstrap_resamples, n_second);
        std::vector<long> rows(nb);
        for (int r = 0; r < bootstrap_resamples; ++r) {
            for (long m = 0; m < nb; ++m) rows[m] = pick(rng);
            double sum_f = 0.0, sum_f2 = 0.0;
            std::vector<double> sum_fi(n, 0.0);
            for (long m = 0; m < nb; ++m) {
                const double v = fa(rows[m]);
                sum_f += v;
                sum_f2 += v * v;
                for (int i = 0; i < n; ++i) sum_fi[i] += v * fba[i](rows[m]);
            }
            const double bf0 = sum_f / nb;
            const double bvar = sum_f2 / nb - bf0 * bf0;
            std::vector<double> bdi(n);
            for (int i = 0; i < n; ++i) {
                bdi[i] = sum_fi[i] / nb - bf0 * bf0;
                boot_first(r, i) = bvar > 0 ? bdi[i] / bvar : 0.0;
            }
            int col = 0;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j, ++col) {
                    double s1 = 0.0, s2 = 0.0;
                    for (long m = 0; m < nb; ++m) {
                        s1 += fab[i](rows[m]) * fba[j](rows[m]);
                        s2 += fab[j](rows[m]) * fba[i](rows[m]);
                    }
                    const double closed = 0.5 * (s1 + s2) / nb - bf0 * bf0;
                    boot_second(r, col) = bvar > 0 ? (closed - bdi[i] - bdi[j]) / bvar : 0.0;
                }
            }
        }
        auto stderr_of = [bootstrap_resamples](const Eigen::VectorXd& col) {
            const double mean = col.mean();
            const double var = (col.array() - mean).square().sum() /
                               std::max(1, bootstrap_resamples - 1);
            return std::sqrt(var);
        };
        for (int i = 0; i < n_first; ++i) {
            result.first_order[i].boot_stderr = stderr_of(boot_first.col(i));
            result.first_order[i].noise_bound = 3.0 * result.first_order[i].boot_stderr;
        }
        for (int c = 0; c < n_second; ++c) {
            result.second_order[c].boot_stderr = stderr_of(boot_second.col(c));
            result.second_order[c].noise_bound = 3.0 * result.second_order[c].boot_stderr;
        }
    }
    return result;
}

IndexReport index_report(const SobolResult& result, double threshold) {
    IndexReport report;
    report.threshold = threshold;
    auto consider = [&](const IndexEstimate& e) {
        if (e.display() >= threshold) {
            report.rows.push_back({e.name, e.order, e.display(), e.boot_stderr});
            report.displayed_sum += e.display();
        }
    };
    for (const auto& e : result.first_order) consider(e);
    for (const auto& e : result.second_order) consider(e);
    std::sort(report.rows.begin(), report.rows.end(),
              [](const ReportRow& a, const ReportRow& b) {
                  if (a.estimate != b.estimate) return a.estimate > b.estimate;
                  return a.name < b.name;
              });
    return report;
}

void write_design_outputs_csv(const std::string& path, const SampleDesign& d,
                              const DesignOutputs& outputs, int output,
                              const std::string& header_comment) {
    CsvWriter csv(path);
    if (!header_comment.empty()) csv.comment(header_comment);
    const int n = d.space.size();
    std::vector<std::string> header = {"sample_id", "matrix", "dim_swap"};
    for (int j = 0; j < n; ++j) header.push_back("x" + std::to_string(j + 1));
    header.push_back("output");
    csv.row(header);

    auto emit = [&](const Eigen::MatrixXd& pts, const Eigen::MatrixXd& outs,
                    const std::string& matrix, int dim_swap) {
        for (long m = 0; m < pts.rows(); ++m) {
            std::vector<std::string> row = {std::to_string(m), matrix,
                                            std::to_string(dim_swap)};
            for (int j = 0; j < n; ++j) row.push_back(format_double(pts(m, j)));
            row.push_back(format_double(outs(m, output)));
            csv.row(row);
        }
    };
    emit(d.a, outputs.on_a, "A", 0);
    emit(d.b, outputs.on_b, "B", 0);
    for (int i = 0; i < n; ++i) emit(d.a_cross[i], outputs.on_a_cross[i], "AB", i + 1);
    for (int i = 0; i < n; ++i) emit(d.b_cross[i], outputs.on_b_cross[i], "BA", i + 1);
}

void write_result_csv(const std::string& path, const SobolResult& result,
                      const std::string& header_comment) {
    CsvWriter csv(path);
    if (!header_comment.empty()) csv.comment(header_comment);
    csv.row({"index_name", "order", "estimate", "boot_stderr"});
    auto emit = [&csv](const IndexEstimate& e) {
        csv.row({e.name, std::to_string(e.order), format_double(e.raw),
                 format_double(e.boot_stderr)});
    };
    for (const auto& e : result.first_order) emit(e);
    for (const auto& e : result.second_order) emit(e);
}

}  // namespace porosol
