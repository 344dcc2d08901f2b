#include "porosol/rom_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "porosol/config.hpp"
#include "porosol/csv.hpp"

namespace porosol {

namespace {

struct LinearFit {
    Eigen::VectorXd coeffs;
    double sse = 0.0;
    double condition = 0.0;
};

LinearFit weighted_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& w) {
    Eigen::MatrixXd a = design;
    Eigen::VectorXd b = y;
    for (long r = 0; r < a.rows(); ++r) {
        const double s = std::sqrt(w(r));
        a.row(r) *= s;
        b(r) *= s;
    }
    // Column scaling keeps the condition estimate meaningful for monomials
    // of very different magnitudes.
    Eigen::VectorXd scale(a.cols());
    for (long c = 0; c < a.cols(); ++c) {
        const double n = a.col(c).norm();
        scale(c) = n > 0 ? n : 1.0;
        a.col(c) /= scale(c);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    LinearFit fit;
    fit.coeffs = qr.solve(b);
    const Eigen::MatrixXd r = qr.matrixR()
                                  .topLeftCorner(a.cols(), a.cols())
                                  .template triangularView<Eigen::Upper>();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (long c = 0; c < a.cols(); ++c) {
        const double d = std::fabs(r(c, c));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    fit.condition = dmin > 0 ? dmax / dmin : std::numeric_limits<double>::infinity();
    fit.sse = (a * fit.coeffs - b).squaredNorm();
    for (long c = 0; c < a.cols(); ++c) fit.coeffs(c) /= scale(c);
    return fit;
}

Eigen::MatrixXd poly_design_1d(const std::vector<double>& x, int degree) {
    // Column j holds x^(degree-j), matching the coefficient layout.
    Eigen::MatrixXd d(static_cast<long>(x.size()), degree + 1);
    for (std::size_t r = 0; r < x.size(); ++r) {
        double p = 1.0;
        for (int k = degree; k >= 0; --k) {
            d(static_cast<long>(r), k) = p;
            p *= x[r];
        }
    }
    return d;
}

Eigen::MatrixXd bivariate_design(const std::vector<double>& x, const std::vector<double>& y,
                                 int degree) {
    const int terms = (degree + 1) * (degree + 2) / 2;
    Eigen::MatrixXd d(static_cast<long>(x.size()), terms);
    for (std::size_t r = 0; r < x.size(); ++r) {
        int idx = 0;
        for (int deg = 0; deg <= degree; ++deg) {
            for (int i = deg; i >= 0; --i) {
                d(static_cast<long>(r), idx++) =
                    std::pow(x[r], i) * std::pow(y[r], deg - i);
            }
        }
    }
    return d;
}

Eigen::MatrixXd harmonic_design(const std::vector<double>& x, const std::vector<double>& freqs) {
    // Columns: [sin(w1 x), cos(w1 x), sin(w2 x), cos(w2 x), ...]
    Eigen::MatrixXd d(static_cast<long>(x.size()), 2 * static_cast<long>(freqs.size()));
    for (std::size_t r = 0; r < x.size(); ++r) {
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            d(static_cast<long>(r), 2 * k) = std::sin(freqs[k] * x[r]);
            d(static_cast<long>(r), 2 * k + 1) = std::cos(freqs[k] * x[r]);
        }
    }
    return d;
}

Eigen::MatrixXd fourier_design(const std::vector<double>& x, double w, int harmonics) {
    Eigen::MatrixXd d(static_cast<long>(x.size()), 1 + 2 * harmonics);
    for (std::size_t r = 0; r < x.size(); ++r) {
        d(static_cast<long>(r), 0) = 1.0;
        for (int k = 1; k <= harmonics; ++k) {
            d(static_cast<long>(r), 2 * k - 1) = std::cos(k * w * x[r]);
            d(static_cast<long>(r), 2 * k) = std::sin(k * w * x[r]);
        }
    }
    return d;
}

struct SineFitResult {
    std::vector<double> coeffs;  // BasisForm layout
    double sse = 0.0;
    double condition = 0.0;
};

SineFitResult fit_sine_sum(const std::vector<double>& x, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& w, int terms, double span) {
    // Amplitudes and phases are linear once the frequencies are fixed;
    // search a frequency grid, then polish the winner.
    const double wmin = 0.25 * 2.0 * M_PI / span;
    const double dx = span / std::max<std::size_t>(x.size(), 2);
    const double wmax = 0.8 * M_PI / dx;
    const int grid = terms == 2 ? 24 : 12;
    std::vector<double> wgrid(grid);
    for (int i = 0; i < grid; ++i) {
        wgrid[i] = wmin * std::pow(wmax / wmin, static_cast<double>(i) / (grid - 1));
    }

    std::vector<double> best_freqs;
    LinearFit best;
    best.sse = std::numeric_limits<double>::infinity();
    std::vector<double> freqs(terms);
    auto consider = [&](const std::vector<double>& f) {
        const LinearFit fit = weighted_least_squares(harmonic_design(x, f), y, w);
        if (fit.sse < best.sse) {
            best = fit;
            best_freqs = f;
        }
    };
    if (terms == 2) {
        for (int i = 0; i < grid; ++i) {
            for (int j = i + 1; j < grid; ++j) consider({wgrid[i], wgrid[j]});
        }
    } else {
        for (int i = 0; i < grid; ++i) {
            for (int j = i + 1; j < grid; ++j) {
                for (int k = j + 1; k < grid; ++k) consider({wgrid[i], wgrid[j], wgrid[k]});
            }
        }
    }

    // Coordinate polish on each frequency.
    for (int pass = 0; pass < 3; ++pass) {
        for (int t = 0; t < terms; ++t) {
            const double w0 = best_freqs[t];
            for (double factor : {0.9, 0.95, 0.98, 1.02, 1.05, 1.1}) {
                std::vector<double> f = best_freqs;
                f[t] = w0 * factor;
                consider(f);
            }
        }
    }

    SineFitResult out;
    out.sse = best.sse;
    out.condition = best.condition;
    for (int t = 0; t < terms; ++t) {
        const double p = best.coeffs(2 * t);      // sin amplitude
        const double q = best.coeffs(2 * t + 1);  // cos amplitude
        out.coeffs.push_back(std::hypot(p, q));
        out.coeffs.push_back(best_freqs[t]);
        out.coeffs.push_back(std::atan2(q, p));
    }
    return out;
}

SineFitResult fit_fourier(const std::vector<double>& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w, int harmonics, double span) {
    const double wmin = 0.2 * 2.0 * M_PI / span;
    const double dx = span / std::max<std::size_t>(x.size(), 2);
    const double wmax = 0.8 * M_PI / (dx * harmonics);
    LinearFit best;
    best.sse = std::numeric_limits<double>::infinity();
    double best_w = wmin;
    auto consider = [&](double base) {
        const LinearFit fit = weighted_least_squares(fourier_design(x, base, harmonics), y, w);
        if (fit.sse < best.sse) {
            best = fit;
            best_w = base;
        }
    };
    for (int i = 0; i < 256; ++i) {
        consider(wmin + (wmax - wmin) * i / 255.0);
    }
    for (int pass = 0; pass < 4; ++pass) {
        const double w0 = best_w;
        for (double factor : {0.97, 0.99, 1.01, 1.03}) consider(w0 * factor);
    }
    SineFitResult out;
    out.sse = best.sse;
    out.condition = best.condition;
    out.coeffs.push_back(best_w);
    for (long c = 0; c < best.coeffs.size(); ++c) out.coeffs.push_back(best.coeffs(c));
    return out;
}

struct Binned1D {
    std::vector<double> centers;
    std::vector<double> means;
    std::vector<long> counts;
    std::vector<int> underpopulated;
};

Binned1D bin_1d(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys, const InputDim& dim,
                int var0, int bins) {
    Binned1D out;
    std::vector<double> sums(bins, 0.0);
    std::vector<long> counts(bins, 0);
    const double width = (dim.upper - dim.lower) / bins;
    for (long r = 0; r < xs.rows(); ++r) {
        int k = static_cast<int>((xs(r, var0) - dim.lower) / width);
        k = std::clamp(k, 0, bins - 1);
        sums[k] += ys(r);
        counts[k] += 1;
    }
    for (int k = 0; k < bins; ++k) {
        if (counts[k] == 0) continue;
        out.centers.push_back(dim.lower + (k + 0.5) * width);
        out.means.push_back(sums[k] / counts[k]);
        out.counts.push_back(counts[k]);
        if (counts[k] < 20) out.underpopulated.push_back(k);
    }
    return out;
}

}  // namespace

ComponentFit fit_first_order(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys,
                             const InputSpace& space, int var, FormKind kind, int bins) {
    if (var < 1 || var > space.size()) {
        throw std::invalid_argument("fit_first_order: variable index out of range");
    }
    if (form_arity(kind) != 1) {
        throw std::invalid_argument("fit_first_order: form must consume one variable");
    }
    const double f0 = ys.mean();
    const Binned1D binned = bin_1d(xs, ys, space.dims[var - 1], var - 1, bins);
    const int n_bins = static_cast<int>(binned.centers.size());
    if (n_bins < form_coefficient_count(kind)) {
        throw std::invalid_argument("fit_first_order: only " + std::to_string(n_bins) +
                                    " populated bins for a " + form_kind_name(kind) + " fit");
    }

    Eigen::VectorXd target(n_bins), weights(n_bins);
    for (int k = 0; k < n_bins; ++k) {
        target(k) = binned.means[k] - f0;
        weights(k) = static_cast<double>(binned.counts[k]);
    }

    ComponentFit fit;
    fit.f0 = f0;
    fit.bin_center_1 = binned.centers;
    fit.bin_count = binned.counts;
    fit.underpopulated_bins = binned.underpopulated;
    for (int k = 0; k < n_bins; ++k) fit.conditional_mean.push_back(target(k));

    BasisForm form;
    form.label = "f" + std::to_string(var);
    form.kind = kind;
    form.vars = {var, 0};

    const double span = space.dims[var - 1].upper - space.dims[var - 1].lower;
    double sse = 0.0;
    switch (kind) {
        case FormKind::linear_1d:
        case FormKind::quadratic_1d:
        case FormKind::cubic_1d:
        case FormKind::octic_1d: {
            const int degree = form_coefficient_count(kind) - 1;
            const LinearFit lf =
                weighted_least_squares(poly_design_1d(binned.centers, degree), target, weights);
            form.coeffs.assign(lf.coeffs.data(), lf.coeffs.data() + lf.coeffs.size());
            fit.condition_estimate = lf.condition;
            sse = lf.sse;
            break;
        }
        case FormKind::sine_sum_2:
        case FormKind::sine_sum_3: {
            const SineFitResult sf = fit_sine_sum(binned.centers, target, weights,
                                                  kind == FormKind::sine_sum_2 ? 2 : 3, span);
            form.coeffs = sf.coeffs;
            fit.condition_estimate = sf.condition;
            sse = sf.sse;
            break;
        }
        case FormKind::fourier_2:
        case FormKind::fourier_4: {
            const SineFitResult sf = fit_fourier(binned.centers, target, weights,
                                                 kind == FormKind::fourier_2 ? 2 : 4, span);
            form.coeffs = sf.coeffs;
            fit.condition_estimate = sf.condition;
            sse = sf.sse;
            break;
        }
        default:
            throw std::invalid_argument("fit_first_order: unsupported form kind");
    }
    form.provenance = "fitted from binned conditional means";
    form.require_well_formed();
    fit.fitted = form;

    std::vector<double> x_probe(space.size(), 0.0);
    double wsum = 0.0, werr = 0.0;
    for (int k = 0; k < n_bins; ++k) {
        x_probe[var - 1] = binned.centers[k];
        const double yhat = eval_component(form, x_probe);
        fit.fitted_value.push_back(yhat);
        const double err = yhat - target(k);
        werr += weights(k) * err * err;
        wsum += weights(k);
    }
    fit.rms_residual = std::sqrt(werr / wsum);
    (void)sse;
    return fit;
}

ComponentFit fit_second_order(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys,
                              const InputSpace& space, int var_i, int var_j, FormKind kind,
                              int bins_per_axis) {
    if (var_i == var_j) throw std::invalid_argument("fit_second_order: needs two distinct vars");
    if (form_arity(kind) != 2) {
        throw std::invalid_argument("fit_second_order: form must consume two variables");
    }
    const InputDim& di = space.dims[var_i - 1];
    const InputDim& dj = space.dims[var_j - 1];
    const int nb = bins_per_axis;
    const double wi = (di.upper - di.lower) / nb;
    const double wj = (dj.upper - dj.lower) / nb;

    const double f0 = ys.mean();
    std::vector<double> cell_sum(nb * nb, 0.0);
    std::vector<long> cell_count(nb * nb, 0);
    for (long r = 0; r < xs.rows(); ++r) {
        int ki = std::clamp(static_cast<int>((xs(r, var_i - 1) - di.lower) / wi), 0, nb - 1);
        int kj = std::clamp(static_cast<int>((xs(r, var_j - 1) - dj.lower) / wj), 0, nb - 1);
        cell_sum[ki * nb + kj] += ys(r);
        cell_count[ki * nb + kj] += 1;
    }

    // Marginal means over the same grid, count weighted.
    std::vector<double> row_sum(nb, 0.0), col_sum(nb, 0.0);
    std::vector<long> row_count(nb, 0), col_count(nb, 0);
    for (int ki = 0; ki < nb; ++ki) {
        for (int kj = 0; kj < nb; ++kj) {
            row_sum[ki] += cell_sum[ki * nb + kj];
            row_count[ki] += cell_count[ki * nb + kj];
            col_sum[kj] += cell_sum[ki * nb + kj];
            col_count[kj] += cell_count[ki * nb + kj];
        }
    }

    ComponentFit fit;
    fit.f0 = f0;
    std::vector<double> cx, cy;
    std::vector<double> target_v;
    std::vector<double> weight_v;
    for (int ki = 0; ki < nb; ++ki) {
        for (int kj = 0; kj < nb; ++kj) {
            const long cnt = cell_count[ki * nb + kj];
            if (cnt == 0) continue;
            const double cell_mean = cell_sum[ki * nb + kj] / cnt;
            const double row_mean = row_sum[ki] / row_count[ki];
            const double col_mean = col_sum[kj] / col_count[kj];
            const double interaction = cell_mean - row_mean - col_mean + f0;
            cx.push_back(di.lower + (ki + 0.5) * wi);
            cy.push_back(dj.lower + (kj + 0.5) * wj);
            target_v.push_back(interaction);
            weight_v.push_back(static_cast<double>(cnt));
            fit.bin_count.push_back(cnt);
            if (cnt < 20) fit.underpopulated_bins.push_back(ki * nb + kj);
        }
    }
    const int n_cells = static_cast<int>(cx.size());
    if (n_cells < form_coefficient_count(kind)) {
        throw std::invalid_argument("fit_second_order: too few populated cells");
    }

    Eigen::VectorXd target(n_cells), weights(n_cells);
    for (int k = 0; k < n_cells; ++k) {
        target(k) = target_v[k];
        weights(k) = weight_v[k];
    }

    int degree = 3;
    if (kind == FormKind::bivariate_poly_4) degree = 4;
    if (kind == FormKind::bivariate_poly_5) degree = 5;
    const LinearFit lf = weighted_least_squares(bivariate_design(cx, cy, degree), target, weights);

    BasisForm form;
    form.label = "f" + std::to_string(var_i) + std::to_string(var_j);
    form.kind = kind;
    form.vars = {var_i, var_j};
    form.coeffs.assign(lf.coeffs.data(), lf.coeffs.data() + lf.coeffs.size());
    form.provenance = "fitted from grid-binned interaction means";
    form.require_well_formed();
    fit.fitted = form;
    fit.condition_estimate = lf.condition;
    fit.bin_center_1 = cx;
    fit.bin_center_2 = cy;
    fit.conditional_mean = target_v;

    std::vector<double> x_probe(space.size(), 0.0);
    double wsum = 0.0, werr = 0.0;
    for (int k = 0; k < n_cells; ++k) {
        x_probe[var_i - 1] = cx[k];
        x_probe[var_j - 1] = cy[k];
        const double yhat = eval_component(form, x_probe);
        fit.fitted_value.push_back(yhat);
        const double err = yhat - target(k);
        werr += weights(k) * err * err;
        wsum += weights(k);
    }
    fit.rms_residual = std::sqrt(werr / wsum);
    return fit;
}

void write_component_fit_csv(const std::string& path, const ComponentFit& fit,
                             const std::string& header_comment) {
    CsvWriter csv(path);
    if (!header_comment.empty()) csv.comment(header_comment);
    const bool two_d = !fit.bin_center_2.empty();
    if (two_d) {
        csv.row({"bin_center_1", "bin_center_2", "conditional_mean", "fitted_value"});
    } else {
        csv.row({"bin_center", "conditional_mean", "fitted_value"});
    }
    for (std::size_t k = 0; k < fit.bin_center_1.size(); ++k) {
        std::vector<std::string> row;
        row.push_back(format_double(fit.bin_center_1[k]));
        if (two_d) row.push_back(format_double(fit.bin_center_2[k]));
        row.push_back(format_double(fit.conditional_mean[k]));
        row.push_back(format_double(fit.fitted_value[k]));
        csv.row(row);
    }
}

}  // namespace porosol
