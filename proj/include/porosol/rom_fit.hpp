#ifndef POROSOL_ROM_FIT_HPP
#define POROSOL_ROM_FIT_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "porosol/rom.hpp"
#include "porosol/sobol.hpp"

namespace porosol {

/// Component function recovered from sampled model outputs: binned
/// conditional means with the lower-order terms removed, then a typed-form
/// least-squares fit.
struct ComponentFit {
    BasisForm fitted;
    double f0 = 0.0;                    // sample mean removed before fitting
    std::vector<double> bin_center_1;   // per diagnostic row
    std::vector<double> bin_center_2;   // empty for 1-D fits
    std::vector<double> conditional_mean;
    std::vector<double> fitted_value;
    std::vector<long> bin_count;
    std::vector<int> underpopulated_bins;  // bins with fewer than 20 samples
    double rms_residual = 0.0;
    double condition_estimate = 0.0;
};

/// f_i estimate: conditional expectation of y in equal-width bins of
/// variable `var` (1-based), minus the sample mean, fitted with `kind`.
/// Throws std::invalid_argument when too few populated bins remain for the
/// requested form; ill-conditioning is reported via condition_estimate.
ComponentFit fit_first_order(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys,
                             const InputSpace& space, int var, FormKind kind, int bins = 32);

/// f_ij estimate on a bins x bins grid: cell mean minus the two marginal
/// means plus the sample mean (two-way interaction), fitted with a bivariate
/// form.
ComponentFit fit_second_order(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys,
                              const InputSpace& space, int var_i, int var_j, FormKind kind,
                              int bins_per_axis = 16);

/// Diagnostic CSV: bin_center,conditional_mean,fitted_value (two center
/// columns for 2-D fits).
void write_component_fit_csv(const std::string& path, const ComponentFit& fit,
                             const std::string& header_comment = {});

}  // namespace porosol

#endif
