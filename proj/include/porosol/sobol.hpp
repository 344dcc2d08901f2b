#ifndef POROSOL_SOBOL_HPP
#define POROSOL_SOBOL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace porosol {

enum class DimScale { linear, log10 };

struct InputDim {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    DimScale scale = DimScale::linear;
};

/// Rectangular input domain. log10-scaled dimensions sample the exponent
/// uniformly between log10(lower) and log10(upper).
struct InputSpace {
    std::vector<InputDim> dims;

    int size() const { return static_cast<int>(dims.size()); }
    void require_valid() const;
    double map_unit(int dim, double unit_value) const;
    bool contains(const std::vector<double>& x) const;
};

enum class DesignGenerator { sobol_sequence, pseudo_random };

/// Paired-matrix sampling design: base matrices A and B plus the column
/// substitutions A_B^(i) (A with column i taken from B) and B_A^(i).
/// Model evaluations over the whole design: N (2n + 2).
struct SampleDesign {
    InputSpace space;
    int base_count = 0;
    std::uint64_t seed = 0;
    DesignGenerator generator = DesignGenerator::sobol_sequence;
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    std::vector<Eigen::MatrixXd> a_cross;  // A_B^(i)
    std::vector<Eigen::MatrixXd> b_cross;  // B_A^(i)

    long total_evaluations() const {
        return static_cast<long>(base_count) * (2L * space.size() + 2L);
    }
};

SampleDesign design(const InputSpace& space, int base_count, std::uint64_t seed,
                    DesignGenerator generator = DesignGenerator::sobol_sequence);

/// Model outputs evaluated over a design, one column per output component.
struct DesignOutputs {
    Eigen::MatrixXd on_a;
    Eigen::MatrixXd on_b;
    std::vector<Eigen::MatrixXd> on_a_cross;
    std::vector<Eigen::MatrixXd> on_b_cross;

    int n_outputs() const { return static_cast<int>(on_a.cols()); }
};

using VectorModel = std::function<std::vector<double>(const std::vector<double>&)>;
using ScalarModel = std::function<double(const std::vector<double>&)>;

/// Evaluates the model at every design point. The model must be pure with
/// respect to its input point; rows are distributed over `workers` threads
/// and results land in fixed positions, so the outcome does not depend on
/// scheduling. Throws if any output is non-finite.
DesignOutputs evaluate_design(const SampleDesign& d, const VectorModel& model, int n_outputs,
                              int workers = 1);
DesignOutputs evaluate_design(const SampleDesign& d, const ScalarModel& model, int workers = 1);

struct NonFiniteOutputError : std::runtime_error {
    long sample_index;
    explicit NonFiniteOutputError(long index)
        : std::runtime_error("non-finite model output at sample " + std::to_string(index)),
          sample_index(index) {}
};

struct ZeroVarianceError : std::runtime_error {
    ZeroVarianceError() : std::runtime_error("zero model variance: Sobol indices undefined") {}
};

/// Arithmetic mean of the outputs on A (compensated summation).
/// Throws NonFiniteOutputError with the offending index.
double estimate_mean(const Eigen::VectorXd& outputs_on_a);

/// (1/N) sum f^2 - mean^2.
double estimate_variance(const Eigen::VectorXd& outputs_on_a);

/// S_i from the paired products f(A) f(B_A^(i)); S_ij from the
/// two-column-substitution products f(A_B^(i)) f(B_A^(j)). `output` selects
/// the output component. Both throw ZeroVarianceError when the total
/// variance vanishes.
double first_order_index(const DesignOutputs& outputs, int dim_i, int output = 0);
double second_order_index(const DesignOutputs& outputs, int dim_i, int dim_j, int output = 0);

struct IndexEstimate {
    std::string name;        // "S3", "S38", ...
    int order = 1;
    int dim_i = 0;           // 1-based
    int dim_j = 0;           // 0 for first order
    double raw = 0.0;
    double boot_stderr = 0.0;
    double noise_bound = 0.0;  // epsilon: 3 x bootstrap stderr

    /// Raw estimate clamped to [-eps, 1+eps] for display; the raw value is
    /// always preserved alongside.
    double display() const;
};

struct SobolResult {
    double f0_hat = 0.0;
    double total_variance = 0.0;
    int sample_count = 0;
    std::vector<IndexEstimate> first_order;
    std::vector<IndexEstimate> second_order;

    const IndexEstimate* find(const std::string& name) const;
    double displayed_index_sum() const;
};

/// Full analysis of one output component: mean, variance, all first- and
/// second-order indices with bootstrap error bars (resampling the N design
/// rows jointly). Deterministic for fixed seeds.
SobolResult analyze(const SampleDesign& d, const DesignOutputs& outputs, int output = 0,
                    int bootstrap_resamples = 200, std::uint64_t bootstrap_seed = 2027);

struct ReportRow {
    std::string name;
    int order = 1;
    double estimate = 0.0;
    double boot_stderr = 0.0;
};

struct IndexReport {
    double threshold = 0.0;
    std::vector<ReportRow> rows;  // display >= threshold, sorted descending
    double displayed_sum = 0.0;
};

IndexReport index_report(const SobolResult& result, double threshold);

/// Design/outputs and result CSV schemas.
void write_design_outputs_csv(const std::string& path, const SampleDesign& d,
                              const DesignOutputs& outputs, int output = 0,
                              const std::string& header_comment = {});
void write_result_csv(const std::string& path, const SobolResult& result,
                      const std::string& header_comment = {});

}  // namespace porosol

#endif
