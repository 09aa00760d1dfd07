#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rcd {

// Squared-exponential kernel with one length scale per input dimension.
// signal_variance <= 0 requests "auto": the sample variance of the targets
// (floored at 1e-8). No hyperparameter optimization happens anywhere; these
// are fixed small-data defaults.
struct KernelSpec {
    std::vector<double> length_scales = {0.2, 0.2};
    double signal_variance = 0.0; // <= 0: use target sample variance
    double noise_variance = 1e-4;

    void validate() const;
};

// Exact GP regression on normalized inputs. Targets are centered on their
// mean internally; predictions revert to that mean far from the data.
class GPModel {
public:
    struct Prediction {
        double mean = 0.0;
        double variance = 0.0;
    };

    // xs: n points in [0,1]^d (rows). Factorization jitter escalates from
    // 1e-12 to at most 1e-4 before giving up with a NumericalError.
    static GPModel fit(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys, KernelSpec kernel);

    Prediction predict(const Eigen::VectorXd& x) const;

    Eigen::Index size() const { return xs_.rows(); }
    const KernelSpec& kernel() const { return kernel_; }
    double jitter() const { return jitter_; }

private:
    GPModel() = default;

    double kernel_value(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

    Eigen::MatrixXd xs_;
    Eigen::VectorXd alpha_;    // (K + noise I)^-1 (y - mean)
    Eigen::LLT<Eigen::MatrixXd> llt_;
    KernelSpec kernel_;
    double y_mean_ = 0.0;
    double signal_variance_ = 1.0; // resolved (auto or explicit)
    double jitter_ = 0.0;
};

} // namespace rcd
