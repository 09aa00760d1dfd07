#include "rcd/gp.hpp"

#include <cmath>
#include <string>

#include "rcd/error.hpp"

namespace rcd {

void KernelSpec::validate() const {
    if (length_scales.empty()) throw ValidationError("kernel: at least one length scale");
    for (double l : length_scales) {
        if (!(l > 0.0)) throw ValidationError("kernel: length scales must be positive");
    }
    if (!(noise_variance >= 0.0)) throw ValidationError("kernel: noise variance must be >= 0");
}

double GPModel::kernel_value(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    double q = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        const double d = (a[k] - b[k]) / kernel_.length_scales[static_cast<std::size_t>(k)];
        q += d * d;
    }
    return signal_variance_ * std::exp(-0.5 * q);
}

GPModel GPModel::fit(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys, KernelSpec kernel) {
    kernel.validate();
    const Eigen::Index n = xs.rows();
    const Eigen::Index d = xs.cols();
    if (n < 1) throw ValidationError("gp_fit: at least one training point required");
    if (ys.size() != n) throw ValidationError("gp_fit: xs/ys size mismatch");
    if (static_cast<std::size_t>(d) != kernel.length_scales.size()) {
        throw ValidationError("gp_fit: kernel dimension mismatch");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
            if (!(xs(i, k) >= 0.0 && xs(i, k) <= 1.0)) {
                throw ValidationError("gp_fit: inputs must be normalized to [0,1]");
            }
        }
    }

    GPModel m;
    m.kernel_ = kernel;
    m.xs_ = xs;
    m.y_mean_ = ys.mean();
    if (kernel.signal_variance > 0.0) {
        m.signal_variance_ = kernel.signal_variance;
    } else {
        double var = 0.0;
        if (n > 1) {
            var = (ys.array() - m.y_mean_).square().sum() / static_cast<double>(n - 1);
        }
        m.signal_variance_ = std::max(var, 1e-8);
    }

    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = m.kernel_value(xs.row(i).transpose(), xs.row(j).transpose());
            K(i, j) = v;
            K(j, i) = v;
        }
    }

    const Eigen::VectorXd centered = ys.array() - m.y_mean_;
    double jitter = 0.0;
    for (;;) {
        Eigen::MatrixXd Kn = K;
        Kn.diagonal().array() += kernel.noise_variance + jitter;
        m.llt_.compute(Kn);
        if (m.llt_.info() == Eigen::Success) break;
        jitter = (jitter == 0.0) ? 1e-12 : jitter * 10.0;
        if (jitter > 1e-4) {
            throw NumericalError("gp_fit: kernel matrix not positive definite at maximum jitter");
        }
    }
    m.jitter_ = jitter;
    m.alpha_ = m.llt_.solve(centered);
    return m;
}

GPModel::Prediction GPModel::predict(const Eigen::VectorXd& x) const {
    if (x.size() != xs_.cols()) throw ValidationError("gp_predict: dimension mismatch");
    const Eigen::Index n = xs_.rows();
    Eigen::VectorXd ks(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ks[i] = kernel_value(xs_.row(i).transpose(), x);
    }
    Prediction p;
    p.mean = y_mean_ + ks.dot(alpha_);
    const Eigen::VectorXd v = llt_.solve(ks);
    double var = signal_variance_ - ks.dot(v);
    if (var < 0.0) {
        if (var < -1e-9) {
            throw NumericalError("gp_predict: negative variance beyond round-off (" +
                                 std::to_string(var) + ")");
        }
        var = 0.0;
    }
    p.variance = var;
    return p;
}

} // namespace rcd
