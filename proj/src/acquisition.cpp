#include "rcd/acquisition.hpp"

#include <cmath>
#include <limits>

#include "rcd/error.hpp"
#include "rcd/rng.hpp"

namespace rcd {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }

double normal_pdf(double z) { return 0.39894228040143267794 * std::exp(-0.5 * z * z); }

Eigen::Vector2d clamp_to(const Eigen::Vector2d& x, const NumericBox& box) {
    Eigen::Vector2d y;
    y[0] = std::min(std::max(x[0], box.lo[0]), box.hi[0]);
    y[1] = std::min(std::max(x[1], box.lo[1]), box.hi[1]);
    return y;
}

// EI of the surrogate's posterior at a clamped point.
double ei_at(const GPModel& model, const Eigen::Vector2d& x, double best, double xi) {
    const GPModel::Prediction p = model.predict(x);
    return expected_improvement(p.mean, p.variance, best, xi);
}

// Central finite differences, evaluation points clamped into the box.
Eigen::Vector2d fd_gradient(const GPModel& model, const Eigen::Vector2d& x, const NumericBox& box,
                            double best, double xi) {
    constexpr double h = 1e-4;
    Eigen::Vector2d g;
    for (int k = 0; k < 2; ++k) {
        Eigen::Vector2d xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        xp = clamp_to(xp, box);
        xm = clamp_to(xm, box);
        const double denom = xp[k] - xm[k];
        g[k] = denom > 0.0 ? (ei_at(model, xp, best, xi) - ei_at(model, xm, best, xi)) / denom : 0.0;
    }
    return g;
}

// Polak-Ribiere conjugate-gradient ascent with backtracking line search.
std::pair<Eigen::Vector2d, double> cg_ascent(const GPModel& model, Eigen::Vector2d x,
                                             const NumericBox& box, double best, double xi,
                                             int max_iter) {
    double fx = ei_at(model, x, best, xi);
    Eigen::Vector2d g = fd_gradient(model, x, box, best, xi);
    Eigen::Vector2d dir = g;
    for (int it = 0; it < max_iter; ++it) {
        if (g.norm() < 1e-10) break;
        if (dir.dot(g) <= 0.0) dir = g; // restart on a non-ascent direction
        double step = 0.1;
        Eigen::Vector2d x_new = x;
        double f_new = fx;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls) {
            const Eigen::Vector2d cand = clamp_to(x + step * dir, box);
            const double f_cand = ei_at(model, cand, best, xi);
            if (f_cand > fx + 1e-12) {
                x_new = cand;
                f_new = f_cand;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
        // Greedy expansion while the step keeps paying off.
        for (int ex = 0; ex < 6; ++ex) {
            const Eigen::Vector2d cand = clamp_to(x + 2.0 * step * dir, box);
            const double f_cand = ei_at(model, cand, best, xi);
            if (f_cand <= f_new) break;
            step *= 2.0;
            x_new = cand;
            f_new = f_cand;
        }
        if ((x_new - x).norm() < 1e-10) break;
        const Eigen::Vector2d g_new = fd_gradient(model, x_new, box, best, xi);
        const double denom = g.squaredNorm();
        const double beta = denom > 0.0 ? std::max(0.0, g_new.dot(g_new - g) / denom) : 0.0;
        dir = g_new + beta * dir;
        x = x_new;
        fx = f_new;
        g = g_new;
    }
    return {x, fx};
}

} // namespace

double expected_improvement(double mean, double variance, double best, double xi) {
    if (!(variance >= 0.0)) throw ValidationError("expected_improvement: variance must be >= 0");
    const double target = best - xi;
    if (variance == 0.0) return std::max(target - mean, 0.0);
    const double sigma = std::sqrt(variance);
    const double z = (target - mean) / sigma;
    const double ei = (target - mean) * normal_cdf(z) + sigma * normal_pdf(z);
    return std::max(ei, 0.0);
}

Proposal maximize_acquisition(const std::vector<ArchSurrogate>& surrogates, const NumericBox& box,
                              double incumbent_best, const AcquisitionSettings& settings,
                              std::uint64_t seed) {
    if (surrogates.empty()) throw ValidationError("maximize_acquisition: no architecture levels");
    if (!(box.hi[0] > box.lo[0]) || !(box.hi[1] > box.lo[1])) {
        throw ValidationError("maximize_acquisition: degenerate box");
    }

    // A level with no observations yet is proposed outright (its EI is
    // treated as infinite); the first such level in declaration order wins.
    for (std::size_t li = 0; li < surrogates.size(); ++li) {
        const ArchSurrogate& s = surrogates[li];
        if (s.model == nullptr || s.model->size() == 0) {
            SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(li)));
            Proposal p;
            p.point = {rng.uniform(box.lo[0], box.hi[0]), rng.uniform(box.lo[1], box.hi[1])};
            p.arch = s.arch;
            p.ei = std::numeric_limits<double>::infinity();
            return p;
        }
    }

    Proposal best_proposal;
    double best_ei = -1.0;
    for (std::size_t li = 0; li < surrogates.size(); ++li) {
        const ArchSurrogate& s = surrogates[li];
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(li)));
        for (int r = 0; r < settings.restarts; ++r) {
            const Eigen::Vector2d start{rng.uniform(box.lo[0], box.hi[0]),
                                        rng.uniform(box.lo[1], box.hi[1])};
            auto [x, ei] = cg_ascent(*s.model, start, box, incumbent_best, settings.xi,
                                     settings.max_iter);
            if (ei > best_ei) {
                best_ei = ei;
                best_proposal.point = x;
                best_proposal.arch = s.arch;
                best_proposal.ei = ei;
            }
        }
    }
    return best_proposal;
}

} // namespace rcd
