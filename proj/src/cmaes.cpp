#include "wellopt/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wellopt/bounds.hpp"
#include "wellopt/errors.hpp"

namespace wellopt {

CmaesParams cmaes_params(int dim, int lambda, int mu) {
    if (dim < 1) throw std::invalid_argument("cmaes_params: dimension must be >= 1");
    CmaesParams p;
    p.dim = dim;
    const double n = dim;
    p.lambda = lambda > 0 ? lambda : 4 + static_cast<int>(std::floor(3.0 * std::log(n)));
    if (p.lambda < 2) throw std::invalid_argument("cmaes_params: lambda must be >= 2");
    p.mu = mu > 0 ? mu : p.lambda / 2;
    if (p.mu < 1 || p.mu > p.lambda)
        throw std::invalid_argument("cmaes_params: mu must be in [1, lambda]");

    // Log-superlinear recombination weights normalized to sum 1:
    // w_i = (ln(mu+1) - ln i) / (mu ln(mu+1) - ln(mu!)).
    double log_factorial = 0.0;
    for (int i = 1; i <= p.mu; ++i) log_factorial += std::log(static_cast<double>(i));
    const double denom = p.mu * std::log(p.mu + 1.0) - log_factorial;
    p.weights.resize(p.mu);
    for (int i = 1; i <= p.mu; ++i)
        p.weights[i - 1] = (std::log(p.mu + 1.0) - std::log(static_cast<double>(i))) / denom;

    double sum_sq = 0.0;
    for (int i = 0; i < p.mu; ++i) sum_sq += p.weights[i] * p.weights[i];
    p.mu_eff = 1.0 / sum_sq;

    p.c_c = 4.0 / (n + 4.0);
    p.c_sigma = (p.mu_eff + 2.0) / (n + p.mu_eff + 3.0);
    p.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((p.mu_eff - 1.0) / (n + 1.0)) - 1.0) + p.c_sigma;
    p.mu_cov = p.mu_eff;
    const double sqrt2 = std::sqrt(2.0);
    p.c_cov = (1.0 / p.mu_cov) * 2.0 / ((n + sqrt2) * (n + sqrt2)) +
              (1.0 - 1.0 / p.mu_cov) *
                  std::min(1.0, (2.0 * p.mu_eff - 1.0) / ((n + 2.0) * (n + 2.0) + p.mu_eff));
    p.chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
    return p;
}

CmaesState cmaes_init(const CmaesParams& params, const std::vector<double>& m0,
                      double sigma0) {
    if (static_cast<int>(m0.size()) != params.dim)
        throw std::invalid_argument("cmaes_init: mean dimension mismatch");
    if (sigma0 < 0) throw std::invalid_argument("cmaes_init: sigma0 must be >= 0");
    CmaesState s;
    s.params = params;
    s.mean = Eigen::Map<const Eigen::VectorXd>(m0.data(), params.dim);
    s.sigma = sigma0;
    s.C = Eigen::MatrixXd::Identity(params.dim, params.dim);
    s.p_c = Eigen::VectorXd::Zero(params.dim);
    s.p_sigma = Eigen::VectorXd::Zero(params.dim);
    return s;
}

namespace {

struct Decomposition {
    Eigen::MatrixXd B;
    Eigen::VectorXd d;  // sqrt of eigenvalues
};

Decomposition decompose_spd(const Eigen::MatrixXd& C, int iteration) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    if (eig.info() != Eigen::Success)
        throw NumericError("covariance eigendecomposition failed at iteration " +
                           std::to_string(iteration));
    const Eigen::VectorXd& vals = eig.eigenvalues();
    if (vals.minCoeff() <= 0.0)
        throw NumericError("covariance lost positive definiteness at iteration " +
                           std::to_string(iteration) + ": min eigenvalue " +
                           std::to_string(vals.minCoeff()));
    return {eig.eigenvectors(), vals.cwiseSqrt()};
}

}  // namespace

Eigen::MatrixXd cmaes_sample(const CmaesState& s, Rng& rng) {
    const auto dec = decompose_spd(s.C, s.iteration);
    const int n = s.params.dim;
    Eigen::MatrixXd samples(n, s.params.lambda);
    Eigen::VectorXd z(n);
    for (int i = 0; i < s.params.lambda; ++i) {
        for (int j = 0; j < n; ++j) z[j] = rng.normal();
        samples.col(i) = s.mean + s.sigma * (dec.B * (dec.d.asDiagonal() * z));
    }
    return samples;
}

RepairedPoint repair_point(const std::vector<double>& x) {
    RepairedPoint r;
    r.repaired = clamp_unit(x);
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - r.repaired[j];
        r.shift_sq += d * d;
    }
    return r;
}

double penalized_fitness(double value_at_repaired, double shift_sq, double alpha) {
    return value_at_repaired - alpha * shift_sq;
}

void cmaes_update(CmaesState& s, const Eigen::MatrixXd& samples,
                  const std::vector<double>& fitness) {
    const CmaesParams& p = s.params;
    if (samples.rows() != p.dim || samples.cols() != p.lambda)
        throw std::invalid_argument("cmaes_update: sample matrix shape mismatch");
    if (static_cast<int>(fitness.size()) != p.lambda)
        throw std::invalid_argument("cmaes_update: fitness size mismatch");
    for (double f : fitness)
        if (!std::isfinite(f))
            throw std::invalid_argument("cmaes_update: non-finite fitness in ranked input");

    // Rank maximization-style; stable so ties keep sampling order.
    std::vector<int> order(p.lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fitness[a] > fitness[b]; });

    const Eigen::VectorXd mean_old = s.mean;
    const double sigma_old = s.sigma;

    Eigen::VectorXd mean_new = Eigen::VectorXd::Zero(p.dim);
    for (int i = 0; i < p.mu; ++i) mean_new += p.weights[i] * samples.col(order[i]);

    // Needed for the conjugate path before C changes.
    const auto dec = decompose_spd(s.C, s.iteration);

    const Eigen::VectorXd mean_shift = (mean_new - mean_old) / sigma_old;

    s.p_c = (1.0 - p.c_c) * s.p_c +
            std::sqrt(p.c_c * (2.0 - p.c_c) * p.mu_eff) * mean_shift;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(p.dim, p.dim);
    for (int i = 0; i < p.mu; ++i) {
        const Eigen::VectorXd y = (samples.col(order[i]) - mean_old) / sigma_old;
        rank_mu.noalias() += p.weights[i] * (y * y.transpose());
    }
    s.C = (1.0 - p.c_cov) * s.C + (p.c_cov / p.mu_cov) * (s.p_c * s.p_c.transpose()) +
          p.c_cov * (1.0 - 1.0 / p.mu_cov) * rank_mu;
    s.C = 0.5 * (s.C + s.C.transpose()).eval();  // keep exactly symmetric

    // C^{-1/2} (m' - m)/sigma through the pre-update eigenbasis.
    const Eigen::VectorXd whitened =
        dec.B * dec.d.cwiseInverse().asDiagonal() * (dec.B.transpose() * mean_shift);
    s.p_sigma = (1.0 - p.c_sigma) * s.p_sigma +
                std::sqrt(p.c_sigma * (2.0 - p.c_sigma) * p.mu_eff) * whitened;

    s.sigma = sigma_old *
              std::exp((p.c_sigma / p.d_sigma) * (s.p_sigma.norm() / p.chi_n - 1.0));
    s.mean = mean_new;
    ++s.iteration;
}

}  // namespace wellopt
