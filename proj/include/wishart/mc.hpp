#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "wishart/model.hpp"

namespace wishart {

/// Monte-Carlo run settings. The ensemble fields are kept separate from
/// ModelParams so the oracles also cover odd N and M <= N.
struct McConfig {
  std::uint64_t seed = 1;
  long n_samples = 100000;
  int n = 2;
  int m = 4;
  double tau = 0.0;

  static McConfig from(const ModelParams& p, std::uint64_t seed, long n_samples);
  /// Throws ConfigError unless n, m, n_samples >= 1 and tau >= 0.
  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;  ///< standard error of the mean
  long n = 0;
};

/// splitmix64 finaliser; used to derive substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic Gaussian stream: mt19937_64 seeded with splitmix64(seed ^ index)
/// and the Marsaglia polar method, so draws do not depend on the standard
/// library's distribution implementations.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t index);
  double normal();
  double uniform();  ///< in [0, 1), 53 random bits
  std::mt19937_64& engine() noexcept { return eng_; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Samples per substream. Results do not depend on the thread count.
inline constexpr long kMcChunk = 4096;

/// lambda_max of S = X X^T / M per sample, X with column covariance
/// diag(1 + tau, 1, ..., 1).
std::vector<double> sample_wishart_max_eig(const McConfig& cfg);
/// All N eigenvalues per sample, concatenated.
std::vector<double> sample_wishart_eigs(const McConfig& cfg);

/// Haar orthogonal / unitary matrix by QR of a Gaussian matrix with the
/// diagonal of R made positive.
Eigen::MatrixXd haar_orthogonal(GaussianStream& g, int n);
Eigen::MatrixXcd haar_unitary(GaussianStream& g, int n);

/// Mean of exp(tau_tilde M sum lambda_j u_j^2) over uniform u on S^{N-1},
/// times prod e^{-M lambda_j / 2}. Uses cfg.m and cfg.tau; N = lambdas.size().
McEstimate sphere_integral_oracle(const McConfig& cfg, const std::vector<double>& lambdas);

/// oint e^{Mt} prod (t - tau_tilde lambda_j)^{-1/2} dt times prod e^{-M lambda_j / 2}.
/// The contour must enclose every tau_tilde lambda_j; N must be even.
cplx contour_integral_I(const ModelParams& p, const std::vector<double>& lambdas,
                        const ContourSpec& contour);

/// Mean of exp(-M y sum x_i g_{iN}^2) over Haar g in O(N), N = x.size().
McEstimate haar_orthogonal_integral(const McConfig& cfg, const std::vector<double>& x,
                                    double y);
/// Mean of exp(-M y sum x_i |g_{iN}|^2) over Haar g in U(N).
McEstimate haar_unitary_integral(const McConfig& cfg, const std::vector<double>& x,
                                 double y);

/// Fraction of samples below z with its binomial standard error.
McEstimate empirical_cdf(const std::vector<double>& samples, double z);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<long> counts;
  long total = 0;  ///< all samples, including those outside [lo, hi)
  double width() const { return (hi - lo) / static_cast<double>(counts.size()); }
};
Histogram histogram(const std::vector<double>& samples, double lo, double hi, int bins);

}  // namespace wishart
