#pragma once

#include <vector>

#include "wishart/model.hpp"
#include "wishart/polynomial.hpp"

namespace wishart {

inline constexpr int kMaxLaguerreDegree = 64;

/// Monic Laguerre polynomials orthogonal for w_0(x) = x^{M-N} e^{-Mx}:
/// L_{n+1} = (x - a_n) L_n - b_n L_{n-1},
/// a_n = (2n + M - N + 1)/M, b_n = n (n + M - N)/M^2.
class LaguerreBasis {
 public:
  static LaguerreBasis build(const ModelParams& p, int max_degree);

  const ModelParams& params() const noexcept { return params_; }
  int max_degree() const noexcept { return max_degree_; }
  double a(int n) const { return a_.at(n); }
  double b(int n) const { return b_.at(n); }
  /// log h_{n,0}, h_{n,0} = n! Gamma(n + M - N + 1) / M^{2n + M - N + 1}.
  double log_norm(int n) const { return log_h_.at(n); }
  double norm(int n) const;

  /// L_0(x) .. L_{count-1}(x).
  template <typename T>
  void eval_all(T x, int count, std::vector<T>& out) const {
    check_degree(count - 1);
    out.assign(count, T(0.0));
    out[0] = T(1.0);
    if (count > 1) out[1] = x - a_[0];
    for (int n = 1; n + 1 < count; ++n) {
      out[n + 1] = (x - a_[n]) * out[n] - b_[n] * out[n - 1];
    }
  }

  /// Values and first derivatives of L_0 .. L_{count-1}.
  template <typename T>
  void eval_all_d(T x, int count, std::vector<T>& val, std::vector<T>& der) const {
    eval_all(x, count, val);
    der.assign(count, T(0.0));
    if (count > 1) der[1] = T(1.0);
    for (int n = 1; n + 1 < count; ++n) {
      der[n + 1] = val[n] + (x - a_[n]) * der[n] - b_[n] * der[n - 1];
    }
  }

  template <typename T>
  T eval(int n, T x) const {
    std::vector<T> v;
    eval_all(x, n + 1, v);
    return v[n];
  }

  /// Monomial coefficients of L_n.
  Poly monomial_form(int n) const;
  /// Coefficients c_k with f = sum_k c_k L_k (deg f <= max_degree).
  std::vector<cplx> expand(const Poly& f) const;

 private:
  void check_degree(int n) const;

  ModelParams params_{2, 3, 0.0};
  int max_degree_ = 0;
  std::vector<double> a_, b_, log_h_;
};

/// Evaluates a Laguerre-basis expansion sum_k c_k L_k(x).
cplx eval_expansion(const LaguerreBasis& basis, const std::vector<cplx>& c,
                    double x);

/// Numerator L_N(x) L_{N-1}(y) - L_N(y) L_{N-1}(x).
double cd_numerator(const LaguerreBasis& basis, double x, double y);

/// K_2(x, y) = (y (t - tt y) / (x (t - tt x)))^{1/2} w_0^{1/2}(x) w_0^{1/2}(y)
///             * CD(x, y) / h_{N-1,0},
/// evaluated as w(x) * (w_0(y) / w(y)) * CD / h_{N-1,0}. Off the real t axis
/// this matches the principal root of the ratio.
cplx cd_kernel_k2(const LaguerreBasis& basis, cplx t, double x, double y);

}  // namespace wishart
