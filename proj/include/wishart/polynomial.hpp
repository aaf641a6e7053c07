#pragma once

#include <complex>
#include <vector>

namespace wishart {

/// Dense polynomial in the monomial basis with complex coefficients;
/// coeffs()[k] multiplies x^k.
class Poly {
 public:
  using cplx = std::complex<double>;

  Poly() = default;
  explicit Poly(std::vector<cplx> coeffs);

  static Poly monomial(int degree, cplx coeff = 1.0);
  static Poly constant(cplx c) { return Poly({c}); }

  const std::vector<cplx>& coeffs() const noexcept { return c_; }
  cplx coeff(int k) const noexcept {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : cplx(0.0);
  }
  /// Index of the highest non-zero coefficient, -1 for the zero polynomial.
  int degree() const noexcept;

  template <typename T>
  auto operator()(T x) const {
    using R = decltype(cplx() * x);
    R acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly derivative() const;
  /// Exact division by x; requires a zero constant term.
  Poly divide_by_x() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(cplx s) const;

 private:
  std::vector<cplx> c_;
};

}  // namespace wishart
