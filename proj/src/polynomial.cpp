#include "wishart/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace wishart {

Poly::Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {}

Poly Poly::monomial(int degree, cplx coeff) {
  std::vector<cplx> c(degree + 1, 0.0);
  c[degree] = coeff;
  return Poly(std::move(c));
}

int Poly::degree() const noexcept {
  for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) {
    if (c_[k] != cplx(0.0)) return k;
  }
  return -1;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly({0.0});
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Poly(std::move(d));
}

Poly Poly::divide_by_x() const {
  if (c_.empty()) return Poly({0.0});
  if (c_[0] != cplx(0.0)) throw std::domain_error("polynomial not divisible by x");
  if (c_.size() == 1) return Poly({0.0});
  return Poly(std::vector<cplx>(c_.begin() + 1, c_.end()));
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<cplx> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
  for (std::size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
  return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * cplx(-1.0); }

Poly Poly::operator*(const Poly& o) const {
  if (c_.empty() || o.c_.empty()) return Poly({0.0});
  std::vector<cplx> r(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  return Poly(std::move(r));
}

Poly Poly::operator*(cplx s) const {
  std::vector<cplx> r = c_;
  for (auto& v : r) v *= s;
  return Poly(std::move(r));
}

}  // namespace wishart
