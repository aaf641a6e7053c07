#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wishart/mc.hpp"
#include "wishart/model.hpp"

namespace wishart {

/// beta = 1, 2, 4 ensembles; p is the exponent in prod (1 - 2 theta x_i)^{-p/2}.
enum class ZonalFamily { real, complex, quaternionic };
std::string to_string(ZonalFamily f);
ZonalFamily zonal_family_from_string(const std::string& s);
int family_power(ZonalFamily f);

inline constexpr int kMaxZonalOrder = 60;

/// Single-row polynomials Z_(k)(X), k = 0..max_k, read off
/// prod (1 - 2 theta x_i)^{-p/2} = sum_k Z_(k)(X) theta^k / (k! d_k) with
/// d_k = 1/(2k-1)!!, 1/(2^k k!), 1/((k+1)! 2^k) for p = 1, 2, 4.
struct ZonalSeries {
  std::vector<double> x;
  int max_k = 0;
  ZonalFamily family = ZonalFamily::real;
  std::vector<double> coefficients;
};

ZonalSeries zonal_row(const std::vector<double>& x, int max_k,
                      ZonalFamily family = ZonalFamily::real);

/// log d_k for the family.
double log_zonal_d(ZonalFamily f, int k);

/// Z_(k)(I_N) = Gamma(N/2 + k) 2^k / (Gamma(N/2) (2k-1)!!) for the real family.
double zonal_at_identity(int n, int k);

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;  ///< bound on the dropped terms k > max_k
};

/// (1 / 2 pi i) oint e^{Mt} prod (t - x_i y)^{-p/2} dt by residues at infinity:
/// sum_k Z_(k)(X) y^k M^{Np/2+k-1} / (2^k k! d_k Gamma(Np/2 + k)).
SeriesValue residue_series(const std::vector<double>& x, double y, double m, int max_k,
                           ZonalFamily family);

/// The same integral by trapezoidal quadrature on a circle around all x_i y.
/// N p / 2 must be an integer.
cplx residue_contour(const std::vector<double>& x, double y, double m, ZonalFamily family,
                     int nodes = 256);

/// Gamma(Np/2) M^{1-Np/2}: the Haar average of exp(-M y sum x_i |g_iN|^2) equals
/// this times the residue integral at -y.
double haar_prefactor(int n, double m, ZonalFamily family);

struct ZonalCheckReport {
  ZonalFamily family = ZonalFamily::real;
  bool has_contour = false;
  cplx contour;
  SeriesValue series;
  double rel_diff = 0.0;  ///< |contour - series| / |series|
  bool has_mc = false;
  McEstimate haar;
  double haar_predicted = 0.0;  ///< haar_prefactor * series at -y
  double haar_z = 0.0;          ///< |haar - predicted| / se
};

/// Contour vs series at (x, y) and, when `mc` is given, the O(N) Haar average
/// at y against the series at -y. The contour needs even N.
ZonalCheckReport zonal_identity_check(const std::vector<double>& x, double y, double m,
                                      int max_k, const std::optional<McConfig>& mc = {});

/// Complex or quaternionic version; Haar MC only for the complex family.
ZonalCheckReport unitary_symplectic_identity_check(ZonalFamily family,
                                                   const std::vector<double>& x, double y,
                                                   double m, int max_k,
                                                   const std::optional<McConfig>& mc = {});

}  // namespace wishart
