#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "gns/gauss.hpp"
#include "gns/hermite.hpp"
#include "gns/partition.hpp"

namespace gns {

using ScalarField = std::function<double(const Vec&)>;

enum class JMethod { montecarlo, quadrature2d, hermite_series };

std::string to_string(JMethod m);

/// One evaluation of an operator at a point.
struct OperatorPoint {
  Vec x;
  double rho = 0.0;
  double value = 0.0;
};

/// Value of the stability functional with the method used and a quantified
/// error: Monte Carlo standard error, quadrature refinement delta, or series
/// tail bound.
struct StabilityResult {
  double value = 0.0;
  JMethod method = JMethod::quadrature2d;
  double error_estimate = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  int degree = 0;
  std::string to_json() const;
};

struct JOptions {
  long samples = 1000000;       // montecarlo
  std::uint64_t seed = 1;       // montecarlo
  int radial = 64;              // quadrature2d
  int angular = 48;             // quadrature2d (per sector)
  int degree = 24;              // hermite_series
};

/// T_rho f(x) = int f(x rho + y sqrt(1-rho^2)) dgamma_n(y) by quadrature over
/// the given grid; rho = +-1 degenerates to f(+-x).
double t_rho_apply(const ScalarField& f, double rho, const Vec& x,
                   const QuadratureGrid& grid);

/// T_rho applied to a sector-cell indicator, in closed form through the
/// Gaussian measure of a shifted wedge (bivariate normal reduction).
double t_rho_sector(const SectorCell& cell, double rho, const Vec& x);

/// L f(x) = -Laplacian f(x) + <x, grad f(x)> by central differences with step
/// h = 1e-4 max(1, |x|) unless overridden.
double l_apply(const ScalarField& f, const Vec& x, double step = 0.0);

/// d/drho T_rho f(x) evaluated from the integral form
///   (1-rho^2)^{-1/2} [ <x, int y f(..) dg>
///                      + rho (1-rho^2)^{-1/2} int (sum_i (1-y_i^2)) f(..) dg ].
/// Valid for all |rho| < 1 including rho = 0.
double dt_drho(const ScalarField& f, double rho, const Vec& x,
               const QuadratureGrid& grid);

/// Same derivative through the generator route rho^{-1} L T_rho f(x); rejects
/// rho = 0 (division by rho).  Cross-validation partner of dt_drho.
double dt_drho_l_route(const ScalarField& f, double rho, const Vec& x,
                       const QuadratureGrid& grid, double step = 0.0);

/// d/drho T_rho of a sector-cell indicator: the integral form with the wedge
/// moments (first moment and sum(1-y_i^2) mass) reduced to 1-D angular
/// quadrature of closed-form radial integrals.
double dt_drho_sector(const SectorCell& cell, double rho, const Vec& x);

/// rho^{-1} L T_rho 1_{A_i}(x) for a cell of a sector-reducible partition,
/// computed from the distributional gradient of the cone indicator: inward
/// normals weighted by Gaussian surface measures of the shifted boundary
/// rays, plus the volume term of the integral form.
double lt_rho_indicator(const ConicalPartition& p, int i, double rho, const Vec& x);

/// rho^{-1} L T_rho (1_{A_i} - 1_{A_j})(x), two independent routes:
/// `boundary` uses the surface-measure identity, `integral` the wedge-moment
/// integral form.  Both are returned for cross-checking.
struct LtDifference {
  double boundary = 0.0;
  double integral = 0.0;
};
LtDifference lt_rho_difference(const ConicalPartition& p, int i, int j, double rho,
                               const Vec& x);

/// int (sum_i (1 - y_i^2)) 1_A(x rho + y sqrt(1-rho^2)) dgamma(y) for a
/// sector cell (the volume term of the derivative identity).
double volume_term_sector(const SectorCell& cell, double rho, const Vec& x);

/// Noise stability J = sum_i int 1_{A_i} T_rho 1_{A_i} dgamma_n.
StabilityResult noise_stability_J(const ConicalPartition& p, double rho, JMethod method,
                                  const JOptions& opts = {});

/// Cell coefficients int_{A_i} sqrt(l!) h_l dgamma for |l| <= max_degree;
/// exact quadrature path for sector-reducible partitions.
HermiteSeries hermite_coefficients_of_cell(const ConicalPartition& p, int i,
                                           int max_degree);

/// Monte Carlo coefficient path for general cones; error_mass is a standard
/// error aggregated over coefficients.
HermiteSeries hermite_coefficients_of_cell_mc(const ConicalPartition& p, int i,
                                              int max_degree, RandomSource& rng,
                                              long samples, double* error_mass = nullptr);

/// First-variation functional psi_rho = (d/drho) J via the spectral series
/// sum_i sum_l |l| rho^{|l|-1} a_{i,l}^2 truncated at `degree`, with the
/// geometric tail bound reported; converged is false when the bound exceeds
/// the tolerance.
struct PsiResult {
  double value = 0.0;
  double tail_bound = 0.0;
  int degree = 0;
  bool converged = true;
};
PsiResult psi_rho(const ConicalPartition& p, double rho, int degree = 24,
                  double tail_tolerance = 1e-9);

/// psi_rho of a k-tuple of L2 functions given by their Hermite coefficient
/// tables (rows of `coefficients` follow `index_set`).  Supports mixtures of
/// partition indicator tuples.
double psi_rho_from_coefficients(const std::vector<Vec>& coefficients,
                                 const std::vector<MultiIndex>& index_set, double rho);

/// Series tail bound k rho^D (D+1 - D rho) / (1-rho)^2 used by psi_rho.
double psi_series_tail_bound(int k, double rho, int degree);

}  // namespace gns
