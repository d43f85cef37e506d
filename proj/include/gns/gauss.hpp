#pragma once

#include <utility>
#include <vector>

#include "gns/common.hpp"
#include "gns/rng.hpp"

namespace gns {

/// Correlation parameter rho in [-1, 1].
struct CorrelationParam {
  double rho;
  explicit CorrelationParam(double r) : rho(r) {
    if (!(r >= -1.0 && r <= 1.0)) throw std::invalid_argument("rho outside [-1,1]");
  }
};

/// Standard normal density and cdf.
double normal_pdf(double x);
double normal_cdf(double x);

/// P(U >= h, V >= k) for standard bivariate normal with correlation r,
/// evaluated by quadrature of the classic single-integral reduction.
double bivariate_normal_upper(double h, double k, double r);

// --- quadrature rules ------------------------------------------------------

/// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int m, double a, double b, Vec& nodes, Vec& weights);

/// Cached Gauss-Legendre rule on [0, 1]; callers rescale affinely.
const std::pair<Vec, Vec>& gauss_legendre_unit(int m);

/// Gauss-Laguerre nodes/weights for weight e^{-u} on [0, inf).
void gauss_laguerre(int m, Vec& nodes, Vec& weights);

/// Nodes/weights integrating against gamma_1 (standard normal) exactly for
/// polynomials of degree <= 2m-1.
void gauss_hermite_gamma(int m, Vec& nodes, Vec& weights);

enum class GridScheme { tensor_gauss_hermite, polar_2d, adaptive_box };

/// Concrete node/weight list approximating integration against gamma_n.
struct QuadratureGrid {
  int dimension = 0;
  GridScheme scheme = GridScheme::tensor_gauss_hermite;
  std::vector<Vec> points;
  Vec weights;

  /// Tensor Gauss-Hermite grid for gamma_n with m nodes per axis.
  static QuadratureGrid tensor(int n, int m);

  /// 2-D grid in polar form: Gauss-Laguerre in u = r^2/2 (radial), uniform
  /// periodic nodes in angle.  Weights sum to 1.
  static QuadratureGrid polar2d(int radial, int angular);

  double integrate(const std::function<double(const Vec&)>& f) const;
};

// --- gaussian sampling and measures ----------------------------------------

/// (X, Y) jointly Gaussian with E[X_i Y_j] = rho 1{i=j}: Y = rho X + sqrt(1-rho^2) Z.
std::pair<Vec, Vec> sample_correlated_pair(const CorrelationParam& rho, int n,
                                           RandomSource& rng);

/// gamma_2 measure of the planar sector between the two angles.
double gaussian_measure_sector(double angle_lo, double angle_hi);

/// Codimension-1 affine piece through the origin: a full hyperplane
/// {<x,normal> = 0} or the half-hyperplane {<x,normal> = 0, <x,edge_dir> >= 0}.
struct AffinePiece {
  enum Kind { hyperplane, half_hyperplane } kind;
  Vec normal;    // unit
  Vec edge_dir;  // unit, orthogonal to normal (half_hyperplane only)

  static AffinePiece make_hyperplane(Vec normal);
  static AffinePiece make_half_hyperplane(Vec normal, Vec edge_dir);
};

/// Gaussian surface measure gamma_n(delta_{(piece - shift)/scale}) in closed
/// form: 1-D density at the plane offset times the Gaussian mass of the
/// footprint.
double gaussian_surface_measure_shifted(const AffinePiece& piece, const Vec& shift,
                                        double scale);

// --- gaussian tail moment bounds -------------------------------------------

/// Which region the low-degree absolute-moment integral runs over.
enum class TailRegion { slab, ball_complement };

/// lhs: integral over the region ([-eta,eta] x [t,inf) x R^{n-2}, or the
/// complement of B(0,t)) of sum_{|l| <= 3} prod |y_i|^{l_i} dgamma_n,
/// computed by quadrature.  rhs: the closed tail bound
/// 3000 n^3 eta (t^2+2) e^{-t^2/2}  (slab), or
/// 100 (n+2)! (t^{n+1}+1) e^{-t^2/2}  (ball complement).
/// Callers assert lhs <= rhs.
std::pair<double, double> tail_moment_bounds(double eta, double t, int n,
                                             TailRegion region = TailRegion::slab);

}  // namespace gns
