#pragma once

#include "nmlab/core.hpp"

#include <functional>
#include <vector>

namespace nmlab
{

/// amp * sin(freq * x[in] + phase) added to output `out`.
struct SinTerm
{
  Eigen::Index out = 0;
  Eigen::Index in = 0;
  double amp = 0.0;
  double freq = 1.0;
  double phase = 0.0;
};

/// f(x) = M x + c + [x^T Q_k x]_k + sum of sinusoid terms.
struct SmoothFn
{
  Mat m;
  Vec c;
  std::vector<Mat> quad;  // empty, or one n x n matrix per output
  std::vector<SinTerm> sines;

  static SmoothFn affine(Mat m, Vec c);
  static SmoothFn linear(Mat m) { const Eigen::Index r = m.rows(); return affine(std::move(m), Vec::Zero(r)); }
  static SmoothFn identity(Eigen::Index n) { return linear(Mat::Identity(n, n)); }

  Eigen::Index in_dim() const { return m.cols(); }
  Eigen::Index out_dim() const { return m.rows(); }
  bool is_affine() const { return quad.empty() && sines.empty(); }

  Vec eval(const Vec& x) const;
  Mat jacobian(const Vec& x) const;
  /// Global Lipschitz constant of the Jacobian (spectral norm).
  double jacobian_lipschitz() const;

  /// Lipschitz bound of f on ball(x, reach).
  double local_lipschitz(const Vec& x, double reach) const;

  /// Throws DimensionMismatch on inconsistent shapes or sinusoid indices.
  void validate() const;
};

/// A continuous map R^n -> R^n given as a callable.
struct Map
{
  Eigen::Index dim = 0;
  std::function<Vec(const Vec&)> f;

  Vec operator()(const Vec& x) const { return f(x); }
};

inline Map as_map(const SmoothFn& fn)
{
  return Map{fn.in_dim(), [fn](const Vec& x) { return fn.eval(x); }};
}

/// Forward-difference Jacobian with relative step h.
Mat fd_jacobian(const Map& f, const Vec& x, double h = 1e-7);
/// Central-difference Jacobian with relative step h.
Mat central_jacobian(const Map& f, const Vec& x, double h = 1e-7);

/// Perturbation used by index-preservation checks: either a smooth function
/// or the radial term s * |x - center| (x - center).
struct Perturbation
{
  enum class Kind
  {
    Smooth,
    Radial,
  };
  Kind kind = Kind::Smooth;
  SmoothFn fn;
  Vec center;
  double scale = 0.0;

  static Perturbation smooth(SmoothFn f);
  static Perturbation radial(Vec center, double scale);

  Vec eval(const Vec& x) const;
  /// Lipschitz constant of the derivative; bounds the strict-stationarity ratio
  /// at radius r by (this) * r.
  double derivative_lipschitz() const;
};

struct StationarityCertificate
{
  std::vector<double> radii;
  std::vector<double> ratios;  // max |g(x)-g(x')| / |x-x'| over sampled pairs
  double bound_constant = 0.0; // ratios[i] must not exceed bound_constant * radii[i]
  bool passed = false;
};

/// Samples `pairs` point pairs in ball(x0, r) for each radius and records the
/// largest difference quotient of g. Passes when the ratios strictly decrease
/// and each stays below bound_constant * r.
StationarityCertificate strict_stationarity_certificate(const Map& g, const Vec& x0, double bound_constant,
                                                        const std::vector<double>& radii = {1e-1, 1e-2, 1e-3},
                                                        int pairs = 1000, std::uint64_t seed = 0);

/// psi(x) = phi'(x0) x - phi(x), the part of phi that is strictly stationary at x0.
Map linearization_remainder(const SmoothFn& phi, const Vec& x0);

}  // namespace nmlab
