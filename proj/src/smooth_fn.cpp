#include "nmlab/smooth_fn.hpp"

#include "nmlab/rng.hpp"

#include <cmath>

namespace nmlab
{

SmoothFn SmoothFn::affine(Mat m, Vec c)
{
  SmoothFn f;
  f.m = std::move(m);
  f.c = std::move(c);
  f.validate();
  return f;
}

void SmoothFn::validate() const
{
  if (c.size() != m.rows())
  {
    throw Error(ErrorCode::DimensionMismatch, "smooth function: c and M disagree");
  }
  if (m.rows() != m.cols())
  {
    throw Error(ErrorCode::DimensionMismatch, "smooth function: M must be square");
  }
  if (!quad.empty() && static_cast<Eigen::Index>(quad.size()) != m.rows())
  {
    throw Error(ErrorCode::DimensionMismatch, "smooth function: need one quadratic block per output");
  }
  for (const Mat& q : quad)
  {
    if (q.rows() != m.cols() || q.cols() != m.cols())
    {
      throw Error(ErrorCode::DimensionMismatch, "smooth function: quadratic block has wrong shape");
    }
  }
  for (const SinTerm& s : sines)
  {
    if (s.out < 0 || s.out >= m.rows() || s.in < 0 || s.in >= m.cols())
    {
      throw Error(ErrorCode::DimensionMismatch, "smooth function: sinusoid index out of range");
    }
  }
}

Vec SmoothFn::eval(const Vec& x) const
{
  Vec y = m * x + c;
  for (std::size_t k = 0; k < quad.size(); ++k)
  {
    y(static_cast<Eigen::Index>(k)) += x.dot(quad[k] * x);
  }
  for (const SinTerm& s : sines)
  {
    y(s.out) += s.amp * std::sin(s.freq * x(s.in) + s.phase);
  }
  return y;
}

Mat SmoothFn::jacobian(const Vec& x) const
{
  Mat j = m;
  for (std::size_t k = 0; k < quad.size(); ++k)
  {
    j.row(static_cast<Eigen::Index>(k)) += ((quad[k] + quad[k].transpose()) * x).transpose();
  }
  for (const SinTerm& s : sines)
  {
    j(s.out, s.in) += s.amp * s.freq * std::cos(s.freq * x(s.in) + s.phase);
  }
  return j;
}

double SmoothFn::jacobian_lipschitz() const
{
  // |J(a) - J(b)|_2 <= |J(a) - J(b)|_F <= (sqrt(sum |Q_k + Q_k^T|^2) + sum |amp| freq^2) |a - b|
  double q2 = 0.0;
  for (const Mat& q : quad)
  {
    const Mat s = q + q.transpose();
    const double nrm = s.jacobiSvd().singularValues()(0);
    q2 += nrm * nrm;
  }
  double sines_bound = 0.0;
  for (const SinTerm& s : sines)
  {
    sines_bound += std::abs(s.amp) * s.freq * s.freq;
  }
  return std::sqrt(q2) + sines_bound;
}

double SmoothFn::local_lipschitz(const Vec& x, double reach) const
{
  return jacobian(x).jacobiSvd().singularValues()(0) + jacobian_lipschitz() * reach;
}

Mat fd_jacobian(const Map& f, const Vec& x, double h)
{
  const Eigen::Index n = x.size();
  const Vec fx = f(x);
  Mat j(fx.size(), n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    const double step = h * std::max(1.0, std::abs(x(i)));
    Vec xp = x;
    xp(i) += step;
    j.col(i) = (f(xp) - fx) / step;
  }
  return j;
}

Mat central_jacobian(const Map& f, const Vec& x, double h)
{
  const Eigen::Index n = x.size();
  Mat j(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    const double step = h * std::max(1.0, std::abs(x(i)));
    Vec xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    j.col(i) = (f(xp) - f(xm)) / (2.0 * step);
  }
  return j;
}

Perturbation Perturbation::smooth(SmoothFn f)
{
  Perturbation p;
  p.kind = Kind::Smooth;
  p.fn = std::move(f);
  p.center = Vec::Zero(p.fn.in_dim());
  return p;
}

Perturbation Perturbation::radial(Vec center, double scale)
{
  Perturbation p;
  p.kind = Kind::Radial;
  p.center = std::move(center);
  p.scale = scale;
  return p;
}

Vec Perturbation::eval(const Vec& x) const
{
  if (kind == Kind::Smooth)
  {
    return fn.eval(x);
  }
  const Vec d = x - center;
  return scale * d.norm() * d;
}

double Perturbation::derivative_lipschitz() const
{
  // D(|d| d) = |d| I + d d^T / |d| has norm 2|d|, and is 2-Lipschitz in the operator norm.
  return kind == Kind::Smooth ? fn.jacobian_lipschitz() : 2.0 * std::abs(scale);
}

StationarityCertificate strict_stationarity_certificate(const Map& g, const Vec& x0, double bound_constant,
                                                        const std::vector<double>& radii, int pairs,
                                                        std::uint64_t seed)
{
  StationarityCertificate cert;
  cert.radii = radii;
  cert.bound_constant = bound_constant;
  cert.passed = true;
  Rng rng(seed);
  for (std::size_t k = 0; k < radii.size(); ++k)
  {
    Rng stream = rng.split(k);
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i)
    {
      const Vec a = x0 + stream.in_ball(x0.size(), radii[k]);
      const Vec b = x0 + stream.in_ball(x0.size(), radii[k]);
      const double dx = (a - b).norm();
      if (dx > 0.0)
      {
        worst = std::max(worst, (g(a) - g(b)).norm() / dx);
      }
    }
    cert.ratios.push_back(worst);
    if (worst > bound_constant * radii[k] * (1.0 + 1e-9) + 1e-12)
    {
      cert.passed = false;
    }
    if (k > 0 && !(worst < cert.ratios[k - 1]))
    {
      cert.passed = false;
    }
  }
  return cert;
}

Map linearization_remainder(const SmoothFn& phi, const Vec& x0)
{
  const Mat j0 = phi.jacobian(x0);
  return Map{phi.in_dim(), [phi, j0](const Vec& x) { return Vec(j0 * x - phi.eval(x)); }};
}

}  // namespace nmlab
