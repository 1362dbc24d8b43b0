#include "nmlab/core.hpp"

#include <algorithm>

namespace nmlab
{

std::string_view to_string(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InfeasibleSet: return "InfeasibleSet";
    case ErrorCode::RootFindFailure: return "RootFindFailure";
    case ErrorCode::NotInSet: return "NotInSet";
    case ErrorCode::UnsupportedStructure: return "UnsupportedStructure";
    case ErrorCode::NotInSpan: return "NotInSpan";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::NotRelBoundaryNormal: return "NotRelBoundaryNormal";
    case ErrorCode::NoWitness: return "NoWitness";
    case ErrorCode::NotRExtreme: return "NotRExtreme";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::ConjugacyViolation: return "ConjugacyViolation";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::BoundaryProximity: return "BoundaryProximity";
    case ErrorCode::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorCode::PreimageSearchIncomplete: return "PreimageSearchIncomplete";
    case ErrorCode::NotIsolated: return "NotIsolated";
    case ErrorCode::NotFullDimensional: return "NotFullDimensional";
    case ErrorCode::SolverBudgetExceeded: return "SolverBudgetExceeded";
    case ErrorCode::UnsupportedSet: return "UnsupportedSet";
    case ErrorCode::JacobianSingular: return "JacobianSingular";
    case ErrorCode::MissingReport: return "MissingReport";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

namespace
{

Eigen::JacobiSVD<Mat> full_svd(const Mat& m)
{
  return Eigen::JacobiSVD<Mat>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

Eigen::Index rank_of(const Eigen::JacobiSVD<Mat>& svd, double rel_tol)
{
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0)
  {
    return 0;
  }
  const double cutoff = std::max(rel_tol * s(0), 1e-14);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
  {
    if (s(i) > cutoff)
    {
      ++r;
    }
  }
  return r;
}

}  // namespace

Eigen::Index numerical_rank(const Mat& m, double rel_tol)
{
  if (m.size() == 0)
  {
    return 0;
  }
  return rank_of(full_svd(m), rel_tol);
}

Mat null_space(const Mat& m, double rel_tol)
{
  if (m.rows() == 0)
  {
    return Mat::Identity(m.cols(), m.cols());
  }
  const auto svd = full_svd(m);
  const Eigen::Index r = rank_of(svd, rel_tol);
  return svd.matrixV().rightCols(m.cols() - r);
}

Mat range_space(const Mat& m, double rel_tol)
{
  if (m.cols() == 0 || m.rows() == 0)
  {
    return Mat(m.rows(), 0);
  }
  const auto svd = full_svd(m);
  const Eigen::Index r = rank_of(svd, rel_tol);
  return svd.matrixU().leftCols(r);
}

}  // namespace nmlab
