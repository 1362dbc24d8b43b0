#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmlab
{

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Membership tolerance, max-norm of constraint violations.
inline constexpr double kMembershipTol = 1e-9;
/// Coefficient floor used by relative-interior feasibility programs.
inline constexpr double kRelIntEps = 1e-8;

enum class ErrorCode
{
  DimensionMismatch,
  InfeasibleSet,
  RootFindFailure,
  NotInSet,
  UnsupportedStructure,
  NotInSpan,
  Unbounded,
  TooLarge,
  ZeroVector,
  NotOnBoundary,
  NotRelBoundaryNormal,
  NoWitness,
  NotRExtreme,
  SearchExhausted,
  ConjugacyViolation,
  NonConvergent,
  BoundaryProximity,
  DegenerateJacobian,
  PreimageSearchIncomplete,
  NotIsolated,
  NotFullDimensional,
  SolverBudgetExceeded,
  UnsupportedSet,
  JacobianSingular,
  MissingReport,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline void require_dim(const Vec& v, Eigen::Index n, const char* what)
{
  if (v.size() != n)
  {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected dimension " + std::to_string(n) + ", got " +
                  std::to_string(v.size()));
  }
}

/// Numerical rank with a relative singular-value cutoff.
Eigen::Index numerical_rank(const Mat& m, double rel_tol = 1e-10);

/// Orthonormal basis (columns) of the null space of `m`.
Mat null_space(const Mat& m, double rel_tol = 1e-10);

/// Orthonormal basis (columns) of the column space of `m`.
Mat range_space(const Mat& m, double rel_tol = 1e-10);

}  // namespace nmlab
