/** \file    errors.h
    \brief   Exception types shared by all catseye modules
*/
#pragma once
#include <stdexcept>
#include <string>

namespace catseye {

/// base class of all errors raised by the library
class Error: public std::runtime_error {
public:
    explicit Error(const std::string& msg): std::runtime_error(msg) {}
};

/// invalid parameters of a flow or problem selection
class InvalidParams: public Error { using Error::Error; };
/// the inverse coordinate map is undefined at the requested point
class DegeneratePoint: public Error { using Error::Error; };
/// argument outside the admissible range (e.g. an untrapped level)
class OutOfRange: public Error { using Error::Error; };
/// eigenpair descriptor does not belong to the selected problem
class InconsistentProblem: public Error { using Error::Error; };
/// quadrature tail estimate exceeds the tolerance
class QuadratureDiverged: public Error { using Error::Error; };
/// quadrature too coarse to preserve a structural property of a matrix
class QuadratureUnderResolved: public Error { using Error::Error; };
/// curve integral endpoint too close to the separatrix or elliptic point
class SingularEndpoint: public Error { using Error::Error; };
/// dense eigensolver did not converge
class ConvergenceFailure: public Error { using Error::Error; };
/// Cholesky factorization of the mass-like matrix failed
class SingularD: public Error { using Error::Error; };
/// evaluation at the singular point of a kernel
class SingularPoint: public Error { using Error::Error; };
/// right-hand side of a normalized Poisson solve has non-zero mean
class NonZeroMean: public Error { using Error::Error; };
/// y-moment of a field too large for the truncated domain
class MomentUnbounded: public Error { using Error::Error; };
/// argument outside the domain of a pointwise function
class DomainError: public Error { using Error::Error; };
/// a field violates a required sign condition
class SignViolation: public Error { using Error::Error; };

}  // namespace catseye
