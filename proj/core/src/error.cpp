#include "anisomin/error.hpp"

namespace anisomin {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NonUnitNormal: return "NonUnitNormal";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NonConvexIntegrand: return "NonConvexIntegrand";
    case ErrorCode::DegenerateImmersion: return "DegenerateImmersion";
    case ErrorCode::BoundaryNotFixed: return "BoundaryNotFixed";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
    case ErrorCode::SingularShear: return "SingularShear";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::EllipticityLoss: return "EllipticityLoss";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::NonDiscreteCriticalSet: return "NonDiscreteCriticalSet";
    case ErrorCode::AmbiguousWinding: return "AmbiguousWinding";
    case ErrorCode::GrazingCircle: return "GrazingCircle";
    }
    return "Unknown";
}

}  // namespace anisomin
