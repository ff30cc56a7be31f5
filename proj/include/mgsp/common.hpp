// Copyright 2026 the mgsp authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mgsp {

/// Global comparison tolerance for lengths and positions.
inline constexpr double kLengthTol = 1e-12;

/// Relative threshold on singular values of the secular matrix: a value of k
/// is accepted as an eigenvalue sqrt when sigma_min < kSigmaTol * ||M(k)||_1.
inline constexpr double kSigmaTol = 1e-9;

/// Residual gate for reported eigenvectors (vertex conditions and Rayleigh
/// identity).
inline constexpr double kResidualTol = 1e-8;

/// Zeros/extrema within kSnapTol * |e| of an edge endpoint are snapped to the
/// vertex.
inline constexpr double kSnapTol = 1e-9;

/// Default tolerance for inequality assertions: 2% relative or 1e-6 absolute,
/// whichever is larger.
inline constexpr double kIneqRelTol = 2e-2;
inline constexpr double kIneqAbsTol = 1e-6;

inline double ineq_slack(double reference, double rel = kIneqRelTol) {
  double a = reference < 0 ? -reference : reference;
  return rel * a > kIneqAbsTol ? rel * a : kIneqAbsTol;
}

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define MGSP_ERROR_TYPE(Name)                      \
  struct Name : Error {                            \
    explicit Name(const std::string& what = "")    \
        : Error(std::string(#Name) +               \
                (what.empty() ? "" : ": " + what)) {} \
  }

// core_graph
MGSP_ERROR_TYPE(NonPositiveLength);
MGSP_ERROR_TYPE(EndpointMissingOrDuplicated);
MGSP_ERROR_TYPE(PositionOutOfRange);
MGSP_ERROR_TYPE(NotDegreeTwo);
MGSP_ERROR_TYPE(LoopBase);
MGSP_ERROR_TYPE(SizeLimitExceeded);
// surgery
MGSP_ERROR_TYPE(InvalidGrouping);
MGSP_ERROR_TYPE(UnknownVertex);
MGSP_ERROR_TYPE(MismatchedGraphs);
MGSP_ERROR_TYPE(TooFewVertices);
// partitions
MGSP_ERROR_TYPE(NotAComponent);
MGSP_ERROR_TYPE(EmptySelection);
MGSP_ERROR_TYPE(AlreadyExhaustive);
MGSP_ERROR_TYPE(SearchSpaceTooLarge);
// spectral
MGSP_ERROR_TYPE(RootIsolationFailure);
MGSP_ERROR_TYPE(SingularMass);
MGSP_ERROR_TYPE(EmptyDirichletSet);
MGSP_ERROR_TYPE(DegenerateEigenfunction);
MGSP_ERROR_TYPE(ZeroFunction);
// optimize
MGSP_ERROR_TYPE(InfeasibleK);
MGSP_ERROR_TYPE(GenericityFailure);
MGSP_ERROR_TYPE(Disconnected);
// cli / io
MGSP_ERROR_TYPE(ParseError);

#undef MGSP_ERROR_TYPE

}  // namespace mgsp
