//
// Copyright 2026 The R-ADMM Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef RADMM_ERROR_H_
#define RADMM_ERROR_H_

#include <stdexcept>
#include <string>

namespace radmm {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RADMM_DEFINE_ERROR(Name)          \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// Topology construction.
RADMM_DEFINE_ERROR(DisconnectedGraph);
RADMM_DEFINE_ERROR(InvalidEdge);

// Objectives and solvers.
RADMM_DEFINE_ERROR(DimensionMismatch);
RADMM_DEFINE_ERROR(NonfiniteValue);
RADMM_DEFINE_ERROR(MissingCache);
RADMM_DEFINE_ERROR(ScheduleViolation);
RADMM_DEFINE_ERROR(InvalidArgument);

// Privacy accounting.
RADMM_DEFINE_ERROR(UnsupportedObjective);

// Condition checks and sample complexity.
RADMM_DEFINE_ERROR(NonfiniteInput);
RADMM_DEFINE_ERROR(InfeasibleTarget);
RADMM_DEFINE_ERROR(InfeasiblePrivacy);

// Data ingestion.
RADMM_DEFINE_ERROR(ParseError);
RADMM_DEFINE_ERROR(SchemaMismatch);
RADMM_DEFINE_ERROR(EmptyAfterFiltering);
RADMM_DEFINE_ERROR(UnmappableLabel);
RADMM_DEFINE_ERROR(TooFewSamples);

// Experiment harness.
RADMM_DEFINE_ERROR(EmptyTestSet);
RADMM_DEFINE_ERROR(ConfigError);
RADMM_DEFINE_ERROR(IoError);

#undef RADMM_DEFINE_ERROR

}  // namespace radmm

#endif  // RADMM_ERROR_H_
