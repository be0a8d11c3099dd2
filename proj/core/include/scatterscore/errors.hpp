// Copyright 2026 The scatterscore Authors
//
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

#ifndef SCATTERSCORE_ERRORS_HPP_
#define SCATTERSCORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace scs {

// Base class for all toolkit errors. Commands map these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SCS_DEFINE_ERROR(NAME)               \
  class NAME : public Error {                \
   public:                                   \
    using Error::Error;                      \
  };

// Audio I/O.
SCS_DEFINE_ERROR(NotFoundError)
SCS_DEFINE_ERROR(UnsupportedFormatError)
SCS_DEFINE_ERROR(CorruptFileError)
SCS_DEFINE_ERROR(InputTooShortError)

// Scattering.
SCS_DEFINE_ERROR(InvalidConfigError)
SCS_DEFINE_ERROR(LengthMismatchError)

// Features.
SCS_DEFINE_ERROR(OutOfRangeError)
SCS_DEFINE_ERROR(FrameMismatchError)
SCS_DEFINE_ERROR(IoError)
SCS_DEFINE_ERROR(VersionMismatchError)

// Neural network.
SCS_DEFINE_ERROR(ShapeMismatchError)
SCS_DEFINE_ERROR(MissingForwardStateError)
SCS_DEFINE_ERROR(NonFiniteValueError)

// Training.
SCS_DEFINE_ERROR(DatasetTooSmallError)
SCS_DEFINE_ERROR(EmptyPredictionError)

// Metrics.
SCS_DEFINE_ERROR(ZeroVarianceError)
SCS_DEFINE_ERROR(TooFewPointsError)

// Data ingestion.
SCS_DEFINE_ERROR(SchemaError)
SCS_DEFINE_ERROR(RangeError)
SCS_DEFINE_ERROR(EmptyDatasetError)

// Pipeline / CLI.
SCS_DEFINE_ERROR(MissingFeaturesError)
SCS_DEFINE_ERROR(NoOverlapError)

#undef SCS_DEFINE_ERROR

// Training abort carrying the offending utterance id.
class NonFiniteLossError : public Error {
 public:
  NonFiniteLossError(const std::string& utterance_id, const std::string& detail)
      : Error("non-finite loss on utterance '" + utterance_id + "': " + detail),
        utterance_id_(utterance_id) {}
  const std::string& utterance_id() const { return utterance_id_; }

 private:
  std::string utterance_id_;
};

}  // namespace scs

#endif  // SCATTERSCORE_ERRORS_HPP_
