// Copyright 2026 The zol Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace zol {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad label, unknown register,
/// mismatched layouts, setting outside the family, ...).
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// A desk-scale cap (register bits, family size, search budget) was exceeded.
class CapExceeded : public Error {
   public:
    using Error::Error;
};

/// A problem file could not be read, parsed or validated.
class FormatError : public Error {
   public:
    using Error::Error;
};

class DuplicateSetting : public FormatError {
   public:
    using FormatError::FormatError;
};

/// Samples handed to the Simon post-processing admit only the zero period.
class Contradiction : public Error {
   public:
    using Error::Error;
};

}  // namespace zol
