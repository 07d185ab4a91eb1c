// Copyright 2026 The quinr Authors
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

namespace quinr {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Register or matrix size beyond what the simulator supports.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Mismatched vector/matrix dimensions or out-of-range indices.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Invalid model or training configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Non-finite values where finite ones are required (loss, gradients).
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// File system or image/raw-tensor decoding failures.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Base class for malformed `.qinr` streams.
class CodecError : public Error {
  public:
    using Error::Error;
};

class BadMagicError : public CodecError {
  public:
    using CodecError::CodecError;
};

class BadVersionError : public CodecError {
  public:
    using CodecError::CodecError;
};

class TruncatedStreamError : public CodecError {
  public:
    using CodecError::CodecError;
};

class ParamCountError : public CodecError {
  public:
    using CodecError::CodecError;
};

}  // namespace quinr
