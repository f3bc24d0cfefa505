// Copyright 2026 The ACS Diagnostic Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace acs {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a schema or a dataset-level precondition.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Training data cannot produce a meaningful model (e.g. a single class).
class DegenerateDatasetError : public DataError {
 public:
  using DataError::DataError;
};

/// Errors raised while encoding or decoding a serialized model.
class ModelError : public Error {
 public:
  using Error::Error;
};

class FormatError : public ModelError {
 public:
  using ModelError::ModelError;
};

class VersionError : public ModelError {
 public:
  using ModelError::ModelError;
};

class CorruptionError : public ModelError {
 public:
  using ModelError::ModelError;
};

class MalformedModelError : public ModelError {
 public:
  using ModelError::ModelError;
};

class CapacityError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// A wire message field is out of range at encode time.
class EncodingError : public Error {
 public:
  using Error::Error;
};

}  // namespace acs
