// Copyright 2026 The rpkg Authors.
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

#ifndef RPKG_ERROR_H_
#define RPKG_ERROR_H_

#include <stdexcept>
#include <string>

namespace rpkg {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corpus, manifest or vocabulary could not be read.
class IngestError : public Error {
 public:
  using Error::Error;
};

// A package.xml or record line is malformed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Graph construction failed (e.g. duplicate package).
class BuildError : public Error {
 public:
  using Error::Error;
};

// Persisted graph has an unsupported format or version.
class VersionError : public Error {
 public:
  using Error::Error;
};

// Persisted graph violates referential or typing constraints.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Embedding vectors of different dimension were compared.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A query has no usable dimension or an invalid field.
class QueryError : public Error {
 public:
  using Error::Error;
};

}  // namespace rpkg

#endif  // RPKG_ERROR_H_
