// core/include/sqa/error.h

// Copyright 2026  The sqa authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace sqa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Correlation over a constant-valued side. Raised instead of returning 0 or
// NaN so that degenerate predictions (e.g. a model answering the same score
// for every item) surface loudly.
class ZeroVarianceError : public Error {
 public:
  using Error::Error;
};

// Failure talking to a model backend or judge service. Retryable errors
// (connection loss, timeouts, 5xx replies) may be re-attempted with backoff;
// non-retryable ones (bad request, auth) abort immediately.
class BackendError : public Error {
 public:
  BackendError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

}  // namespace sqa
