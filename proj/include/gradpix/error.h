// Copyright (c) the Gradpix Project
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

#ifndef GRADPIX_ERROR_H_
#define GRADPIX_ERROR_H_

#include <stdexcept>
#include <string>

namespace gradpix {

enum class ErrorKind {
  kIo,                // unreadable/unwritable file
  kUnsupportedPng,    // palette, alpha, interlaced, odd bit depth
  kBadArgument,       // caller violated a precondition
  kBadMagic,          // container does not start with "GPX1"
  kBadVersion,        // container version unknown
  kBadHeader,         // malformed header field
  kTruncated,         // container shorter than its declared payloads
  kCorruptStream,     // range coder desynced or payload not fully consumed
  kChecksumMismatch,  // decoded samples disagree with the stored CRC
  kEmptyInput,        // no images / no records to work on
  kVerifyFailed,      // round-trip comparison found a mismatch
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace gradpix

#endif  // GRADPIX_ERROR_H_
