// Copyright 2026 The RiskCast Authors
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

#include "riskcast/error.h"

#include <iostream>
#include <utility>

#include "riskcast/log.h"

namespace riskcast {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimension: return "dimension error";
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kContract: return "contract error";
    case ErrorKind::kNumerical: return "numerical error";
    case ErrorKind::kSchema: return "schema error";
    case ErrorKind::kIo: return "I/O error";
  }
  return "error";
}

namespace {

WarningHandler& CurrentHandler() {
  static WarningHandler handler;
  return handler;
}

}  // namespace

void Warn(std::string_view message) {
  const WarningHandler& handler = CurrentHandler();
  if (handler) {
    handler(message);
  } else {
    std::cerr << "warning: " << message << "\n";
  }
}

WarningHandler SetWarningHandler(WarningHandler handler) {
  return std::exchange(CurrentHandler(), std::move(handler));
}

ScopedWarningCapture::ScopedWarningCapture() {
  previous_ = SetWarningHandler(
      [this](std::string_view m) { messages_.emplace_back(m); });
}

ScopedWarningCapture::~ScopedWarningCapture() {
  SetWarningHandler(std::move(previous_));
}

}  // namespace riskcast
