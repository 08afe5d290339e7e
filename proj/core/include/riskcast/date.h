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

#ifndef RISKCAST_DATE_H_
#define RISKCAST_DATE_H_

#include <chrono>
#include <string>
#include <string_view>

namespace riskcast {

using Date = std::chrono::sys_days;

// Strict ISO-8601 calendar date, YYYY-MM-DD. Throws SchemaError.
Date ParseDate(std::string_view text);
std::string FormatDate(Date date);

}  // namespace riskcast

#endif  // RISKCAST_DATE_H_
