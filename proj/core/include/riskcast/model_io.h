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

#ifndef RISKCAST_MODEL_IO_H_
#define RISKCAST_MODEL_IO_H_

// Versioned text model format:
//
//   RISKCAST-MODEL v1
//   kind hybrid|linreg
//   <architecture header lines>
//   param <name> <dim> [<dim>...]
//   <one value per line, shortest round-trip decimal>
//   ...
//   preprocessing 0|1
//   [preprocessing block]
//   end
//
// Values print as the shortest text that parses back to the same double, so
// save -> load -> save is byte-identical.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "riskcast/models.h"
#include "riskcast/pipeline.h"

namespace riskcast {

inline constexpr const char* kModelMagic = "RISKCAST-MODEL v1";

struct ModelFile {
  AnyModel model;
  std::optional<Preprocessing> preprocessing;
};

std::string SerializeModel(const ModelFile& file);
// Throws SchemaError on a wrong magic/version, malformed lines or truncation.
ModelFile ParseModel(std::istream& in, const std::string& source = "<stream>");

void SaveModel(const ModelFile& file, const std::filesystem::path& path);
ModelFile LoadModel(const std::filesystem::path& path);

}  // namespace riskcast

#endif  // RISKCAST_MODEL_IO_H_
