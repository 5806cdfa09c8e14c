// Copyright 2026 The eepc Authors
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

#include <iosfwd>
#include <string>

#include "eepc/model.hpp"

// CSV serialization of a NetworkModel for reproducibility: a metadata line
// followed by one `kind,user,peer,block,value` row per coefficient. Written
// files round-trip exactly through read_model_csv.

namespace eepc {

void write_model_csv(const NetworkModel& model, std::ostream& os);

NetworkModel read_model_csv(std::istream& is, const std::string& source_name = "<stream>");

void write_model_csv_file(const NetworkModel& model, const std::string& path);

NetworkModel read_model_csv_file(const std::string& path);

}  // namespace eepc
