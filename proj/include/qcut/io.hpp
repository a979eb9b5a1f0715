// Copyright 2026 The qcut authors
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

#include <string>

#include <json.hpp>

#include "qcut/tensor.hpp"

namespace qcut {

struct QPD;
struct ProtocolPlan;

/// Matrices serialize as an array of rows, each entry a [re, im] pair.
nlohmann::json mat_to_json(const Mat& m);
Mat mat_from_json(const nlohmann::json& j);
Mat load_matrix_file(const std::string& path);

/// "qpd-v1" document.
nlohmann::json qpd_to_json(const QPD& q);
QPD qpd_from_json(const nlohmann::json& j);

/// "bbplan-v1" document.
nlohmann::json plan_to_json(const ProtocolPlan& p);
ProtocolPlan plan_from_json(const nlohmann::json& j);

}  // namespace qcut
