// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FRACAP_REPORT_HPP
#define FRACAP_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace fracap {

using Record = nlohmann::json;

// Records render as a JSON array (canonical) or as a flat CSV projection of
// the same numbers; both retain full double fidelity.
std::string to_json_string(const std::vector<Record>& records);
std::string to_csv_string(const std::vector<Record>& records);

}  // namespace fracap

#endif
