// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace voxgauge {

enum class Format { TableText, Csv, Json };

/// Accepts "table-text" (or "table"), "csv", "json".
Format parse_format(std::string_view name);

}  // namespace voxgauge
