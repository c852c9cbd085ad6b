// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace voxgauge::detail {

using Cells = std::vector<std::string>;

inline std::string fixed(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

inline std::string fixed(const std::optional<double>& v, int digits = 3) {
    return v ? fixed(*v, digits) : std::string{};
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv(const std::vector<Cells>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(row[i]);
        }
        out += '\n';
    }
    return out;
}

// First row is the header. First column left-aligned, the rest right-aligned.
inline std::string aligned(const std::vector<Cells>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::string out;
    for (std::size_t l = 0; l < rows.size(); ++l) {
        std::string text;
        for (std::size_t i = 0; i < rows[l].size(); ++i) {
            const auto& cell = rows[l][i];
            const std::string pad(width[i] - cell.size(), ' ');
            text += i == 0 ? cell + pad : "  " + pad + cell;
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out += text + '\n';
        if (l == 0) {
            std::size_t total = width.empty() ? 0 : width[0];
            for (std::size_t i = 1; i < width.size(); ++i) total += 2 + width[i];
            out += std::string(total, '-') + '\n';
        }
    }
    return out;
}

}  // namespace voxgauge::detail
