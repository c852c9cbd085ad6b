// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>

namespace voxgauge {

template <typename Derived>
double mean(const Eigen::DenseBase<Derived>& x) {
    return x.size() == 0 ? 0.0 : static_cast<double>(x.derived().template cast<double>().mean());
}

/// Sample (n - 1) standard deviation; 0 for fewer than two values.
template <typename Derived>
double sample_std(const Eigen::DenseBase<Derived>& x) {
    const Eigen::Index n = x.size();
    if (n < 2) return 0.0;
    const double m = mean(x);
    const double ss = (x.derived().template cast<double>().array() - m).square().sum();
    return std::sqrt(ss / static_cast<double>(n - 1));
}

inline Eigen::Map<const Eigen::ArrayXd> as_array(std::span<const double> values) {
    return {values.data(), static_cast<Eigen::Index>(values.size())};
}

inline double mean(std::span<const double> values) { return mean(as_array(values)); }
inline double sample_std(std::span<const double> values) { return sample_std(as_array(values)); }

}  // namespace voxgauge
