// Copyright 2026 The voxgauge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace voxgauge {

// Base for every domain error raised by the library. The CLI maps these to
// exit status 1; anything else is a bug.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define VOXGAUGE_DEFINE_ERROR(Name)                 \
    class Name : public Error {                     \
    public:                                         \
        using Error::Error;                         \
    }

// audio-io
VOXGAUGE_DEFINE_ERROR(FileNotFound);
VOXGAUGE_DEFINE_ERROR(UnsupportedFormat);
VOXGAUGE_DEFINE_ERROR(CorruptHeader);

// signal-metrics
VOXGAUGE_DEFINE_ERROR(DegenerateSignal);
VOXGAUGE_DEFINE_ERROR(ClipTooShort);
VOXGAUGE_DEFINE_ERROR(TableError);

// dataset-analyzer
VOXGAUGE_DEFINE_ERROR(DuplicateClipId);
VOXGAUGE_DEFINE_ERROR(MissingAudio);
VOXGAUGE_DEFINE_ERROR(UnknownSpeaker);
VOXGAUGE_DEFINE_ERROR(EmptyResult);

// scorer-bridge
VOXGAUGE_DEFINE_ERROR(DimensionMismatch);
VOXGAUGE_DEFINE_ERROR(ZeroVector);
VOXGAUGE_DEFINE_ERROR(EmptySet);
VOXGAUGE_DEFINE_ERROR(MissingField);

// eval-reporter
VOXGAUGE_DEFINE_ERROR(DivisionByZero);
VOXGAUGE_DEFINE_ERROR(MissingBase);

// checkpoint-advisor
VOXGAUGE_DEFINE_ERROR(InsufficientData);
VOXGAUGE_DEFINE_ERROR(MissingMetric);
VOXGAUGE_DEFINE_ERROR(DegenerateWeights);

// latency-bench
VOXGAUGE_DEFINE_ERROR(ZeroDuration);
VOXGAUGE_DEFINE_ERROR(ProtocolError);
VOXGAUGE_DEFINE_ERROR(EngineCrashed);
VOXGAUGE_DEFINE_ERROR(Timeout);

// Bad argument values that are not tied to a specific module contract.
VOXGAUGE_DEFINE_ERROR(InvalidArgument);

#undef VOXGAUGE_DEFINE_ERROR

// Record-level schema violation. `line` is 1-based for line-delimited
// inputs and the array index + 1 for JSON arrays.
class SchemaError : public Error {
public:
    SchemaError(std::size_t line, std::string field, const std::string& detail = {})
        : Error("schema error at record " + std::to_string(line) + ", field '" + field + "'" +
                (detail.empty() ? std::string{} : ": " + detail)),
          line_(line),
          field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

}  // namespace voxgauge
