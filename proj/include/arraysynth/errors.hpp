// SPDX-License-Identifier: Apache-2.0
//
// arraysynth - design and analysis toolkit for aperture-coupled patch arrays
// Copyright (C) 2026 The arraysynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef ARRAYSYNTH_ERRORS_HPP
#define ARRAYSYNTH_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace arraysynth {

// Base of every exception thrown by the library. The CLI maps these to exit
// code 2 (validation) and everything else to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (non-positive width,
// negative frequency, |s11| >= 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Request that cannot be satisfied within the supported range, e.g. an
// impedance the microstrip synthesizer cannot reach.
class RangeError : public Error {
public:
    RangeError(const std::string &what, double lower, double upper)
        : Error(what), lower_(lower), upper_(upper) {}
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string> &violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string> &v) {
        std::string out = "validation failed";
        for (const auto &s : v) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> violations_;
};

// Pattern analysis could not identify the structure it was asked to measure.
class AnalysisError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require_positive(double value, const char *name) {
    if (!(value > 0.0)) throw DomainError(std::string(name) + " must be positive, got " + std::to_string(value));
}

inline void require_non_negative(double value, const char *name) {
    if (!(value >= 0.0)) throw DomainError(std::string(name) + " must be non-negative, got " + std::to_string(value));
}

} // namespace detail
} // namespace arraysynth

#endif
