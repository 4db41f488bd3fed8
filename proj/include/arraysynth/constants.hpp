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

#ifndef ARRAYSYNTH_CONSTANTS_HPP
#define ARRAYSYNTH_CONSTANTS_HPP

#include <numbers>

namespace arraysynth::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double c0 = 299792458.0;                  // m/s
inline constexpr double mu0 = 1.25663706212e-6;            // H/m
inline constexpr double eps0 = 8.8541878128e-12;           // F/m
inline constexpr double eta0 = 376.730313668;              // ohm

// Rounded speed of light used by the patch resonant-length design rule.
inline constexpr double c_design = 3.0e8;

inline constexpr double np_to_db = 8.685889638065035;      // 20 / ln(10)

} // namespace arraysynth::constants

#endif
