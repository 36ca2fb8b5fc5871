// SPDX-License-Identifier: Apache-2.0
//
// iasim: downlink interference alignment simulator
// Copyright (C) 2026 The iasim authors
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

#ifndef IASIM_RNG_HPP
#define IASIM_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace iasim {

/// What a random stream is used for. Each (seed, purpose, index...) tuple
/// maps to its own generator, so results do not depend on evaluation order.
enum class Purpose : std::uint64_t
{
    Geometry = 1,
    Shadowing = 2,
    Fading = 3,
    Test = 99,
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, Purpose purpose,
                                std::initializer_list<std::uint64_t> indices = {})
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
    for (std::uint64_t i : indices)
        h = splitmix64(h ^ splitmix64(i + 0x1234567ull));
    return std::mt19937_64(h);
}

} // namespace iasim

#endif
