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

#ifndef IASIM_COMMON_HPP
#define IASIM_COMMON_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace iasim {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// ----- Errors -------------------------------------------------------------

struct Error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

#define IASIM_DEFINE_ERROR(Name)                  \
    struct Name : Error                           \
    {                                             \
        explicit Name(const std::string &what)    \
            : Error(std::string(#Name ": ") + what) \
        {                                         \
        }                                         \
    }

IASIM_DEFINE_ERROR(HadamardUnavailable);
IASIM_DEFINE_ERROR(InvalidKappa);
IASIM_DEFINE_ERROR(IllConditioned);
IASIM_DEFINE_ERROR(DimensionMismatch);
IASIM_DEFINE_ERROR(NoNullSpace);
IASIM_DEFINE_ERROR(ZeroDirection);
IASIM_DEFINE_ERROR(LTooLarge);
IASIM_DEFINE_ERROR(BudgetExceeded);
IASIM_DEFINE_ERROR(ValidationError);
IASIM_DEFINE_ERROR(BinMismatch);

#undef IASIM_DEFINE_ERROR

struct ParseError : Error
{
    ParseError(std::size_t line, const std::string &key, const std::string &what)
        : Error("ParseError: line " + std::to_string(line) + ", key '" + key + "': " + what),
          line(line), key(key)
    {
    }
    std::size_t line;
    std::string key;
};

inline constexpr const char *kVersion = "1.0.0";

// Index value used when a UE has no interfering base station.
inline constexpr std::size_t kNoBs = static_cast<std::size_t>(-1);

} // namespace iasim

#endif
