// SPDX-License-Identifier: Apache-2.0
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

#ifndef MUSE_UNITS_HPP
#define MUSE_UNITS_HPP

#include <cmath>
#include <limits>

namespace muse
{
    // All engine arithmetic is in linear watts. Decibel forms only appear at I/O.

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    inline double linear_to_db(double ratio)
    {
        if (ratio <= 0.0)
            return -std::numeric_limits<double>::infinity();
        return 10.0 * std::log10(ratio);
    }

    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    /// Non-positive power maps to -inf dBm.
    inline double watts_to_dbm(double watts)
    {
        if (watts <= 0.0)
            return -std::numeric_limits<double>::infinity();
        return 10.0 * std::log10(watts) + 30.0;
    }

    struct Point
    {
        double x = 0.0; // meters
        double y = 0.0; // meters

        friend bool operator==(const Point &, const Point &) = default;
    };

    inline double distance(const Point &a, const Point &b) { return std::hypot(a.x - b.x, a.y - b.y); }

} // namespace muse

#endif
