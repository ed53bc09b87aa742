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

#ifndef MUSE_ANTENNA_HPP
#define MUSE_ANTENNA_HPP

#include <numbers>

namespace muse
{
    enum class AntennaKind
    {
        omni,
        sector
    };

    // Two-level sector pattern. Angles are radians, measured counter-clockwise from +x.
    struct AntennaPattern
    {
        AntennaKind kind = AntennaKind::omni;
        double boresight = 0.0;
        double beamwidth = 2.0 * std::numbers::pi;
        double main_gain = 1.0; // linear, >= 1
        double back_gain = 1.0; // linear, in (0, main_gain]

        static AntennaPattern omni() { return {}; }

        static AntennaPattern sector(double boresight, double beamwidth, double main_gain, double back_gain)
        {
            return {AntennaKind::sector, boresight, beamwidth, main_gain, back_gain};
        }

        friend bool operator==(const AntennaPattern &, const AntennaPattern &) = default;
    };

} // namespace muse

#endif
