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

#ifndef MUSE_PROPAGATION_HPP
#define MUSE_PROPAGATION_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include "antenna.hpp"
#include "error.hpp"
#include "units.hpp"

namespace muse
{
    enum class PropagationKind
    {
        power_law
    };

    struct PropagationModel
    {
        PropagationKind kind = PropagationKind::power_law;
        double alpha = 3.5;              // path-loss exponent
        double reference_distance = 1.0; // meters

        /// Same model with a different exponent (per-band override).
        PropagationModel with_alpha(double a) const
        {
            PropagationModel m = *this;
            m.alpha = a;
            return m;
        }

        friend bool operator==(const PropagationModel &, const PropagationModel &) = default;
    };

    /// Linear power gain over distance d, min(1, (d/d0)^-alpha). Always in (0, 1].
    inline double path_gain(const PropagationModel &model, double d)
    {
        if (d <= model.reference_distance)
            return 1.0;
        return std::pow(d / model.reference_distance, -model.alpha);
    }

    /// Largest power an interferer at distance d may radiate so that the receiver sees exactly `margin`.
    /// Equals the margin for d <= d0 and grows with d beyond it.
    inline double inverse_path_gain_bound(const PropagationModel &model, double margin, double d)
    {
        return margin / path_gain(model, d);
    }

    namespace detail
    {
        inline double pattern_gain_at_bearing(const AntennaPattern &pattern, double bearing)
        {
            if (pattern.kind == AntennaKind::omni)
                return 1.0;
            const double off = std::remainder(bearing - pattern.boresight, 2.0 * std::numbers::pi);
            return std::abs(off) <= 0.5 * pattern.beamwidth ? pattern.main_gain : pattern.back_gain;
        }
    } // namespace detail

    /// Gain of `pattern` mounted at `from` in the direction of `to`.
    inline double directional_gain(const AntennaPattern &pattern, const Point &from, const Point &to)
    {
        if (from == to)
            throw Error("undefined bearing");
        if (pattern.kind == AntennaKind::omni)
            return 1.0;
        return detail::pattern_gain_at_bearing(pattern, std::atan2(to.y - from.y, to.x - from.x));
    }

    /// As directional_gain, but coincident points take the main-lobe gain instead of failing.
    /// The engine uses this so a sample point sitting on a transceiver still has a defined value.
    inline double directional_gain_or_main(const AntennaPattern &pattern, const Point &from, const Point &to)
    {
        if (pattern.kind == AntennaKind::omni)
            return 1.0;
        if (from == to)
            return pattern.main_gain;
        return detail::pattern_gain_at_bearing(pattern, std::atan2(to.y - from.y, to.x - from.x));
    }

} // namespace muse

#endif
