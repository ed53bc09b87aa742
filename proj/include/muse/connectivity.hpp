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

#ifndef MUSE_CONNECTIVITY_HPP
#define MUSE_CONNECTIVITY_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "consumption.hpp"
#include "error.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "propagation.hpp"

namespace muse
{
    struct LinkFeasibility
    {
        bool feasible = false;
        double max_power = 0.0; // W a new transmitter at A may radiate without harming anyone
        double sinr = 0.0;      // linear, at B's sample point
    };

    struct ConnectivityEdge
    {
        std::size_t from = 0; // region index A
        std::size_t to = 0;   // region index B
        std::size_t band = 0;
        LinkFeasibility link{};
    };

    struct ConnectivityMap
    {
        std::size_t time_index = 0;
        double candidate_beta = 1.0;
        // Ordered pairs in row-major order of A, then B ascending, each with one entry per band.
        std::vector<ConnectivityEdge> edges;
        // One per ordered pair, parallel to edges grouped by band: highest-SINR feasible band.
        std::vector<std::optional<std::size_t>> best_band;
        std::size_t bands = 1;

        std::size_t pair_count() const { return best_band.size(); }
    };

    namespace detail
    {
        inline LinkFeasibility candidate_link(const ConsumptionEngine &engine, const Point &a, const Point &b,
                                              double opportunity_at_a, double occupancy_at_b, std::size_t band,
                                              double beta)
        {
            LinkFeasibility f;
            f.max_power = std::clamp(opportunity_at_a, 0.0, engine.system().params.p_max);
            f.sinr = f.max_power * path_gain(engine.band_model(band), distance(a, b)) / occupancy_at_b;
            f.feasible = f.sinr >= beta;
            return f;
        }
    } // namespace detail

    /// Whether a new omni link from A's sample point to B's could close in the band.
    /// The power cap is the net opportunity at A, so no existing receiver is pushed into harmful interference.
    inline LinkFeasibility link_feasibility(const ConsumptionEngine &engine, std::size_t region_a,
                                            std::size_t region_b, std::size_t band, double candidate_beta,
                                            std::size_t time = 0)
    {
        if (!(candidate_beta > 0.0))
            throw ValidationError("candidate beta must be positive");
        if (!engine.lattice().adjacent(region_a, region_b))
            throw ValidationError("cells are not adjacent");
        const GridSpec &g = engine.system().grid;
        const Point a = sample_point(g, engine.lattice(), region_a);
        const Point b = sample_point(g, engine.lattice(), region_b);
        const double opp = engine.occupancy_and_opportunity(a, time, band).second;
        const double occ = engine.occupancy_and_opportunity(b, time, band).first;
        return detail::candidate_link(engine, a, b, opp, occ, band, candidate_beta);
    }

    inline ConnectivityMap build_connectivity_map(const ConsumptionEngine &engine, double candidate_beta,
                                                  std::size_t time = 0)
    {
        if (!(candidate_beta > 0.0))
            throw ValidationError("candidate beta must be positive");
        const GridSpec &g = engine.system().grid;
        if (time >= g.horizon)
            throw ValidationError("time index outside the grid");
        const HexLattice &lat = engine.lattice();
        const std::size_t regions = lat.size();
        const std::size_t B = g.band_count();

        // Occupancy and net opportunity at every sample point, per band.
        std::vector<std::pair<double, double>> at(regions * B);
        parallel_for(regions, [&](std::size_t r)
        {
            const Point p = sample_point(g, lat, r);
            for (std::size_t b = 0; b < B; ++b)
                at[r * B + b] = engine.occupancy_and_opportunity(p, time, b);
        });

        ConnectivityMap map;
        map.time_index = time;
        map.candidate_beta = candidate_beta;
        map.bands = B;
        for (std::size_t a = 0; a < regions; ++a)
        {
            const Point pa = sample_point(g, lat, a);
            for (std::size_t bregion : lat.neighbors(a))
            {
                const Point pb = sample_point(g, lat, bregion);
                std::optional<std::size_t> best;
                double best_sinr = 0.0;
                for (std::size_t band = 0; band < B; ++band)
                {
                    const LinkFeasibility f = detail::candidate_link(engine, pa, pb, at[a * B + band].second,
                                                                     at[bregion * B + band].first, band, candidate_beta);
                    map.edges.push_back({a, bregion, band, f});
                    if (f.feasible && (!best || f.sinr > best_sinr))
                    {
                        best = band;
                        best_sinr = f.sinr;
                    }
                }
                map.best_band.push_back(best);
            }
        }
        return map;
    }

    inline ConnectivityMap build_connectivity_map(const RFSystem &sys, double candidate_beta, std::size_t time = 0)
    {
        return build_connectivity_map(ConsumptionEngine(sys), candidate_beta, time);
    }

} // namespace muse

#endif
