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

#ifndef MUSE_SCENARIO_HPP
#define MUSE_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "antenna.hpp"
#include "error.hpp"
#include "grid.hpp"
#include "propagation.hpp"
#include "units.hpp"

namespace muse
{
    struct SystemParams
    {
        double p_max = 1.0;                          // W, regulatory ceiling at any point
        double p_min = 1e-23;                        // W, floor below the thermal noise
        double ambient_noise = dbm_to_watts(-106.0); // W per band
        std::map<std::size_t, double> noise_overrides; // region index -> W

        double p_cmax() const { return p_max - p_min; }

        double noise_in_region(std::size_t region) const
        {
            const auto it = noise_overrides.find(region);
            return it == noise_overrides.end() ? ambient_noise : it->second;
        }

        friend bool operator==(const SystemParams &, const SystemParams &) = default;
    };

    // Time quanta and bands in which a transceiver operates. An empty list means all of them.
    struct Activity
    {
        std::vector<std::size_t> intervals;
        std::vector<std::size_t> bands;

        bool active_in(std::size_t time, std::size_t band) const
        {
            const auto has = [](const std::vector<std::size_t> &v, std::size_t x)
            { return v.empty() || std::find(v.begin(), v.end(), x) != v.end(); };
            return has(intervals, time) && has(bands, band);
        }

        friend bool operator==(const Activity &, const Activity &) = default;
    };

    struct Transmitter
    {
        std::string id;
        Point position{};
        double tx_power = 1e-3; // W
        AntennaPattern antenna{};
        Activity activity{};

        friend bool operator==(const Transmitter &, const Transmitter &) = default;
    };

    struct Receiver
    {
        std::string id;
        Point position{};
        double beta = 2.0; // minimum SINR, linear
        AntennaPattern antenna{};
        std::optional<std::string> serving_link;
        Activity activity{};
        // Required for receive-only links, which have no serving signal to derive a margin from.
        // When set on a served receiver it takes precedence over the derived value.
        std::optional<double> interference_margin; // W

        friend bool operator==(const Receiver &, const Receiver &) = default;
    };

    struct RFLink
    {
        std::string id;
        std::vector<Transmitter> transmitters; // zero or one in a valid system
        std::vector<Receiver> receivers;

        const Transmitter *transmitter() const { return transmitters.empty() ? nullptr : &transmitters.front(); }

        friend bool operator==(const RFLink &, const RFLink &) = default;
    };

    struct RFNetwork
    {
        std::string id;
        bool orthogonal = false; // transmitters of this network do not interfere with its own receivers
        std::vector<RFLink> links;

        friend bool operator==(const RFNetwork &, const RFNetwork &) = default;
    };

    struct RFSystem
    {
        SystemParams params{};
        PropagationModel propagation{};
        GridSpec grid{};
        std::vector<RFNetwork> networks;

        friend bool operator==(const RFSystem &, const RFSystem &) = default;
    };

    /// p_cmax * A * T * B, with each unit region weighing one.
    inline double total_spectrum_space(const GridSpec &spec, const SystemParams &params)
    {
        const HexLattice lattice(spec);
        return params.p_cmax() * static_cast<double>(lattice.size()) * static_cast<double>(spec.horizon) *
               static_cast<double>(spec.band_count());
    }

    // ------------------------------------------------------------------------
    // Flat enumeration of transceivers. Order: networks, then links, then transmitters
    // before receivers of each link. The engine and the entity selector share it.

    struct TransmitterRef
    {
        std::size_t network = 0;
        std::size_t link = 0;
        const Transmitter *tx = nullptr;
    };

    struct ReceiverRef
    {
        std::size_t network = 0;
        std::size_t link = 0;
        const Receiver *rx = nullptr;
    };

    struct Roster
    {
        std::vector<TransmitterRef> transmitters;
        std::vector<ReceiverRef> receivers;
    };

    inline Roster make_roster(const RFSystem &sys)
    {
        Roster r;
        for (std::size_t n = 0; n < sys.networks.size(); ++n)
            for (std::size_t l = 0; l < sys.networks[n].links.size(); ++l)
            {
                const RFLink &link = sys.networks[n].links[l];
                for (const auto &t : link.transmitters)
                    r.transmitters.push_back({n, l, &t});
                for (const auto &x : link.receivers)
                    r.receivers.push_back({n, l, &x});
            }
        return r;
    }

    // ------------------------------------------------------------------------
    // Validation

    struct Violation
    {
        std::string entity; // id of the offending item, empty for system-wide
        std::string message;
    };

    struct ValidationReport
    {
        std::vector<Violation> violations;

        bool valid() const { return violations.empty(); }
    };

    namespace detail
    {
        inline bool inside_region(const GridSpec &g, const Point &p)
        {
            constexpr double tol = 1e-9;
            return p.x >= -tol && p.y >= -tol && p.x <= g.region_width + tol && p.y <= g.region_height + tol;
        }

        inline void check_antenna(const AntennaPattern &a, const std::string &id, std::vector<Violation> &out)
        {
            if (a.kind != AntennaKind::sector)
                return;
            if (!(a.main_gain >= 1.0))
                out.push_back({id, "antenna main gain must be >= 1"});
            if (!(a.back_gain > 0.0) || a.back_gain > a.main_gain)
                out.push_back({id, "antenna back gain must be in (0, main gain]"});
            if (!(a.beamwidth > 0.0))
                out.push_back({id, "antenna beamwidth must be positive"});
        }

        inline void check_activity(const Activity &a, const GridSpec &g, const std::string &id, std::vector<Violation> &out)
        {
            for (auto t : a.intervals)
                if (t >= g.horizon)
                    out.push_back({id, "active interval " + std::to_string(t) + " beyond horizon"});
            for (auto b : a.bands)
                if (b >= g.band_count())
                    out.push_back({id, "band " + std::to_string(b) + " not in grid"});
        }

        inline std::vector<std::size_t> expand(const std::vector<std::size_t> &v, std::size_t n)
        {
            if (!v.empty())
                return v;
            std::vector<std::size_t> all(n);
            for (std::size_t i = 0; i < n; ++i)
                all[i] = i;
            return all;
        }
    } // namespace detail

    /// Lists every invariant breach; an empty report means the system is valid.
    inline ValidationReport validate_system(const RFSystem &sys)
    {
        std::vector<Violation> out;
        const auto &p = sys.params;
        if (!(p.p_min > 0.0))
            out.push_back({"", "p_min must be positive"});
        if (!(p.p_max > p.p_min))
            out.push_back({"", "p_max must exceed p_min"});
        if (!(p.ambient_noise > 0.0))
            out.push_back({"", "ambient noise must be positive"});
        for (const auto &[region, w] : p.noise_overrides)
            if (!(w > 0.0))
                out.push_back({"", "noise override for region " + std::to_string(region) + " must be positive"});

        if (!(sys.propagation.alpha > 0.0))
            out.push_back({"", "path-loss exponent must be positive"});
        if (!(sys.propagation.reference_distance > 0.0))
            out.push_back({"", "reference distance must be positive"});

        const GridSpec &g = sys.grid;
        if (!(g.hex_side > 0.0))
            out.push_back({"", "hex side must be positive"});
        if (g.horizon < 1)
            out.push_back({"", "horizon must be at least one time quantum"});
        if (g.bands.empty())
            out.push_back({"", "grid needs at least one band"});
        for (const auto &b : g.bands)
            if (b.alpha && !(*b.alpha > 0.0))
                out.push_back({"", "band path-loss exponent must be positive"});
        try
        {
            (void)tessellate(g);
        }
        catch (const Error &e)
        {
            out.push_back({"", e.what()});
        }

        std::set<std::string> ids;
        const auto claim = [&](const std::string &id)
        {
            if (id.empty())
                out.push_back({id, "empty identifier"});
            else if (!ids.insert(id).second)
                out.push_back({id, "duplicate identifier"});
        };

        for (const auto &net : sys.networks)
        {
            claim(net.id);
            for (const auto &link : net.links)
            {
                claim(link.id);
                if (link.transmitters.size() > 1)
                    out.push_back({link.id, "link has >1 transmitter"});
                if (link.receivers.empty())
                    out.push_back({link.id, "link has no receivers"});
                for (const auto &t : link.transmitters)
                {
                    claim(t.id);
                    if (!(t.tx_power > 0.0) || t.tx_power > p.p_max)
                        out.push_back({t.id, "transmit power outside (0, p_max]"});
                    if (!detail::inside_region(g, t.position))
                        out.push_back({t.id, "position outside the region"});
                    detail::check_antenna(t.antenna, t.id, out);
                    detail::check_activity(t.activity, g, t.id, out);
                }
                for (const auto &r : link.receivers)
                {
                    claim(r.id);
                    if (!(r.beta > 0.0))
                        out.push_back({r.id, "beta must be positive"});
                    if (!detail::inside_region(g, r.position))
                        out.push_back({r.id, "position outside the region"});
                    detail::check_antenna(r.antenna, r.id, out);
                    detail::check_activity(r.activity, g, r.id, out);
                    if (r.serving_link && *r.serving_link != link.id)
                        out.push_back({r.id, "serving link does not match the enclosing link"});

                    const Transmitter *t = link.transmitter();
                    if (!t)
                    {
                        if (!r.interference_margin)
                            out.push_back({r.id, "receive-only receiver needs an explicit interference margin"});
                        else if (!(*r.interference_margin >= 0.0))
                            out.push_back({r.id, "interference margin must be non-negative"});
                        continue;
                    }
                    // Every (time, band) the receiver listens in must carry its serving signal.
                    const auto first_gap = [&]() -> std::optional<std::pair<std::size_t, std::size_t>>
                    {
                        for (auto tq : detail::expand(r.activity.intervals, g.horizon))
                            for (auto b : detail::expand(r.activity.bands, g.band_count()))
                                if (!t->activity.active_in(tq, b))
                                    return std::pair{tq, b};
                        return std::nullopt;
                    }();
                    if (first_gap)
                        out.push_back({r.id, "serving transmitter inactive at time " + std::to_string(first_gap->first) +
                                                 ", band " + std::to_string(first_gap->second)});
                }
            }
        }
        return {std::move(out)};
    }

    // ------------------------------------------------------------------------
    // Entity selection

    /// Names a transceiver, link, or network by id; an empty query is the whole system.
    struct EntityQuery
    {
        std::optional<std::string> id;

        static EntityQuery whole_system() { return {}; }
        static EntityQuery named(std::string id) { return {std::move(id)}; }
    };

    /// Indices into the flat roster.
    struct EntitySet
    {
        std::vector<std::size_t> transmitters;
        std::vector<std::size_t> receivers;

        std::size_t size() const { return transmitters.size() + receivers.size(); }
    };

    inline EntitySet entity_selector(const RFSystem &sys, const EntityQuery &query)
    {
        const Roster roster = make_roster(sys);
        EntitySet set;
        const auto pick = [&](auto &&pred)
        {
            for (std::size_t i = 0; i < roster.transmitters.size(); ++i)
                if (pred(roster.transmitters[i].network, roster.transmitters[i].link, roster.transmitters[i].tx->id))
                    set.transmitters.push_back(i);
            for (std::size_t i = 0; i < roster.receivers.size(); ++i)
                if (pred(roster.receivers[i].network, roster.receivers[i].link, roster.receivers[i].rx->id))
                    set.receivers.push_back(i);
        };

        if (!query.id)
        {
            pick([](std::size_t, std::size_t, const std::string &) { return true; });
            return set;
        }
        const std::string &id = *query.id;
        for (std::size_t n = 0; n < sys.networks.size(); ++n)
        {
            if (sys.networks[n].id == id)
            {
                pick([n](std::size_t net, std::size_t, const std::string &) { return net == n; });
                return set;
            }
            for (std::size_t l = 0; l < sys.networks[n].links.size(); ++l)
                if (sys.networks[n].links[l].id == id)
                {
                    pick([n, l](std::size_t net, std::size_t lk, const std::string &) { return net == n && lk == l; });
                    return set;
                }
        }
        pick([&id](std::size_t, std::size_t, const std::string &tid) { return tid == id; });
        if (set.size() == 0)
            throw ValidationError("no such entity: " + id);
        return set;
    }

} // namespace muse

#endif
