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

#ifndef MUSE_CONSUMPTION_HPP
#define MUSE_CONSUMPTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "summation.hpp"
#include "propagation.hpp"
#include "scenario.hpp"
#include "units.hpp"

namespace muse
{
    /// Power deposited by a transmitter at a point; zero when it is silent in (time, band).
    inline double tx_occupancy_at(const Transmitter &t, const PropagationModel &model, const Point &rho,
                                  std::size_t time, std::size_t band)
    {
        if (!t.activity.active_in(time, band))
            return 0.0;
        return t.tx_power * directional_gain_or_main(t.antenna, t.position, rho) *
               path_gain(model, distance(t.position, rho));
    }

    /// Receiver-imposed bound, back-projected interference, and their difference at one point.
    struct ReceiverOpportunity
    {
        double bound = 0.0;        // largest interferer power at the point the receiver tolerates
        double proportional = 0.0; // existing interference at the receiver, seen from the point
        double opportunity = 0.0;  // bound - proportional; negative means harmful interference
    };

    struct ReceiverPointMetrics
    {
        std::size_t receiver = 0; // flat roster index
        double margin = 0.0;
        ReceiverOpportunity opportunity{};
        double liability = 0.0; // clamped to [0, p_cmax]
    };

    struct PointMetrics
    {
        std::vector<double> received;                // per flat transmitter, W
        double occupancy = 0.0;                      // sum of received plus ambient noise
        std::vector<ReceiverPointMetrics> receivers; // receivers active in the slice
        double net_opportunity = 0.0;                // unclamped, never above p_max - occupancy
    };

    struct CellMetrics
    {
        Cell cell{};
        double occupancy = 0.0;       // omega
        double opportunity = 0.0;     // gamma, clamped to [0, p_cmax - omega]
        double raw_opportunity = 0.0; // net opportunity at the sample point
        double liability = 0.0;       // phi = p_cmax - (omega + gamma)
        std::vector<double> tx_occupancy; // per flat transmitter
        std::vector<double> rx_liability; // per flat receiver, zero when inactive
        std::vector<std::size_t> harmful_interference; // receivers with negative opportunity at their own position
    };

    // Occupancy, opportunity and liability of one unit-spectrum-space without the per-entity breakdown.
    struct CellSummary
    {
        std::size_t region_index = 0;
        std::size_t time_index = 0;
        std::size_t band_index = 0;
        Point sample_point{};
        double occupancy = 0.0;
        double opportunity = 0.0;
        double raw_opportunity = 0.0;
        double liability = 0.0;
    };

    struct EntityTotal
    {
        std::string id;
        double value = 0.0;
    };

    struct HarmfulInterference
    {
        std::string receiver;
        std::size_t time_index = 0;
        std::size_t band_index = 0;
    };

    struct ConsumptionReport
    {
        double total = 0.0;
        double utilized = 0.0;
        double forbidden = 0.0;
        double available = 0.0;
        std::vector<EntityTotal> transmitters; // Omega per transmitter, roster order
        std::vector<EntityTotal> receivers;    // Phi per receiver, roster order
        double conservation_residual = 0.0;    // |utilized + forbidden + available - total| / total
        std::size_t regions = 0;
        std::size_t time_quanta = 0;
        std::size_t bands = 0;
        double hex_side = 0.0;
        std::vector<HarmfulInterference> harmful;
    };

    class ConsumptionEngine
    {
    public:
        explicit ConsumptionEngine(RFSystem sys)
            : sys_(std::move(sys)), lattice_(sys_.grid), roster_(make_roster(sys_))
        {
            if (sys_.grid.horizon < 1 || sys_.grid.bands.empty())
                throw ValidationError("degenerate grid");
            place_transceivers();
            build_slices();
        }

        // The roster points into sys_, so copies would dangle.
        ConsumptionEngine(const ConsumptionEngine &) = delete;
        ConsumptionEngine &operator=(const ConsumptionEngine &) = delete;

        const RFSystem &system() const { return sys_; }
        const HexLattice &lattice() const { return lattice_; }
        const Roster &roster() const { return roster_; }
        std::size_t slice_count() const { return slices_.size(); }

        /// Transceiver positions in use, after worst-case relocation when enabled.
        const std::vector<Point> &transmitter_positions() const { return tx_pos_; }
        const std::vector<Point> &receiver_positions() const { return rx_pos_; }

        PropagationModel band_model(std::size_t band) const
        {
            const auto &b = sys_.grid.bands.at(band);
            return b.alpha ? sys_.propagation.with_alpha(*b.alpha) : sys_.propagation;
        }

        double noise_at(const Point &p) const
        {
            if (sys_.params.noise_overrides.empty())
                return sys_.params.ambient_noise;
            const auto region = lattice_.locate(p);
            return region ? sys_.params.noise_in_region(*region) : sys_.params.ambient_noise;
        }

        double tx_occupancy_at(std::size_t tx, const Point &rho, std::size_t time, std::size_t band) const
        {
            const Transmitter &t = *roster_.transmitters.at(tx).tx;
            if (!t.activity.active_in(time, band))
                return 0.0;
            return t.tx_power * directional_gain_or_main(t.antenna, tx_pos_[tx], rho) *
                   path_gain(band_model(band), distance(tx_pos_[tx], rho));
        }

        double aggregate_occupancy_at(const Point &rho, std::size_t time, std::size_t band) const
        {
            const Slice &s = slice(time, band);
            double sum = 0.0;
            for (const auto &t : s.tx)
                sum += occupancy_of(s, t, rho);
            return sum + noise_at(rho);
        }

        /// Serving power over beta minus local noise, or the declared margin. May be negative.
        double interference_margin(std::size_t rx, std::size_t time, std::size_t band) const
        {
            return margin_for(rx, time, band);
        }

        /// Interference power at the receiver from everything but its serving transmitter.
        double interference_at_receiver(std::size_t rx, std::size_t time, std::size_t band) const
        {
            const Slice &s = slice(time, band);
            return interference_for(s, rx);
        }

        /// Signal over noise plus interference at the receiver, linear.
        double receiver_sinr(std::size_t rx, std::size_t time, std::size_t band) const
        {
            const double signal = serving_power(rx, time, band);
            return signal / (noise_at(rx_pos_.at(rx)) + interference_at_receiver(rx, time, band));
        }

        ReceiverOpportunity interference_opportunity(std::size_t rx, const Point &rho, std::size_t time,
                                                     std::size_t band) const
        {
            const Slice &s = slice(time, band);
            for (const auto &r : s.rx)
                if (r.index == rx)
                    return opportunity_of(s, r, rho);
            // Inactive receivers impose nothing; evaluate anyway for diagnostics.
            SliceRx r{rx, rx_pos_.at(rx), &roster_.receivers.at(rx).rx->antenna, margin_for(rx, time, band),
                      interference_for(s, rx)};
            return opportunity_of(s, r, rho);
        }

        double net_opportunity_at(const Point &rho, std::size_t time, std::size_t band) const
        {
            return occupancy_and_opportunity(rho, time, band).second;
        }

        /// {aggregate occupancy, net opportunity} at a point without per-entity detail.
        std::pair<double, double> occupancy_and_opportunity(const Point &rho, std::size_t time, std::size_t band) const
        {
            return evaluate(slice(time, band), rho, noise_at(rho), ignore_tx, ignore_rx);
        }

        PointMetrics point_metrics(const Point &rho, std::size_t time, std::size_t band) const
        {
            const Slice &s = slice(time, band);
            PointMetrics m;
            m.received.assign(roster_.transmitters.size(), 0.0);
            double sum = 0.0;
            for (const auto &t : s.tx)
            {
                m.received[t.index] = occupancy_of(s, t, rho);
                sum += m.received[t.index];
            }
            m.occupancy = sum + noise_at(rho);
            double net = sys_.params.p_max - m.occupancy;
            for (const auto &r : s.rx)
            {
                ReceiverPointMetrics rm;
                rm.receiver = r.index;
                rm.margin = r.margin;
                rm.opportunity = opportunity_of(s, r, rho);
                rm.liability = receiver_liability(m.occupancy, rm.opportunity.opportunity);
                net = std::min(net, rm.opportunity.opportunity);
                m.receivers.push_back(rm);
            }
            m.net_opportunity = net;
            return m;
        }

        CellMetrics cell_metrics(const Cell &cell) const
        {
            const Slice &s = slice(cell.time_index, cell.band_index);
            CellMetrics c;
            c.cell = cell;
            c.tx_occupancy.assign(roster_.transmitters.size(), 0.0);
            c.rx_liability.assign(roster_.receivers.size(), 0.0);
            const double noise = sys_.params.noise_in_region(cell.region_index);
            const auto [pbar, raw] = evaluate(s, cell.sample_point, noise,
                                              [&](const SliceTx &t, double w) { c.tx_occupancy[t.index] = w; },
                                              [&](const SliceRx &r, double liability) { c.rx_liability[r.index] = liability; });
            const auto v = finish(pbar, raw);
            c.occupancy = v.occupancy;
            c.opportunity = v.opportunity;
            c.raw_opportunity = v.raw_opportunity;
            c.liability = v.liability;
            for (const auto &r : s.rx)
                if (r.margin - r.interference < 0.0)
                    c.harmful_interference.push_back(r.index);
            return c;
        }

        Cell make_cell(std::size_t region, std::size_t time, std::size_t band) const
        {
            return {region, time, band, muse::sample_point(sys_.grid, lattice_, region)};
        }

        /// Every cell in region-major, time, band order.
        std::vector<CellSummary> consumption_map() const
        {
            const std::size_t T = sys_.grid.horizon;
            const std::size_t B = sys_.grid.band_count();
            const std::size_t regions = lattice_.size();
            std::vector<CellSummary> out(regions * T * B);
            const std::size_t chunks = (regions + chunk_regions - 1) / chunk_regions;
            parallel_for(chunks, [&](std::size_t chunk)
            {
                const std::size_t lo = chunk * chunk_regions;
                const std::size_t hi = std::min(regions, lo + chunk_regions);
                for (std::size_t region = lo; region < hi; ++region)
                {
                    const Point rho = muse::sample_point(sys_.grid, lattice_, region);
                    const double noise = sys_.params.noise_in_region(region);
                    for (std::size_t t = 0; t < T; ++t)
                        for (std::size_t b = 0; b < B; ++b)
                        {
                            const auto [pbar, raw] = evaluate(slice(t, b), rho, noise, ignore_tx, ignore_rx);
                            CellSummary v = finish(pbar, raw);
                            v.region_index = region;
                            v.time_index = t;
                            v.band_index = b;
                            v.sample_point = rho;
                            out[cell_index(sys_.grid, region, t, b)] = v;
                        }
                }
            });
            return out;
        }

        ConsumptionReport system_report() const
        {
            const std::size_t T = sys_.grid.horizon;
            const std::size_t B = sys_.grid.band_count();
            const std::size_t regions = lattice_.size();
            const std::size_t ntx = roster_.transmitters.size();
            const std::size_t nrx = roster_.receivers.size();
            const std::size_t chunks = (regions + chunk_regions - 1) / chunk_regions;

            struct Partial
            {
                CompensatedSum omega, gamma, phi;
                std::vector<CompensatedSum> tx, rx;
            };
            // Fixed work decomposition (slice x region chunk) merged in index order keeps the
            // totals bitwise identical for any thread count.
            std::vector<Partial> partials(slices_.size() * chunks);
            parallel_for(partials.size(), [&](std::size_t item)
            {
                const std::size_t si = item / chunks;
                const std::size_t chunk = item % chunks;
                const Slice &s = slices_[si];
                Partial &p = partials[item];
                p.tx.resize(ntx);
                p.rx.resize(nrx);
                const std::size_t lo = chunk * chunk_regions;
                const std::size_t hi = std::min(regions, lo + chunk_regions);
                for (std::size_t region = lo; region < hi; ++region)
                {
                    const Point rho = muse::sample_point(sys_.grid, lattice_, region);
                    const auto [pbar, raw] = evaluate(s, rho, sys_.params.noise_in_region(region),
                                                      [&](const SliceTx &t, double w) { p.tx[t.index].add(w); },
                                                      [&](const SliceRx &r, double l) { p.rx[r.index].add(l); });
                    const CellSummary v = finish(pbar, raw);
                    p.omega.add(v.occupancy);
                    p.gamma.add(v.opportunity);
                    p.phi.add(v.liability);
                }
            });

            CompensatedSum omega, gamma, phi;
            std::vector<CompensatedSum> tx(ntx), rx(nrx);
            for (const auto &p : partials)
            {
                omega.merge(p.omega);
                gamma.merge(p.gamma);
                phi.merge(p.phi);
                for (std::size_t i = 0; i < ntx; ++i)
                    tx[i].merge(p.tx[i]);
                for (std::size_t i = 0; i < nrx; ++i)
                    rx[i].merge(p.rx[i]);
            }

            ConsumptionReport rep;
            rep.regions = regions;
            rep.time_quanta = T;
            rep.bands = B;
            rep.hex_side = sys_.grid.hex_side;
            rep.total = sys_.params.p_cmax() * static_cast<double>(regions * T * B);
            rep.utilized = omega.value();
            rep.available = gamma.value();
            rep.forbidden = phi.value();
            rep.conservation_residual =
                std::abs(rep.utilized + rep.forbidden + rep.available - rep.total) / rep.total;
            for (std::size_t i = 0; i < ntx; ++i)
                rep.transmitters.push_back({roster_.transmitters[i].tx->id, tx[i].value()});
            for (std::size_t i = 0; i < nrx; ++i)
                rep.receivers.push_back({roster_.receivers[i].rx->id, rx[i].value()});
            for (std::size_t t = 0; t < T; ++t)
                for (std::size_t b = 0; b < B; ++b)
                    for (const auto &r : slice(t, b).rx)
                        if (r.margin - r.interference < 0.0)
                            rep.harmful.push_back({roster_.receivers[r.index].rx->id, t, b});
            return rep;
        }

        /// Spectrum consumed by an entity: sum of its transmitters' Omega and receivers' Phi.
        double entity_consumption(const EntitySet &set, const ConsumptionReport &rep) const
        {
            double sum = 0.0;
            for (auto i : set.transmitters)
                sum += rep.transmitters.at(i).value;
            for (auto i : set.receivers)
                sum += rep.receivers.at(i).value;
            return sum;
        }

        double entity_consumption(const EntityQuery &query) const
        {
            return entity_consumption(entity_selector(sys_, query), system_report());
        }

    private:
        static constexpr std::size_t chunk_regions = 1024;

        struct SliceTx
        {
            std::size_t index = 0;
            Point pos{};
            double power = 0.0;
            const AntennaPattern *antenna = nullptr;
        };

        struct SliceRx
        {
            std::size_t index = 0;
            Point pos{};
            const AntennaPattern *antenna = nullptr;
            double margin = 0.0;
            double interference = 0.0;
        };

        struct Slice
        {
            PropagationModel model{};
            std::vector<SliceTx> tx;
            std::vector<SliceRx> rx;
        };

        static constexpr auto ignore_tx = [](const SliceTx &, double) {};
        static constexpr auto ignore_rx = [](const SliceRx &, double) {};

        const Slice &slice(std::size_t time, std::size_t band) const
        {
            if (time >= sys_.grid.horizon || band >= sys_.grid.band_count())
                throw ValidationError("time or band index outside the grid");
            return slices_[time * sys_.grid.band_count() + band];
        }

        static double occupancy_of(const Slice &s, const SliceTx &t, const Point &rho)
        {
            return t.power * directional_gain_or_main(*t.antenna, t.pos, rho) * path_gain(s.model, distance(t.pos, rho));
        }

        static ReceiverOpportunity opportunity_of(const Slice &s, const SliceRx &r, const Point &rho)
        {
            const double d = distance(rho, r.pos);
            const double rx_gain = directional_gain_or_main(*r.antenna, r.pos, rho);
            ReceiverOpportunity o;
            o.bound = inverse_path_gain_bound(s.model, r.margin, d) / rx_gain;
            o.proportional = r.interference / (path_gain(s.model, d) * rx_gain);
            o.opportunity = o.bound - o.proportional;
            return o;
        }

        double receiver_liability(double occupancy, double opportunity) const
        {
            const double pc = sys_.params.p_cmax();
            return std::clamp(pc - (occupancy + opportunity), 0.0, pc);
        }

        // Returns {aggregate occupancy, net opportunity capped at p_max - occupancy}.
        template <typename OnTx, typename OnRx>
        std::pair<double, double> evaluate(const Slice &s, const Point &rho, double noise, OnTx &&on_tx,
                                           OnRx &&on_rx) const
        {
            double sum = 0.0;
            for (const auto &t : s.tx)
            {
                const double w = occupancy_of(s, t, rho);
                on_tx(t, w);
                sum += w;
            }
            const double pbar = sum + noise;
            double net = sys_.params.p_max - pbar;
            for (const auto &r : s.rx)
            {
                const double opp = opportunity_of(s, r, rho).opportunity;
                on_rx(r, receiver_liability(pbar, opp));
                net = std::min(net, opp);
            }
            return {pbar, net};
        }

        // Occupancy saturates at p_cmax; the rest of the cell splits into opportunity and liability.
        CellSummary finish(double pbar, double raw) const
        {
            const double pc = sys_.params.p_cmax();
            CellSummary v;
            v.occupancy = std::min(pbar, pc);
            const double headroom = pc - v.occupancy;
            v.raw_opportunity = raw;
            v.opportunity = std::clamp(raw, 0.0, headroom);
            v.liability = headroom - v.opportunity;
            return v;
        }

        double serving_power(std::size_t rx, std::size_t time, std::size_t band) const
        {
            const ReceiverRef &ref = roster_.receivers.at(rx);
            const RFLink &link = sys_.networks[ref.network].links[ref.link];
            const Transmitter *t = link.transmitter();
            if (!t || !t->activity.active_in(time, band))
                return 0.0;
            const std::size_t ti = transmitter_index(ref.network, ref.link);
            const Point tp = tx_pos_[ti];
            const Point rp = rx_pos_[rx];
            return t->tx_power * directional_gain_or_main(t->antenna, tp, rp) *
                   path_gain(band_model(band), distance(tp, rp)) * directional_gain_or_main(ref.rx->antenna, rp, tp);
        }

        double margin_for(std::size_t rx, std::size_t time, std::size_t band) const
        {
            const ReceiverRef &ref = roster_.receivers.at(rx);
            if (ref.rx->interference_margin)
                return *ref.rx->interference_margin;
            if (!sys_.networks[ref.network].links[ref.link].transmitter())
                throw ValidationError("receiver " + ref.rx->id +
                                      " has no serving signal and no explicit interference margin");
            return serving_power(rx, time, band) / ref.rx->beta - noise_at(rx_pos_[rx]);
        }

        double interference_for(const Slice &s, std::size_t rx) const
        {
            const ReceiverRef &ref = roster_.receivers.at(rx);
            const bool orthogonal = sys_.networks[ref.network].orthogonal;
            const Point rp = rx_pos_[rx];
            double sum = 0.0;
            for (const auto &t : s.tx)
            {
                const TransmitterRef &tref = roster_.transmitters[t.index];
                if (tref.network == ref.network && tref.link == ref.link)
                    continue; // serving transmitter
                if (orthogonal && tref.network == ref.network)
                    continue;
                sum += t.power * directional_gain_or_main(*t.antenna, t.pos, rp) *
                       path_gain(s.model, distance(t.pos, rp)) * directional_gain_or_main(ref.rx->antenna, rp, t.pos);
            }
            return sum;
        }

        std::size_t transmitter_index(std::size_t network, std::size_t link) const
        {
            for (std::size_t i = 0; i < roster_.transmitters.size(); ++i)
                if (roster_.transmitters[i].network == network && roster_.transmitters[i].link == link)
                    return i;
            throw Error("link has no transmitter");
        }

        // Worst case: each transceiver moves to a vertex of its hexagon (farthest from the sample
        // point). Among vertices inside the region, transmitters take the one farthest from their
        // receivers' mean position and receivers the one farthest from their (moved) transmitter,
        // which lowers SINR and so maximises consumption.
        void place_transceivers()
        {
            tx_pos_.clear();
            rx_pos_.clear();
            for (const auto &t : roster_.transmitters)
                tx_pos_.push_back(t.tx->position);
            for (const auto &r : roster_.receivers)
                rx_pos_.push_back(r.rx->position);
            if (!sys_.grid.worst_case_placement)
                return;

            for (std::size_t i = 0; i < roster_.transmitters.size(); ++i)
            {
                const TransmitterRef &ref = roster_.transmitters[i];
                const RFLink &link = sys_.networks[ref.network].links[ref.link];
                std::optional<Point> partner;
                if (!link.receivers.empty())
                {
                    Point m{};
                    for (const auto &r : link.receivers)
                    {
                        m.x += r.position.x;
                        m.y += r.position.y;
                    }
                    m.x /= static_cast<double>(link.receivers.size());
                    m.y /= static_cast<double>(link.receivers.size());
                    partner = m;
                }
                tx_pos_[i] = worst_vertex(ref.tx->position, partner);
            }
            for (std::size_t i = 0; i < roster_.receivers.size(); ++i)
            {
                const ReceiverRef &ref = roster_.receivers[i];
                std::optional<Point> partner;
                if (sys_.networks[ref.network].links[ref.link].transmitter())
                    partner = tx_pos_[transmitter_index(ref.network, ref.link)];
                rx_pos_[i] = worst_vertex(ref.rx->position, partner);
            }
        }

        Point worst_vertex(const Point &p, const std::optional<Point> &partner) const
        {
            const auto region = lattice_.locate(p);
            if (!region)
                return p;
            std::optional<Point> best;
            double best_d = -1.0;
            for (const Point &v : lattice_.vertices(*region))
            {
                if (!detail::inside_region(sys_.grid, v))
                    continue;
                const double d = partner ? distance(v, *partner) : 0.0;
                if (!best || d > best_d + 1e-9)
                {
                    best = v;
                    best_d = d;
                }
            }
            return best.value_or(p);
        }

        void build_slices()
        {
            const std::size_t T = sys_.grid.horizon;
            const std::size_t B = sys_.grid.band_count();
            slices_.assign(T * B, Slice{});
            for (std::size_t t = 0; t < T; ++t)
                for (std::size_t b = 0; b < B; ++b)
                {
                    Slice &s = slices_[t * B + b];
                    s.model = band_model(b);
                    for (std::size_t i = 0; i < roster_.transmitters.size(); ++i)
                    {
                        const Transmitter &tx = *roster_.transmitters[i].tx;
                        if (tx.activity.active_in(t, b))
                            s.tx.push_back({i, tx_pos_[i], tx.tx_power, &tx.antenna});
                    }
                }
            // Margins and interference need every slice's transmitter list first.
            for (std::size_t t = 0; t < T; ++t)
                for (std::size_t b = 0; b < B; ++b)
                {
                    Slice &s = slices_[t * B + b];
                    for (std::size_t i = 0; i < roster_.receivers.size(); ++i)
                    {
                        const Receiver &rx = *roster_.receivers[i].rx;
                        if (!rx.activity.active_in(t, b))
                            continue;
                        s.rx.push_back({i, rx_pos_[i], &rx.antenna, margin_for(i, t, b), interference_for(s, i)});
                    }
                }
        }

        RFSystem sys_;
        HexLattice lattice_;
        Roster roster_;
        std::vector<Point> tx_pos_;
        std::vector<Point> rx_pos_;
        std::vector<Slice> slices_;
    };

    // Convenience wrappers over a one-off engine.

    inline CellMetrics cell_metrics(const RFSystem &sys, const Cell &cell)
    {
        return ConsumptionEngine(sys).cell_metrics(cell);
    }

    inline double entity_consumption(const RFSystem &sys, const EntityQuery &query)
    {
        return ConsumptionEngine(sys).entity_consumption(query);
    }

    inline ConsumptionReport system_report(const RFSystem &sys) { return ConsumptionEngine(sys).system_report(); }

} // namespace muse

#endif
