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

#ifndef MUSE_TESTS_SUPPORT_HPP
#define MUSE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <muse/muse.hpp>

namespace muse::testkit
{
    inline bool close_rel(double a, double b, double rel)
    {
        if (a == b)
            return true;
        return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
    }

    // Hand-rolled scenario generator. Every system it returns passes validate_system.
    struct RandomSpec
    {
        double width = 4300.0;
        double height = 3700.0;
        double hex_side = 100.0;
        std::size_t max_tx = 10;
        std::size_t max_rx = 10;
        std::size_t max_time = 1;
        std::size_t max_bands = 1;
        bool sectors = true;
        bool activity = true;
        bool noise_overrides = false;
    };

    class Generator
    {
    public:
        explicit Generator(std::uint64_t seed) : rng_(seed) {}

        double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
        std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
        bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
        std::mt19937_64 &rng() { return rng_; }

        Point position(const GridSpec &g) { return {uniform(0.0, g.region_width), uniform(0.0, g.region_height)}; }

        AntennaPattern antenna(bool sectors)
        {
            if (!sectors || coin(0.6))
                return AntennaPattern::omni();
            return AntennaPattern::sector(uniform(-std::numbers::pi, std::numbers::pi), uniform(0.3, 3.0),
                                          db_to_linear(uniform(0.0, 12.0)), db_to_linear(uniform(-25.0, 0.0)));
        }

        Activity activity(const GridSpec &g, bool enabled)
        {
            Activity a;
            if (!enabled || coin(0.5))
                return a;
            for (std::size_t t = 0; t < g.horizon; ++t)
                if (coin(0.7))
                    a.intervals.push_back(t);
            for (std::size_t b = 0; b < g.band_count(); ++b)
                if (coin(0.7))
                    a.bands.push_back(b);
            if (a.intervals.empty())
                a.intervals.push_back(index(0, g.horizon - 1));
            if (a.bands.empty())
                a.bands.push_back(index(0, g.band_count() - 1));
            return a;
        }

        Transmitter transmitter(const GridSpec &g, const std::string &id, bool sectors)
        {
            Transmitter t;
            t.id = id;
            t.position = position(g);
            t.tx_power = dbm_to_watts(uniform(-30.0, 30.0));
            t.antenna = antenna(sectors);
            return t;
        }

        Receiver receiver(const GridSpec &g, const std::string &id, const Point &near, bool sectors)
        {
            Receiver r;
            r.id = id;
            const double radius = uniform(10.0, 1500.0);
            const double angle = uniform(0.0, 2.0 * std::numbers::pi);
            r.position = {std::clamp(near.x + radius * std::cos(angle), 0.0, g.region_width),
                          std::clamp(near.y + radius * std::sin(angle), 0.0, g.region_height)};
            r.beta = db_to_linear(uniform(0.0, 15.0));
            r.antenna = antenna(sectors);
            return r;
        }

        RFSystem system(const RandomSpec &spec)
        {
            RFSystem sys;
            sys.grid.region_width = spec.width;
            sys.grid.region_height = spec.height;
            sys.grid.hex_side = spec.hex_side;
            sys.grid.horizon = index(1, spec.max_time);
            sys.grid.bands.clear();
            const std::size_t nb = index(1, spec.max_bands);
            for (std::size_t b = 0; b < nb; ++b)
            {
                BandSpec band;
                band.center_hz = 500e6 + 10e6 * static_cast<double>(b);
                if (coin(0.3))
                    band.alpha = uniform(2.5, 4.5);
                sys.grid.bands.push_back(band);
            }
            sys.propagation.alpha = uniform(2.5, 4.5);
            if (spec.noise_overrides)
            {
                const HexLattice lattice(sys.grid);
                for (int k = 0; k < 3; ++k)
                    sys.params.noise_overrides[index(0, lattice.size() - 1)] = dbm_to_watts(uniform(-115.0, -95.0));
            }

            const std::size_t ntx = index(0, spec.max_tx);
            const std::size_t nrx_budget = index(ntx == 0 ? 0 : ntx, std::max(spec.max_rx, ntx));
            std::size_t nrx = 0, serial = 0;
            const std::size_t nnet = index(1, 3);
            for (std::size_t n = 0; n < nnet; ++n)
                sys.networks.push_back({"net" + std::to_string(n), coin(0.3), {}});

            // Each transmitter gets at least one receiver; spare receivers go to receive-only links
            // or join existing links.
            for (std::size_t i = 0; i < ntx; ++i)
            {
                RFLink link;
                link.id = "link" + std::to_string(serial++);
                Transmitter t = transmitter(sys.grid, "tx" + std::to_string(i), spec.sectors);
                t.activity = activity(sys.grid, spec.activity);
                Receiver r = receiver(sys.grid, "rx" + std::to_string(nrx++), t.position, spec.sectors);
                r.activity = t.activity; // co-active with its transmitter
                if (coin(0.1))
                    r.interference_margin = dbm_to_watts(uniform(-110.0, -80.0));
                link.receivers.push_back(r);
                link.transmitters.push_back(t);
                sys.networks[index(0, nnet - 1)].links.push_back(link);
            }
            while (nrx < nrx_budget)
            {
                auto &net = sys.networks[index(0, nnet - 1)];
                RFLink *host = nullptr;
                for (auto &l : net.links)
                    if (!l.transmitters.empty() && coin(0.5))
                        host = &l;
                if (host)
                {
                    Receiver r = receiver(sys.grid, "rx" + std::to_string(nrx++), host->transmitters[0].position,
                                          spec.sectors);
                    r.activity = host->transmitters[0].activity;
                    host->receivers.push_back(r);
                }
                else
                {
                    RFLink link;
                    link.id = "link" + std::to_string(serial++);
                    Receiver r = receiver(sys.grid, "rx" + std::to_string(nrx++), position(sys.grid), spec.sectors);
                    r.interference_margin = dbm_to_watts(uniform(-110.0, -70.0));
                    r.activity = activity(sys.grid, spec.activity);
                    link.receivers.push_back(r);
                    net.links.push_back(link);
                }
            }
            return sys;
        }

    private:
        std::mt19937_64 rng_;
    };

    inline RFSystem study_region(double hex_side = 100.0)
    {
        RFSystem sys;
        sys.grid.region_width = 4300.0;
        sys.grid.region_height = 3700.0;
        sys.grid.hex_side = hex_side;
        return sys;
    }

    /// One omni link: transmitter at tx, receiver at rx.
    inline RFSystem single_link(Point tx, double tx_dbm, Point rx, double beta_db)
    {
        RFSystem sys = study_region();
        Transmitter t;
        t.id = "tx";
        t.position = tx;
        t.tx_power = dbm_to_watts(tx_dbm);
        Receiver r;
        r.id = "rx";
        r.position = rx;
        r.beta = db_to_linear(beta_db);
        sys.networks.push_back({"net", false, {RFLink{"link", {t}, {r}}}});
        return sys;
    }

    inline const Point probe_point{2250.0, 1800.0};

    // ------------------------------------------------------------------------
    // Brute-force reference for a single cell. Shares only the data types with the engine.

    namespace oracle
    {
        inline double gain(double alpha, double d0, double d)
        {
            if (d <= d0)
                return 1.0;
            return std::exp(-alpha * std::log(d / d0));
        }

        inline double antenna_gain(const AntennaPattern &a, const Point &from, const Point &to)
        {
            if (a.kind == AntennaKind::omni)
                return a.main_gain;
            if (from.x == to.x && from.y == to.y)
                return a.main_gain;
            double off = std::atan2(to.y - from.y, to.x - from.x) - a.boresight;
            while (off > std::numbers::pi)
                off -= 2.0 * std::numbers::pi;
            while (off < -std::numbers::pi)
                off += 2.0 * std::numbers::pi;
            return std::abs(off) <= a.beamwidth / 2.0 ? a.main_gain : a.back_gain;
        }

        inline bool active(const Activity &a, std::size_t t, std::size_t b)
        {
            const bool tt = a.intervals.empty() || std::find(a.intervals.begin(), a.intervals.end(), t) != a.intervals.end();
            const bool bb = a.bands.empty() || std::find(a.bands.begin(), a.bands.end(), b) != a.bands.end();
            return tt && bb;
        }

        // Region whose centroid is nearest, by exhaustive search.
        inline std::size_t region_of(const GridSpec &g, const Point &p)
        {
            const double s = g.hex_side;
            const double w = std::sqrt(3.0) * s;
            const HexLattice lattice(g);
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t row = 0; row < lattice.rows(); ++row)
                for (std::size_t col = 0; col < lattice.columns(); ++col)
                {
                    const double cx = static_cast<double>(col) * w + (row % 2 ? w / 2.0 : 0.0);
                    const double cy = static_cast<double>(row) * 1.5 * s;
                    const double d = std::hypot(p.x - cx, p.y - cy);
                    if (d < best_d - 1e-9)
                    {
                        best_d = d;
                        best = row * lattice.columns() + col;
                    }
                }
            return best;
        }

        inline double noise(const RFSystem &sys, const Point &p)
        {
            if (sys.params.noise_overrides.empty())
                return sys.params.ambient_noise;
            const auto it = sys.params.noise_overrides.find(region_of(sys.grid, p));
            return it == sys.params.noise_overrides.end() ? sys.params.ambient_noise : it->second;
        }

        struct Result
        {
            double occupancy = 0.0;
            double opportunity = 0.0;
            double raw_opportunity = 0.0;
            double liability = 0.0;
            std::vector<double> tx_occupancy;
            std::vector<double> rx_liability;
        };

        inline Result cell(const RFSystem &sys, std::size_t region, std::size_t t, std::size_t b, const Point &rho)
        {
            const double alpha = sys.grid.bands[b].alpha.value_or(sys.propagation.alpha);
            const double d0 = sys.propagation.reference_distance;
            const double pmax = sys.params.p_max;
            const double pc = sys.params.p_max - sys.params.p_min;
            const auto wnoise = [&](std::size_t r)
            {
                const auto it = sys.params.noise_overrides.find(r);
                return it == sys.params.noise_overrides.end() ? sys.params.ambient_noise : it->second;
            };

            struct Tx
            {
                const Transmitter *t;
                std::size_t net, link;
            };
            struct Rx
            {
                const Receiver *r;
                std::size_t net, link;
            };
            std::vector<Tx> txs;
            std::vector<Rx> rxs;
            for (std::size_t n = 0; n < sys.networks.size(); ++n)
                for (std::size_t l = 0; l < sys.networks[n].links.size(); ++l)
                {
                    for (const auto &x : sys.networks[n].links[l].transmitters)
                        txs.push_back({&x, n, l});
                    for (const auto &x : sys.networks[n].links[l].receivers)
                        rxs.push_back({&x, n, l});
                }

            Result out;
            out.tx_occupancy.assign(txs.size(), 0.0);
            out.rx_liability.assign(rxs.size(), 0.0);
            double pbar = wnoise(region);
            for (std::size_t i = 0; i < txs.size(); ++i)
            {
                const Transmitter &x = *txs[i].t;
                if (!active(x.activity, t, b))
                    continue;
                out.tx_occupancy[i] =
                    x.tx_power * antenna_gain(x.antenna, x.position, rho) * gain(alpha, d0, distance(x.position, rho));
                pbar += out.tx_occupancy[i];
            }

            double net = pmax - pbar;
            for (std::size_t j = 0; j < rxs.size(); ++j)
            {
                const Receiver &r = *rxs[j].r;
                if (!active(r.activity, t, b))
                    continue;
                double serving = 0.0, interference = 0.0;
                for (const auto &x : txs)
                {
                    if (!active(x.t->activity, t, b))
                        continue;
                    const double rec = x.t->tx_power * antenna_gain(x.t->antenna, x.t->position, r.position) *
                                       gain(alpha, d0, distance(x.t->position, r.position)) *
                                       antenna_gain(r.antenna, r.position, x.t->position);
                    if (x.net == rxs[j].net && x.link == rxs[j].link)
                        serving = rec;
                    else if (!(sys.networks[x.net].orthogonal && x.net == rxs[j].net))
                        interference += rec;
                }
                const double margin = r.interference_margin ? *r.interference_margin
                                                             : serving / r.beta - noise(sys, r.position);
                const double link_gain = gain(alpha, d0, distance(rho, r.position)) *
                                         antenna_gain(r.antenna, r.position, rho);
                const double opp = margin / link_gain - interference / link_gain;
                out.rx_liability[j] = std::clamp(pc - (pbar + opp), 0.0, pc);
                net = std::min(net, opp);
            }

            out.raw_opportunity = net;
            out.occupancy = std::min(pbar, pc);
            out.opportunity = std::clamp(net, 0.0, pc - out.occupancy);
            out.liability = pc - out.occupancy - out.opportunity;
            return out;
        }
    } // namespace oracle

    // Independent lattice centroid: pointy-top rows, odd rows shifted half a hexagon width.
    inline Point centroid(const GridSpec &g, std::size_t columns, std::size_t region)
    {
        const double w = std::sqrt(3.0) * g.hex_side;
        const std::size_t row = region / columns;
        const std::size_t col = region % columns;
        return {static_cast<double>(col) * w + (row % 2 ? w / 2.0 : 0.0), static_cast<double>(row) * 1.5 * g.hex_side};
    }

} // namespace muse::testkit

#endif
