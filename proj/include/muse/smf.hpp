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

#ifndef MUSE_SMF_HPP
#define MUSE_SMF_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "consumption.hpp"
#include "error.hpp"
#include "scenario.hpp"
#include "summation.hpp"
#include "units.hpp"

namespace muse
{
    enum class MapProvenance
    {
        ground_truth,
        implied_by_policy,
        estimated
    };

    // Per-cell opportunity (or any per-cell attribute in watts), in cell_index order.
    struct OpportunityMap
    {
        std::size_t regions = 0;
        std::size_t time_quanta = 1;
        std::size_t bands = 1;
        std::vector<double> values;
        MapProvenance provenance = MapProvenance::ground_truth;

        std::size_t cell_count() const { return regions * time_quanta * bands; }

        bool same_grid(const OpportunityMap &o) const
        {
            return regions == o.regions && time_quanta == o.time_quanta && bands == o.bands &&
                   values.size() == o.values.size();
        }
    };

    inline OpportunityMap opportunity_map(const ConsumptionEngine &engine,
                                          MapProvenance provenance = MapProvenance::ground_truth)
    {
        OpportunityMap m;
        m.regions = engine.lattice().size();
        m.time_quanta = engine.system().grid.horizon;
        m.bands = engine.system().grid.band_count();
        m.provenance = provenance;
        for (const auto &c : engine.consumption_map())
            m.values.push_back(c.opportunity);
        return m;
    }

    inline OpportunityMap opportunity_map(const RFSystem &sys) { return opportunity_map(ConsumptionEngine(sys)); }

    struct SharingSpaces
    {
        double implied_available = 0.0; // sum min(cap, truth)
        double implied_guard = 0.0;     // sum max(0, truth - cap)
        double implied_incursed = 0.0;  // sum max(0, cap - truth)
    };

    struct RecoverySpaces
    {
        double recovered_available = 0.0;  // sum min(truth, estimate)
        double lost_available = 0.0;       // sum max(0, truth - estimate)
        double potentially_incursed = 0.0; // sum max(0, estimate - truth)
    };

    struct ExploitationSpaces
    {
        double exploited_available = 0.0;   // sum min(granted, truth)
        double unexploited_available = 0.0; // sum max(0, truth - granted)
        double incursed = 0.0;              // sum max(0, granted - truth)
    };

    struct SMFReport
    {
        std::vector<double> theta; // signed per-cell attribute, W
        double aggregate = 0.0;    // sum of theta
        double truth_total = 0.0;  // sum of the reference map
        std::optional<SharingSpaces> sharing;
        std::optional<RecoverySpaces> recovery;
        std::optional<ExploitationSpaces> exploitation;
    };

    /// Sum of a per-cell attribute over the grid.
    inline double smf_aggregate(std::span<const double> theta, std::size_t expected_cells)
    {
        if (theta.size() != expected_cells)
            throw ValidationError("grid mismatch: attribute has " + std::to_string(theta.size()) + " cells, grid has " +
                                  std::to_string(expected_cells));
        ExactSum s;
        for (double v : theta)
            s.add(v);
        return s.value();
    }

    inline double smf_aggregate(const OpportunityMap &map) { return smf_aggregate(map.values, map.cell_count()); }

    namespace detail
    {
        // Splits each cell into overlap min(ref, x), shortfall max(0, ref - x) and excess
        // max(0, x - ref) without rounding, so overlap + shortfall == sum(ref) exactly.
        struct ThreeWay
        {
            ExactSum overlap, shortfall, excess, theta, reference;
            std::vector<double> per_cell;
        };

        inline ThreeWay three_way(const OpportunityMap &ref, std::span<const double> other)
        {
            if (other.size() != ref.values.size() || ref.values.size() != ref.cell_count())
                throw ValidationError("grid mismatch");
            ThreeWay w;
            w.per_cell.reserve(other.size());
            for (std::size_t i = 0; i < other.size(); ++i)
            {
                const double t = ref.values[i];
                const double x = other[i];
                w.reference.add(t);
                w.overlap.add(std::min(t, x));
                if (t > x)
                    w.shortfall.add_difference(t, x);
                else if (x > t)
                    w.excess.add_difference(x, t);
                w.theta.add_difference(x, t);
                w.per_cell.push_back(x - t);
            }
            return w;
        }
    } // namespace detail

    /// Recovery section: theta = other - truth per cell.
    inline SMFReport compare_maps(const OpportunityMap &truth, const OpportunityMap &other)
    {
        if (!truth.same_grid(other))
            throw ValidationError("grid mismatch");
        auto w = detail::three_way(truth, other.values);
        SMFReport r;
        r.theta = std::move(w.per_cell);
        r.aggregate = w.theta.value();
        r.truth_total = w.reference.value();
        r.recovery = RecoverySpaces{w.overlap.value(), w.shortfall.value(), w.excess.value()};
        return r;
    }

    /// Sharing section for a per-cell cap in [0, p_cmax]; theta = cap - truth.
    inline SMFReport apply_policy(const OpportunityMap &truth, std::span<const double> cap, double p_cmax)
    {
        for (double c : cap)
            if (!(c >= 0.0 && c <= p_cmax))
                throw ValidationError("policy cap outside [0, p_cmax]");
        auto w = detail::three_way(truth, cap);
        SMFReport r;
        r.theta = std::move(w.per_cell);
        r.aggregate = w.theta.value();
        r.truth_total = w.reference.value();
        r.sharing = SharingSpaces{w.overlap.value(), w.shortfall.value(), w.excess.value()};
        return r;
    }

    /// Policy given as a function of the cell.
    inline SMFReport apply_policy(const OpportunityMap &truth, const std::function<double(std::size_t)> &cap_of_cell,
                                  double p_cmax)
    {
        std::vector<double> cap(truth.values.size());
        for (std::size_t i = 0; i < cap.size(); ++i)
            cap[i] = cap_of_cell(i);
        return apply_policy(truth, cap, p_cmax);
    }

    /// Exploitation section for granted power per cell; theta = granted - truth.
    inline SMFReport exploitation_report(const OpportunityMap &truth, std::span<const double> granted)
    {
        for (double g : granted)
            if (!(g >= 0.0))
                throw ValidationError("granted power must be non-negative");
        auto w = detail::three_way(truth, granted);
        SMFReport r;
        r.theta = std::move(w.per_cell);
        r.aggregate = w.theta.value();
        r.truth_total = w.reference.value();
        r.exploitation = ExploitationSpaces{w.overlap.value(), w.shortfall.value(), w.excess.value()};
        return r;
    }

    // ------------------------------------------------------------------------
    // Sensing-error simulation

    struct SensingErrorModel
    {
        double p_missed_detection = 0.0;
        double false_positive_rate = 0.0; // expected false detections per (time, band) slice
        double false_positive_power = 1e-3; // W, nominal power of a false detection
        double geolocation_sigma = 0.0;   // meters, per axis
        double power_error_sigma = 0.0;   // dB
        std::uint64_t rng_seed = 0;
    };

    inline void validate_error_model(const SensingErrorModel &m)
    {
        if (!(m.p_missed_detection >= 0.0 && m.p_missed_detection <= 1.0))
            throw ValidationError("missed-detection probability outside [0, 1]");
        if (!(m.false_positive_rate >= 0.0))
            throw ValidationError("false-positive rate must be non-negative");
        if (!(m.false_positive_power > 0.0))
            throw ValidationError("false-positive power must be positive");
        if (!(m.geolocation_sigma >= 0.0) || !(m.power_error_sigma >= 0.0))
            throw ValidationError("error sigmas must be non-negative");
    }

    /// The system as a sensing network would estimate it. A missed transmitter takes its
    /// link's receivers with it; receive-only links are known a priori and kept.
    inline RFSystem perturb_system(const RFSystem &sys, const SensingErrorModel &model)
    {
        validate_error_model(model);
        std::mt19937_64 rng(model.rng_seed);
        std::bernoulli_distribution missed(model.p_missed_detection);
        std::normal_distribution<double> unit_normal(0.0, 1.0);
        const GridSpec &g = sys.grid;

        const auto jitter_power = [&](double w)
        {
            if (model.power_error_sigma == 0.0)
                return w;
            const double v = w * db_to_linear(model.power_error_sigma * unit_normal(rng));
            return std::min(v, sys.params.p_max);
        };
        const auto jitter_position = [&](Point p)
        {
            if (model.geolocation_sigma == 0.0)
                return p;
            p.x = std::clamp(p.x + model.geolocation_sigma * unit_normal(rng), 0.0, g.region_width);
            p.y = std::clamp(p.y + model.geolocation_sigma * unit_normal(rng), 0.0, g.region_height);
            return p;
        };

        RFSystem out = sys;
        out.networks.clear();
        for (const auto &net : sys.networks)
        {
            RFNetwork n{net.id, net.orthogonal, {}};
            for (const auto &link : net.links)
            {
                if (link.transmitters.empty())
                {
                    n.links.push_back(link);
                    continue;
                }
                RFLink l{link.id, {}, link.receivers};
                for (const auto &t : link.transmitters)
                {
                    if (missed(rng))
                        continue;
                    Transmitter e = t;
                    e.position = jitter_position(t.position);
                    e.tx_power = jitter_power(t.tx_power);
                    l.transmitters.push_back(e);
                }
                if (!l.transmitters.empty())
                    n.links.push_back(std::move(l));
            }
            out.networks.push_back(std::move(n));
        }

        if (model.false_positive_rate > 0.0)
        {
            std::poisson_distribution<int> count(model.false_positive_rate);
            std::uniform_real_distribution<double> ux(0.0, g.region_width);
            std::uniform_real_distribution<double> uy(0.0, g.region_height);
            RFNetwork ghosts{"false-positives", false, {}};
            std::size_t serial = 0;
            for (std::size_t t = 0; t < g.horizon; ++t)
                for (std::size_t b = 0; b < g.band_count(); ++b)
                {
                    const int k = count(rng);
                    for (int i = 0; i < k; ++i)
                    {
                        Transmitter fp;
                        fp.id = "fp-" + std::to_string(serial);
                        const double x = ux(rng);
                        const double y = uy(rng);
                        fp.position = {x, y};
                        fp.tx_power = jitter_power(model.false_positive_power);
                        fp.activity = {{t}, {b}};
                        ghosts.links.push_back({"fp-link-" + std::to_string(serial), {fp}, {}});
                        ++serial;
                    }
                }
            if (!ghosts.links.empty())
                out.networks.push_back(std::move(ghosts));
        }
        return out;
    }

    /// Opportunity map recomputed from the perturbed system. Pure in (sys, model).
    inline OpportunityMap simulate_recovery(const RFSystem &sys, const SensingErrorModel &model)
    {
        return opportunity_map(ConsumptionEngine(perturb_system(sys, model)), MapProvenance::estimated);
    }

} // namespace muse

#endif
