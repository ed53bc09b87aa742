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

#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "support.hpp"

using namespace muse;
using Exact = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<512, boost::multiprecision::digit_base_2>>;

namespace
{
    OpportunityMap random_map(testkit::Generator &gen, std::size_t n, bool sparse = true)
    {
        OpportunityMap m;
        m.regions = n;
        m.values.resize(n);
        for (auto &v : m.values)
            v = sparse && gen.coin(0.2) ? 0.0 : std::pow(10.0, gen.uniform(-14.0, 0.0));
        return m;
    }

    double rounded(const Exact &x) { return x.convert_to<double>(); }
} // namespace

TEST(Aggregate, Examples)
{
    OpportunityMap m;
    m.regions = 676;
    m.values.assign(676, 0.0);
    EXPECT_EQ(smf_aggregate(m), 0.0);
    m.values.assign(676, 0.01);
    EXPECT_NEAR(smf_aggregate(m), 6.76, 1e-12);
    EXPECT_THROW(smf_aggregate(m.values, 675), ValidationError);
}

TEST(Aggregate, IsCorrectlyRoundedSum)
{
    testkit::Generator gen(8);
    for (int i = 0; i < 50; ++i)
    {
        std::vector<double> v(1000);
        for (auto &x : v)
            x = gen.uniform(-1.0, 1.0) * std::pow(10.0, gen.uniform(-20.0, 5.0));
        Exact e = 0;
        for (double x : v)
            e += x;
        EXPECT_EQ(smf_aggregate(v, v.size()), rounded(e));
    }
}

TEST(Recovery, IdentityAndEmptyEstimate)
{
    testkit::Generator gen(9);
    const OpportunityMap t = random_map(gen, 676);
    const auto same = compare_maps(t, t);
    for (double th : same.theta)
        EXPECT_EQ(th, 0.0);
    EXPECT_EQ(same.recovery->lost_available, 0.0);
    EXPECT_EQ(same.recovery->potentially_incursed, 0.0);
    EXPECT_EQ(same.recovery->recovered_available, smf_aggregate(t));

    OpportunityMap zero = t;
    zero.values.assign(t.values.size(), 0.0);
    const auto none = compare_maps(t, zero);
    EXPECT_EQ(none.recovery->recovered_available, 0.0);
    EXPECT_EQ(none.recovery->lost_available, smf_aggregate(t));
}

TEST(Recovery, PartitionIsExact)
{
    testkit::Generator gen(10);
    for (int i = 0; i < 200; ++i)
    {
        const OpportunityMap t = random_map(gen, 676);
        const OpportunityMap e = random_map(gen, 676);
        const auto r = compare_maps(t, e);
        Exact overlap = 0, shortfall = 0, excess = 0, total = 0;
        for (std::size_t k = 0; k < t.values.size(); ++k)
        {
            const Exact a = t.values[k], b = e.values[k];
            overlap += a < b ? a : b;
            shortfall += a > b ? a - b : Exact(0);
            excess += b > a ? b - a : Exact(0);
            total += a;
        }
        ASSERT_EQ(overlap + shortfall, total);
        ASSERT_EQ(r.recovery->recovered_available, rounded(overlap));
        ASSERT_EQ(r.recovery->lost_available, rounded(shortfall));
        ASSERT_EQ(r.recovery->potentially_incursed, rounded(excess));
        ASSERT_EQ(r.truth_total, rounded(total));
        ASSERT_EQ(r.aggregate, rounded(excess - shortfall));
    }
}

TEST(Recovery, GridMismatch)
{
    testkit::Generator gen(11);
    EXPECT_THROW(compare_maps(random_map(gen, 676), random_map(gen, 675)), ValidationError);
}

TEST(Sharing, CapExamples)
{
    testkit::Generator gen(12);
    const double pc = SystemParams{}.p_cmax();
    const OpportunityMap t = random_map(gen, 676);
    const auto closed = apply_policy(t, std::vector<double>(676, 0.0), pc);
    EXPECT_EQ(closed.sharing->implied_available, 0.0);
    EXPECT_EQ(closed.sharing->implied_guard, smf_aggregate(t));

    const auto open = apply_policy(t, std::vector<double>(676, pc), pc);
    EXPECT_EQ(open.sharing->implied_guard, 0.0);
    Exact slack = 0;
    for (double v : t.values)
        slack += Exact(pc) - v;
    EXPECT_EQ(open.sharing->implied_incursed, rounded(slack));

    // Three decibels under the truth: a guard band and no incursion.
    const auto cautious = apply_policy(t, [&](std::size_t k) { return t.values[k] * db_to_linear(-3.0); }, pc);
    Exact guard = 0;
    for (double v : t.values)
        guard += Exact(v) - Exact(v * db_to_linear(-3.0));
    EXPECT_GT(cautious.sharing->implied_guard, 0.0);
    EXPECT_EQ(cautious.sharing->implied_incursed, 0.0);
    EXPECT_EQ(cautious.sharing->implied_guard, rounded(guard));

    EXPECT_THROW(apply_policy(t, std::vector<double>(676, 2.0), pc), ValidationError);
    EXPECT_THROW(apply_policy(t, std::vector<double>(676, -1e-9), pc), ValidationError);
}

TEST(Sharing, PartitionIsExact)
{
    testkit::Generator gen(13);
    for (int i = 0; i < 100; ++i)
    {
        const OpportunityMap t = random_map(gen, 400);
        const OpportunityMap cap = random_map(gen, 400);
        const auto r = apply_policy(t, cap.values, 1.0);
        Exact a = 0, g = 0, total = 0;
        for (std::size_t k = 0; k < 400; ++k)
        {
            const Exact x = t.values[k], c = cap.values[k];
            a += c < x ? c : x;
            g += x > c ? x - c : Exact(0);
            total += x;
        }
        ASSERT_EQ(a + g, total);
        ASSERT_EQ(r.sharing->implied_available, rounded(a));
        ASSERT_EQ(r.sharing->implied_guard, rounded(g));
    }
}

TEST(Exploitation, Examples)
{
    testkit::Generator gen(14);
    const OpportunityMap t = random_map(gen, 676);
    const auto idle = exploitation_report(t, std::vector<double>(676, 0.0));
    EXPECT_EQ(idle.exploitation->unexploited_available, smf_aggregate(t));
    const auto exact = exploitation_report(t, t.values);
    EXPECT_EQ(exact.exploitation->incursed, 0.0);
    EXPECT_EQ(exact.exploitation->unexploited_available, 0.0);
    EXPECT_THROW(exploitation_report(t, std::vector<double>(676, -1.0)), ValidationError);

    for (int i = 0; i < 50; ++i)
    {
        const OpportunityMap g = random_map(gen, 676);
        const auto r = exploitation_report(t, g.values);
        Exact used = 0, unused = 0, total = 0;
        for (std::size_t k = 0; k < 676; ++k)
        {
            const Exact x = t.values[k], y = g.values[k];
            used += y < x ? y : x;
            unused += x > y ? x - y : Exact(0);
            total += x;
        }
        ASSERT_EQ(used + unused, total);
        ASSERT_EQ(r.exploitation->exploited_available, rounded(used));
        ASSERT_EQ(r.exploitation->unexploited_available, rounded(unused));
    }
}

TEST(SimulateRecovery, ZeroErrorIsBitExact)
{
    testkit::Generator gen(15);
    for (int i = 0; i < 5; ++i)
    {
        const RFSystem sys = gen.system({});
        SensingErrorModel m;
        m.rng_seed = 1234 + static_cast<std::uint64_t>(i);
        const auto truth = opportunity_map(sys);
        const auto est = simulate_recovery(sys, m);
        EXPECT_EQ(est.provenance, MapProvenance::estimated);
        ASSERT_EQ(est.values, truth.values);
    }
}

TEST(SimulateRecovery, EverythingMissedLeavesReceiveOnlyLinks)
{
    testkit::Generator gen(16);
    const RFSystem sys = gen.system({});
    SensingErrorModel m;
    m.p_missed_detection = 1.0;
    RFSystem expect = sys;
    for (auto &net : expect.networks)
        std::erase_if(net.links, [](const RFLink &l) { return !l.transmitters.empty(); });
    EXPECT_EQ(simulate_recovery(sys, m).values, opportunity_map(expect).values);

    const RFSystem empty = testkit::study_region();
    EXPECT_EQ(simulate_recovery(empty, m).values, opportunity_map(empty).values);
}

TEST(SimulateRecovery, DeterministicForSeed)
{
    testkit::Generator gen(17);
    const RFSystem sys = gen.system({});
    SensingErrorModel m;
    m.p_missed_detection = 0.2;
    m.false_positive_rate = 2.0;
    m.geolocation_sigma = 50.0;
    m.power_error_sigma = 2.0;
    m.rng_seed = 99;
    EXPECT_EQ(perturb_system(sys, m), perturb_system(sys, m));
    EXPECT_EQ(simulate_recovery(sys, m).values, simulate_recovery(sys, m).values);
    m.rng_seed = 100;
    EXPECT_NE(perturb_system(sys, m), perturb_system(sys, {0.2, 2.0, 1e-3, 50.0, 2.0, 99}));
}

TEST(SimulateRecovery, ThreeWaySplitUnderErrors)
{
    const RFSystem sys = testkit::single_link({1200.0, 1500.0}, 13.7, {1200.0, 1200.0}, 6.0);
    SensingErrorModel m;
    m.false_positive_rate = 1.0;
    m.geolocation_sigma = 100.0;
    m.power_error_sigma = 3.0;
    m.rng_seed = 5;
    const auto truth = opportunity_map(sys);
    const auto r = compare_maps(truth, simulate_recovery(sys, m));
    const auto &s = *r.recovery;
    EXPECT_GT(s.recovered_available, 0.0);
    EXPECT_LE(s.recovered_available, r.truth_total);
    EXPECT_GE(s.lost_available, 0.0);
    EXPECT_GE(s.potentially_incursed, 0.0);
}

TEST(SimulateRecovery, RejectsBadModels)
{
    const RFSystem sys = testkit::study_region();
    SensingErrorModel m;
    m.p_missed_detection = 1.5;
    EXPECT_THROW(simulate_recovery(sys, m), ValidationError);
    m = {};
    m.geolocation_sigma = -1.0;
    EXPECT_THROW(simulate_recovery(sys, m), ValidationError);
}
