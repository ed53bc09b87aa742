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
#include <set>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace muse;

namespace
{
    GridSpec region(double side)
    {
        GridSpec g;
        g.region_width = 4300.0;
        g.region_height = 3700.0;
        g.hex_side = side;
        return g;
    }

    // Pointy-top hexagon with circumradius s centred at c.
    bool in_hex(const Point &c, double s, const Point &p)
    {
        const double dx = std::abs(p.x - c.x);
        const double dy = std::abs(p.y - c.y);
        return dx <= std::sqrt(3.0) / 2.0 * s + 1e-9 && dy + dx / std::sqrt(3.0) <= s + 1e-9;
    }

    // Does a cols x rows patch of the lattice cover a dense sample of the rectangle?
    bool covers(const GridSpec &g, std::size_t cols, std::size_t rows)
    {
        const double s = g.hex_side;
        const double w = std::sqrt(3.0) * s;
        const double step = s / 8.0;
        for (double y = 0.0; y <= g.region_height + 1e-9; y += step)
            for (double x = 0.0; x <= g.region_width + 1e-9; x += step)
            {
                const Point p{std::min(x, g.region_width), std::min(y, g.region_height)};
                bool hit = false;
                const long r0 = static_cast<long>(p.y / (1.5 * s));
                for (long r = std::max(0L, r0 - 1); r <= r0 + 1 && !hit; ++r)
                {
                    if (r >= static_cast<long>(rows))
                        break;
                    const long c0 = static_cast<long>(p.x / w);
                    for (long c = std::max(0L, c0 - 1); c <= c0 + 1 && !hit; ++c)
                    {
                        if (c >= static_cast<long>(cols))
                            break;
                        const Point centre{static_cast<double>(c) * w + (r % 2 ? w / 2.0 : 0.0),
                                           static_cast<double>(r) * 1.5 * s};
                        hit = in_hex(centre, s, p);
                    }
                }
                if (!hit)
                    return false;
            }
        return true;
    }
} // namespace

TEST(HexLattice, StudyRegionHas676CellsAt100m)
{
    const HexLattice l(region(100.0));
    EXPECT_EQ(l.columns(), 26u);
    EXPECT_EQ(l.rows(), 26u);
    EXPECT_EQ(l.size(), 676u);
}

TEST(HexLattice, CountIsMinimalCoveringLattice)
{
    for (double side : {50.0, 100.0, 150.0})
    {
        const GridSpec g = region(side);
        const HexLattice l(g);
        EXPECT_TRUE(covers(g, l.columns(), l.rows())) << side;
        EXPECT_FALSE(covers(g, l.columns() - 1, l.rows())) << side;
        EXPECT_FALSE(covers(g, l.columns(), l.rows() - 1)) << side;
    }
    EXPECT_EQ(HexLattice(region(50.0)).size(), 2550u);
    EXPECT_EQ(HexLattice(region(25.0)).size(), 10000u);
}

TEST(HexLattice, CentroidsFollowRowMajorOffsetRows)
{
    const GridSpec g = region(100.0);
    const HexLattice l(g);
    for (std::size_t i = 0; i < l.size(); ++i)
    {
        const Point expect = testkit::centroid(g, l.columns(), i);
        EXPECT_NEAR(l.centroid(i).x, expect.x, 1e-9);
        EXPECT_NEAR(l.centroid(i).y, expect.y, 1e-9);
    }
    EXPECT_EQ(l.centroid(0), (Point{0.0, 0.0}));
}

TEST(HexLattice, VerticesLieOnCircumcircle)
{
    const HexLattice l(region(100.0));
    for (std::size_t i : {0u, 27u, 300u, 675u})
        for (const Point &v : l.vertices(i))
            EXPECT_NEAR(distance(v, l.centroid(i)), 100.0, 1e-9);
}

TEST(HexLattice, LocateFindsContainingCell)
{
    const GridSpec g = region(100.0);
    const HexLattice l(g);
    for (std::size_t i = 0; i < l.size(); ++i)
        EXPECT_EQ(l.locate(l.centroid(i)), i);
    testkit::Generator gen(3);
    for (int k = 0; k < 5000; ++k)
    {
        const Point p = gen.position(g);
        const auto r = l.locate(p);
        ASSERT_TRUE(r.has_value());
        EXPECT_TRUE(l.contains(*r, p));
        EXPECT_EQ(*r, testkit::oracle::region_of(g, p));
    }
    EXPECT_FALSE(l.locate({-500.0, -500.0}).has_value());
}

TEST(HexLattice, NeighboursShareAnEdge)
{
    const HexLattice l(region(100.0));
    const double pitch = std::sqrt(3.0) * 100.0;
    std::size_t interior = 0;
    for (std::size_t i = 0; i < l.size(); ++i)
    {
        const auto n = l.neighbors(i);
        EXPECT_TRUE(std::is_sorted(n.begin(), n.end()));
        EXPECT_LE(n.size(), 6u);
        interior += n.size() == 6;
        for (std::size_t j : n)
        {
            EXPECT_NEAR(distance(l.centroid(i), l.centroid(j)), pitch, 1e-6);
            EXPECT_TRUE(l.adjacent(j, i));
        }
        // Brute force: every centroid at one pitch is a neighbour.
        std::size_t count = 0;
        for (std::size_t j = 0; j < l.size(); ++j)
            count += j != i && std::abs(distance(l.centroid(i), l.centroid(j)) - pitch) < 1e-6;
        EXPECT_EQ(count, n.size());
    }
    EXPECT_EQ(interior, 24u * 24u);
}

TEST(Tessellate, CellOrderIsRegionTimeBand)
{
    GridSpec g = region(100.0);
    g.horizon = 3;
    g.bands = {BandSpec{}, BandSpec{}};
    const auto cells = tessellate(g);
    ASSERT_EQ(cells.size(), 676u * 3u * 2u);
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        EXPECT_EQ(cell_index(g, cells[i].region_index, cells[i].time_index, cells[i].band_index), i);
        EXPECT_EQ(i, (cells[i].region_index * 3 + cells[i].time_index) * 2 + cells[i].band_index);
    }
}

TEST(Tessellate, ExplicitOffsetShiftsSamplePoint)
{
    GridSpec g = region(100.0);
    g.sample_point_policy = SamplePointPolicy::explicit_offset;
    g.sample_offset = {20.0, -30.0};
    const HexLattice l(g);
    const auto cells = tessellate(g);
    EXPECT_EQ(cells[40].sample_point, (Point{l.centroid(40).x + 20.0, l.centroid(40).y - 30.0}));
    g.sample_offset = {150.0, 0.0};
    EXPECT_THROW(tessellate(g), ValidationError);
}

TEST(Tessellate, DegenerateGridsAreRejected)
{
    GridSpec g = region(100.0);
    g.region_width = 0.0;
    EXPECT_THROW(tessellate(g), ValidationError);
    g = region(100.0);
    g.horizon = 0;
    EXPECT_THROW(tessellate(g), ValidationError);
    g = region(100.0);
    g.bands.clear();
    EXPECT_THROW(tessellate(g), ValidationError);
    g = region(1000.0);
    g.region_width = 50.0;
    g.region_height = 50.0;
    EXPECT_THROW(HexLattice{g}, ValidationError);
}

TEST(Tessellate, TotalSpectrumSpace)
{
    const GridSpec g = region(100.0);
    const SystemParams p;
    EXPECT_DOUBLE_EQ(total_spectrum_space(g, p), 676.0 * p.p_cmax());
}

TEST(HexLattice, HalvingTheSideQuadruplesTheCount)
{
    const double a100 = static_cast<double>(HexLattice(region(100.0)).size());
    const double a50 = static_cast<double>(HexLattice(region(50.0)).size());
    const double a25 = static_cast<double>(HexLattice(region(25.0)).size());
    EXPECT_NEAR(a50 / a100, 4.0, 0.4);
    EXPECT_NEAR(a25 / a50, 4.0, 0.4);
}

TEST(Tessellate, Deterministic)
{
    GridSpec g = region(50.0);
    g.bands = {BandSpec{}, BandSpec{}};
    const auto a = tessellate(g);
    const auto b = tessellate(g);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_EQ(a[i].sample_point, b[i].sample_point);
}
