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

#ifndef MUSE_GRID_HPP
#define MUSE_GRID_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "error.hpp"
#include "units.hpp"

namespace muse
{
    struct BandSpec
    {
        double center_hz = 0.0;
        double bandwidth_hz = 6e6;
        std::optional<double> alpha; // overrides the propagation exponent in this band

        friend bool operator==(const BandSpec &, const BandSpec &) = default;
    };

    enum class SamplePointPolicy
    {
        centroid,
        explicit_offset
    };

    struct GridSpec
    {
        double region_width = 0.0;  // meters
        double region_height = 0.0; // meters
        double hex_side = 100.0;    // meters
        double time_quantum = 1.0;  // seconds
        std::size_t horizon = 1;    // number of time quanta
        std::vector<BandSpec> bands{BandSpec{}};
        SamplePointPolicy sample_point_policy = SamplePointPolicy::centroid;
        Point sample_offset{};             // relative to the centroid, explicit_offset only
        bool worst_case_placement = false; // move transceivers to a vertex of their hexagon

        std::size_t band_count() const { return bands.size(); }

        friend bool operator==(const GridSpec &, const GridSpec &) = default;
    };

    struct Cell
    {
        std::size_t region_index = 0;
        std::size_t time_index = 0;
        std::size_t band_index = 0;
        Point sample_point{};
    };

    inline double hex_area(double side) { return 1.5 * std::numbers::sqrt3 * side * side; }

    // Pointy-top hexagonal lattice anchored with the first centroid at the region origin.
    // Odd rows are shifted right by half a hexagon width. Columns and rows are the smallest
    // counts whose union of hexagons covers the whole rectangle; region indices are
    // row-major (row * columns + column).
    class HexLattice
    {
    public:
        HexLattice() = default;

        explicit HexLattice(const GridSpec &spec)
            : side_(spec.hex_side), width_(spec.region_width), height_(spec.region_height)
        {
            if (!(side_ > 0.0) || !(width_ > 0.0) || !(height_ > 0.0) || width_ * height_ < hex_area(side_))
                throw ValidationError("degenerate grid");
            const double pitch_x = std::numbers::sqrt3 * side_;
            const double pitch_y = 1.5 * side_;
            // Even rows reach x = (c + 1/2) * pitch_x on the right; the flat band of row r
            // reaches y = r * pitch_y + side / 2 before the zig-zag begins.
            constexpr double eps = 1e-9;
            const double cols = std::ceil(width_ / pitch_x + 0.5 - eps);
            const double rows = std::ceil(height_ / pitch_y - 1.0 / 3.0 - eps) + 1.0;
            columns_ = static_cast<std::size_t>(std::max(1.0, cols));
            rows_ = static_cast<std::size_t>(std::max(1.0, rows));
        }

        std::size_t columns() const { return columns_; }
        std::size_t rows() const { return rows_; }
        std::size_t size() const { return columns_ * rows_; }
        double side() const { return side_; }

        Point centroid(std::size_t region) const { return centroid(region / columns_, region % columns_); }

        Point centroid(std::size_t row, std::size_t col) const
        {
            const double pitch_x = std::numbers::sqrt3 * side_;
            const double shift = (row % 2 == 1) ? 0.5 * pitch_x : 0.0;
            return {static_cast<double>(col) * pitch_x + shift, static_cast<double>(row) * 1.5 * side_};
        }

        /// Corners counter-clockwise starting at 30 degrees.
        std::array<Point, 6> vertices(std::size_t region) const
        {
            const Point c = centroid(region);
            std::array<Point, 6> v{};
            for (std::size_t k = 0; k < 6; ++k)
            {
                const double a = std::numbers::pi / 6.0 + static_cast<double>(k) * std::numbers::pi / 3.0;
                v[k] = {c.x + side_ * std::cos(a), c.y + side_ * std::sin(a)};
            }
            return v;
        }

        bool contains(std::size_t region, const Point &p, double tol = 1e-9) const
        {
            const Point c = centroid(region);
            const double dx = std::abs(p.x - c.x);
            const double dy = std::abs(p.y - c.y);
            const double half_w = 0.5 * std::numbers::sqrt3 * side_;
            if (dx > half_w + tol)
                return false;
            return dy <= side_ - dx / std::numbers::sqrt3 + tol;
        }

        /// Region whose hexagon contains p; points on shared edges go to the lowest index.
        std::optional<std::size_t> locate(const Point &p) const
        {
            const double pitch_x = std::numbers::sqrt3 * side_;
            const double pitch_y = 1.5 * side_;
            const long r0 = std::lround(p.y / pitch_y);
            std::optional<std::size_t> best;
            double best_d = std::numeric_limits<double>::infinity();
            for (long r = r0 - 1; r <= r0 + 1; ++r)
            {
                if (r < 0 || r >= static_cast<long>(rows_))
                    continue;
                const double shift = (r % 2 == 1) ? 0.5 * pitch_x : 0.0;
                const long c0 = std::lround((p.x - shift) / pitch_x);
                for (long c = c0 - 1; c <= c0 + 1; ++c)
                {
                    if (c < 0 || c >= static_cast<long>(columns_))
                        continue;
                    const std::size_t idx = static_cast<std::size_t>(r) * columns_ + static_cast<std::size_t>(c);
                    const double d = distance(p, centroid(idx));
                    if (d < best_d - 1e-9 || (std::abs(d - best_d) <= 1e-9 && best && idx < *best))
                    {
                        best_d = d;
                        best = idx;
                    }
                }
            }
            if (best && !contains(*best, p))
                return std::nullopt;
            return best;
        }

        /// Regions sharing a hexagon edge with `region`, ascending.
        std::vector<std::size_t> neighbors(std::size_t region) const
        {
            const long row = static_cast<long>(region / columns_);
            const long col = static_cast<long>(region % columns_);
            // Odd rows sit half a step to the right, so their diagonal neighbours are at col and col + 1.
            const long lo = (row % 2 == 1) ? col : col - 1;
            const std::array<std::array<long, 2>, 6> offsets{{
                {row - 1, lo},
                {row - 1, lo + 1},
                {row, col - 1},
                {row, col + 1},
                {row + 1, lo},
                {row + 1, lo + 1},
            }};
            std::vector<std::size_t> out;
            for (const auto &[r, c] : offsets)
            {
                if (r < 0 || c < 0 || r >= static_cast<long>(rows_) || c >= static_cast<long>(columns_))
                    continue;
                out.push_back(static_cast<std::size_t>(r) * columns_ + static_cast<std::size_t>(c));
            }
            std::sort(out.begin(), out.end());
            return out;
        }

        bool adjacent(std::size_t a, std::size_t b) const
        {
            const auto n = neighbors(a);
            return std::binary_search(n.begin(), n.end(), b);
        }

    private:
        double side_ = 1.0;
        double width_ = 0.0;
        double height_ = 0.0;
        std::size_t columns_ = 0;
        std::size_t rows_ = 0;
    };

    inline Point sample_point(const GridSpec &spec, const HexLattice &lattice, std::size_t region)
    {
        Point c = lattice.centroid(region);
        if (spec.sample_point_policy == SamplePointPolicy::explicit_offset)
        {
            c.x += spec.sample_offset.x;
            c.y += spec.sample_offset.y;
        }
        return c;
    }

    /// Flat index of a unit-spectrum-space: region-major, then time, then band.
    inline std::size_t cell_index(const GridSpec &spec, std::size_t region, std::size_t time, std::size_t band)
    {
        return (region * spec.horizon + time) * spec.band_count() + band;
    }

    /// Every unit-spectrum-space of the grid in cell_index order.
    inline std::vector<Cell> tessellate(const GridSpec &spec)
    {
        if (spec.horizon < 1 || spec.bands.empty())
            throw ValidationError("degenerate grid");
        const HexLattice lattice(spec);
        if (spec.sample_point_policy == SamplePointPolicy::explicit_offset &&
            !lattice.contains(0, sample_point(spec, lattice, 0)))
            throw ValidationError("sample offset lies outside the hexagon");
        std::vector<Cell> cells;
        cells.reserve(lattice.size() * spec.horizon * spec.band_count());
        for (std::size_t r = 0; r < lattice.size(); ++r)
        {
            const Point sp = sample_point(spec, lattice, r);
            for (std::size_t t = 0; t < spec.horizon; ++t)
                for (std::size_t b = 0; b < spec.band_count(); ++b)
                    cells.push_back({r, t, b, sp});
        }
        return cells;
    }

} // namespace muse

#endif
