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

#ifndef MUSE_SUMMATION_HPP
#define MUSE_SUMMATION_HPP

#include <cmath>
#include <utility>
#include <vector>

namespace muse
{
    /// Error-free transformation: a + b == s + e exactly, with s = fl(a + b).
    inline std::pair<double, double> two_sum(double a, double b)
    {
        const double s = a + b;
        const double bb = s - a;
        const double e = (a - (s - bb)) + (b - bb);
        return {s, e};
    }

    // Neumaier-compensated running sum.
    class CompensatedSum
    {
    public:
        void add(double x)
        {
            const double t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x))
                comp_ += (sum_ - t) + x;
            else
                comp_ += (x - t) + sum_;
            sum_ = t;
        }

        void merge(const CompensatedSum &other)
        {
            add(other.sum_);
            add(other.comp_);
        }

        double value() const { return sum_ + comp_; }

    private:
        double sum_ = 0.0;
        double comp_ = 0.0;
    };

    // Exact sum of finite doubles kept as non-overlapping partials (Shewchuk); value()
    // rounds the exact total once. Two ExactSums over the same real total agree bit for bit.
    class ExactSum
    {
    public:
        void add(double x)
        {
            std::size_t i = 0;
            for (double y : partials_)
            {
                if (std::abs(x) < std::abs(y))
                    std::swap(x, y);
                const double hi = x + y;
                const double lo = y - (hi - x);
                if (lo != 0.0)
                    partials_[i++] = lo;
                x = hi;
            }
            partials_.resize(i);
            partials_.push_back(x);
        }

        /// Adds a - b without rounding.
        void add_difference(double a, double b)
        {
            const auto [s, e] = two_sum(a, -b);
            add(s);
            add(e);
        }

        void merge(const ExactSum &other)
        {
            for (double p : other.partials_)
                add(p);
        }

        double value() const
        {
            if (partials_.empty())
                return 0.0;
            std::size_t n = partials_.size();
            double hi = partials_[--n];
            double lo = 0.0;
            while (n > 0)
            {
                const double x = hi;
                const double y = partials_[--n];
                hi = x + y;
                lo = y - (hi - x);
                if (lo != 0.0)
                    break;
            }
            // Round-half-even correction, as in Python's math.fsum.
            if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0)))
            {
                const double y = lo * 2.0;
                const double x = hi + y;
                if (y == x - hi)
                    hi = x;
            }
            return hi;
        }

    private:
        std::vector<double> partials_;
    };

} // namespace muse

#endif
