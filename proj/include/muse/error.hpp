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

#ifndef MUSE_ERROR_HPP
#define MUSE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace muse
{
    // Domain errors thrown by the library. The CLI maps them onto exit codes.

    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Scenario content breaks an invariant (bad value, unknown key, unknown id).
    class ValidationError : public Error
    {
    public:
        using Error::Error;
    };

    /// File could not be opened, read, or written.
    class IoError : public Error
    {
    public:
        using Error::Error;
    };

} // namespace muse

#endif
