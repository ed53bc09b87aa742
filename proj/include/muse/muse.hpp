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

#ifndef MUSE_MUSE_HPP
#define MUSE_MUSE_HPP

#include "antenna.hpp"
#include "connectivity.hpp"
#include "consumption.hpp"
#include "error.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "propagation.hpp"
#include "scenario.hpp"
#include "smf.hpp"
#include "summation.hpp"
#include "units.hpp"

#endif
