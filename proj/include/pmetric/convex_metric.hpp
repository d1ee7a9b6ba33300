/*
 * Copyright 2026 The pmetric Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>

#include "pmetric/plts.hpp"
#include "pmetric/state_metric.hpp"
#include "pmetric/transport.hpp"

namespace pmetric {

/// One application of the convex functor: successor sets are replaced by
/// their convex closures before the Hausdorff-Kantorovich comparison.
StateMetric convex_functor_step(const Plts& m, const StateMetric& d);

/// Least fixed point of the convex functor, iterated from the zero table.
FixpointResult convex_fixpoint(const Plts& m, const FixpointOptions& opts = {});

/// Adds, for every (s, a), the mixtures of der(s,a) whose weights lie on the
/// 1/grid lattice. A finite inner approximation of the combined transitions.
Plts saturate(const Plts& m, std::size_t grid);

}  // namespace pmetric
