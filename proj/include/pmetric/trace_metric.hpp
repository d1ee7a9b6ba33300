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
#include <string>
#include <string_view>
#include <vector>

#include "pmetric/formula.hpp"
#include "pmetric/plts.hpp"

namespace pmetric {

using Trace = std::vector<ActionId>;

/// Splits whitespace-separated action labels. Throws std::out_of_range on an
/// unknown label.
Trace parse_trace(const Plts& m, std::string_view text);
std::string format_trace(const Plts& m, const Trace& tr);

/// Largest probability with which s can perform tr, resolving each
/// nondeterministic choice to maximise it.
double trace_prob(const Plts& m, StateId s, const Trace& tr);

struct TraceDistance {
    double value = 0.0;
    Trace witness;
};

/// max |Pr(s,tr) - Pr(t,tr)| over traces of length at most max_len, searched
/// in shortlex order; the witness is the first maximiser.
TraceDistance trace_distance(const Plts& m, StateId s, StateId t, std::size_t max_len);

/// <a1>[<a2>[ ... [tt] ... ]]: the formula whose value at every state is the
/// trace probability.
StateFormula trace_formula(const std::vector<std::string>& labels);
StateFormula trace_formula(const Plts& m, const Trace& tr);

}  // namespace pmetric
