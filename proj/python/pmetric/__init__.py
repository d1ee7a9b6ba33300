# Copyright 2026 The pmetric Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Bisimulation pseudometrics and quantitative modal logics on probabilistic LTSs."""

from ._pmetric import (
    BudgetExceeded,
    Error,
    FormulaError,
    Model,
    ModelError,
    bisimilarity_classes,
    convex_metric,
    dist_metric,
    distinguish,
    eval_dist,
    eval_dstar,
    eval_state,
    kantorovich,
    kleene_iterate,
    load_model,
    lower_bound,
    normalize_formula,
    parse_model,
    state_metric,
    trace_distance,
    trace_prob,
)

__all__ = [
    "BudgetExceeded",
    "Error",
    "FormulaError",
    "Model",
    "ModelError",
    "bisimilarity_classes",
    "convex_metric",
    "dist_metric",
    "distinguish",
    "eval_dist",
    "eval_dstar",
    "eval_state",
    "kantorovich",
    "kleene_iterate",
    "load_model",
    "lower_bound",
    "normalize_formula",
    "parse_model",
    "state_metric",
    "trace_distance",
    "trace_prob",
]
