# Copyright 2026 The momt Authors
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

"""Transport distances between density matrices under a Lindblad operator set."""

import json as _json

from ._momt import (
    InfeasibleError,
    LindbladSet,
    MomtError,
    ParseError,
    __version__,
    distance,
    divergence,
    feasibility_gap,
    geodesic,
    gradient,
    heat_flow,
    kinetic,
    laplacian,
    poincare_constant,
    project_kernel,
    solve_potential,
)
from ._momt import operator_info as _operator_info
from ._momt import run_distance as _run_distance
from ._momt import verify as _verify


def run_distance(text):
    """Solve a problem file given as JSON text and return the run report."""
    return _json.loads(_run_distance(text))


def operator_info(text):
    return _json.loads(_operator_info(text))


def verify(text, suite="all", cases=200):
    return _verify(text, suite, cases)


__all__ = [
    "InfeasibleError",
    "LindbladSet",
    "MomtError",
    "ParseError",
    "distance",
    "divergence",
    "feasibility_gap",
    "geodesic",
    "gradient",
    "heat_flow",
    "kinetic",
    "laplacian",
    "operator_info",
    "poincare_constant",
    "project_kernel",
    "run_distance",
    "solve_potential",
    "verify",
]
