# Copyright 2026 The qmetro Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Multiparameter quantum Fisher information and entanglement bounds."""

import json
import os

from . import _qmetro
from ._qmetro import Error, shot_noise_rank, weak_qcrb

__all__ = ["Error", "verify", "qfi", "montecarlo", "gain_factor", "gain_table", "shot_noise_rank", "weak_qcrb"]


def _text(scenario):
    if isinstance(scenario, dict):
        return json.dumps(scenario)
    if isinstance(scenario, (str, os.PathLike)) and os.path.exists(scenario):
        with open(scenario) as f:
            return f.read()
    return scenario


def verify(scenario):
    """Returns (report, passed). scenario is a dict, a path or JSON text."""
    report, passed = _qmetro.verify(_text(scenario))
    return json.loads(report), passed


def qfi(scenario):
    """Quantum Fisher matrix of the scenario's state."""
    return _qmetro.qfi(_text(scenario))


def montecarlo(scenario, mu=10000, records=200, seed=0):
    """Returns (summary, passed, estimates) with estimates of shape (records, M)."""
    summary, passed, estimates = _qmetro.montecarlo(_text(scenario), mu, records, seed)
    return json.loads(summary), passed, estimates


def gain_factor(particles, modes, me, pe):
    """(S_max, G) for at most me entangled modes and pe entangled particles per mode."""
    return _qmetro.gain_factor(particles, modes, me, pe)


def gain_table(particles, modes):
    return json.loads(_qmetro.gain_table(particles, modes))
