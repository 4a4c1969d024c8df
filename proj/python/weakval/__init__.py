# Copyright 2026 The weakval authors
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

"""Weak-value polarization measurement simulator.

Exact and perturbative von Neumann meter responses for pre/post-selected
photon polarization with a Gaussian transverse pointer, a Monte Carlo model
of a gated 32x32 SPAD array, and validity-region analysis of the weak-value
readout.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
