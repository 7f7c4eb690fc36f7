# Copyright 2019 DeepMind Technologies Limited.
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

"""Property suites run by `task=validate`.

Each suite is deterministic and checks one contract of the package against
closed forms or an independent computation. Suites run in order and stop at
the first failure.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import itertools
import math

# Dependency imports
from absl import logging
import numpy as np
from squeezed_probe_tomography.modules import channels
from squeezed_probe_tomography.modules import patterns
from squeezed_probe_tomography.modules import population
from squeezed_probe_tomography.util import fock
from squeezed_probe_tomography.util import gaussian


class SuiteResult(collections.namedtuple(
    'SuiteResult', ('name', 'passed', 'max_error', 'tolerance'))):
  """Outcome of one property suite."""


def _superposition(cutoff):
  vector = np.zeros(cutoff + 1)
  vector[:2] = 1 / math.sqrt(2)
  return np.outer(vector, vector).astype(np.complex128)


def pattern_unbiasedness():
  """Pattern-function averages recover a family of states, m, n <= 4."""
  cutoff = 24
  states = [fock.fock_state(0, cutoff), fock.fock_state(1, cutoff),
            fock.fock_state(2, cutoff), _superposition(cutoff),
            fock.thermal_state(0.5, cutoff)]
  worst = 0.0
  for eta in (0.6, 0.75, 0.9, 1.0):
    table = patterns.build_table(4, eta)
    for rho in states:
      worst = max(worst, patterns.verify_unbiasedness(table, rho))
  return worst, 1e-3


def _ensemble_grid():
  return itertools.product(np.linspace(0.1, 1.0, 10),
                           np.linspace(0.55, 1.0, 10))


def picture_equivalence():
  """Conditioning the two-mode state reproduces the synthesized probes."""
  rng = np.random.default_rng(2)
  worst = 0.0
  for r, eta_a in _ensemble_grid():
    params = gaussian.probe_params(r, eta_a)
    state = gaussian.tmsv_covariance(r, eta_a)
    for _ in range(20):
      x_a = rng.normal(0, math.sqrt(params.v_a))
      theta = rng.uniform(0, 2 * math.pi)
      conditional = gaussian.condition_on_homodyne(state, x_a, theta)
      probe = gaussian.probe_gaussian_state(params, x_a, theta)
      worst = max(worst, np.max(np.abs(conditional.mean - probe.mean)),
                  np.max(np.abs(conditional.cov - probe.cov)))
  return float(worst), 1e-6


def parameter_round_trip():
  """Probe variances invert to the squeezing and efficiency they came from."""
  worst = 0.0
  for r, eta_a in _ensemble_grid():
    params = gaussian.probe_params_from_variances(
        *gaussian.variances_from_squeezing(r, eta_a))
    worst = max(worst, abs(params.eta_a - eta_a),
                abs(params.lambda_ - math.tanh(r)))
  pure = gaussian.probe_params_from_variances(
      *gaussian.variances_from_squeezing(0.5, 1.0))
  worst = max(worst, abs(pure.eta_a - 1))
  return float(worst), 1e-9


def channel_oracles():
  """Kraus oracles match closed forms and preserve trace."""
  cutoff = 12
  loss = channels.loss_channel(0.7, cutoff)
  phase = channels.phase_channel(math.pi / 6, cutoff)
  residuals = [
      abs(channels.choi_from_kraus(loss, 1)[1, 1, 0, 0] - math.sqrt(0.7)),
      abs(channels.choi_from_kraus(phase, 1)[0, 0, 1, 1]
          - np.exp(1j * math.pi / 6)),
  ]
  levels = channels.trusted_levels(cutoff)
  for channel in (loss, phase, channels.identity_channel(cutoff)):
    residuals.append(channels.completeness_residual(channel))
    partial = channels.choi_partial_trace(
        channels.choi_from_kraus(channel, levels - 1))
    residuals.append(np.max(np.abs(partial - np.eye(levels))))
  return float(max(residuals)), 1e-9


def povm_validity():
  """Detector POVMs are positive and complete."""
  worst = 0.0
  for povm in (channels.onoff_detector(0.6, 0.01, 20),
               channels.pnr_detector(0.8, 3, 20),
               channels.trivial_detector(20)):
    min_eigenvalue, completeness = channels.povm_residuals(povm)
    worst = max(worst, -min_eigenvalue, completeness)
  return float(worst), 1e-12


def process_convention_lock():
  """Noise-free estimation of the identity channel returns its Choi tensor."""
  channel = channels.identity_channel(40)
  chi = population.population_choi(channel, gaussian.probe_params(0.5, 1.0),
                                   0.9, 2)
  oracle = channels.choi_from_kraus(channel, 2)
  return float(np.max(np.abs(chi - oracle))), 1e-3


def detector_convention_lock():
  """Noise-free estimation of an on/off detector returns its POVM."""
  povm = channels.onoff_detector(0.6, 0.0, 30)
  elements, _ = population.population_povm(
      povm, gaussian.probe_params(0.5, 1.0), 3)
  return float(np.max(np.abs(elements - povm.elements[:, :4, :4]))), 1e-3


SUITES = collections.OrderedDict([
    ('picture-equivalence', picture_equivalence),
    ('parameter-round-trip', parameter_round_trip),
    ('channel-oracles', channel_oracles),
    ('povm-validity', povm_validity),
    ('pattern-unbiasedness', pattern_unbiasedness),
    ('process-convention-lock', process_convention_lock),
    ('detector-convention-lock', detector_convention_lock),
])


def run_suites(suites=None):
  """Runs suites in order, stopping after the first failure.

  Args:
    suites: Ordered mapping of name to a callable returning
      `(max_error, tolerance)`; defaults to `SUITES`.

  Returns:
    List of `SuiteResult`, ending at the first failed suite.
  """
  if suites is None:
    suites = SUITES
  results = []
  for name, suite in suites.items():
    max_error, tolerance = suite()
    passed = bool(max_error < tolerance)
    results.append(SuiteResult(name, passed, max_error, tolerance))
    if passed:
      logging.info('Suite %s passed (max error %.3g < %.3g)', name, max_error,
                   tolerance)
    else:
      logging.error('Suite %s FAILED (max error %.3g >= %.3g)', name,
                    max_error, tolerance)
      break
  return results
