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

"""Tests for modules.population."""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import cmath
import math

# Dependency imports
from absl.testing import absltest
from absl.testing import parameterized
import numpy as np
from squeezed_probe_tomography.modules import channels
from squeezed_probe_tomography.modules import population
from squeezed_probe_tomography.util import gaussian


_CUTOFF = 40


def _phase_detector(cutoff):
  vector = np.zeros(cutoff + 1, dtype=np.complex128)
  vector[:2] = [1 / math.sqrt(2), 1j / math.sqrt(2)]
  projector = np.outer(vector, vector.conj())
  return channels.Povm([projector, np.eye(cutoff + 1) - projector], 'phase')


class PopulationChoiTest(parameterized.TestCase):

  def testProbeOperators(self):
    params = gaussian.probe_params(0.5, 1.0)
    operators = population.probe_moments_operators(params, 2, _CUTOFF)
    lambda_ = math.tanh(0.5)
    expected = np.zeros_like(operators)
    for k in range(3):
      for l in range(3):
        expected[k, l, k, l] = (1 - lambda_**2) * lambda_**(k + l)
    np.testing.assert_allclose(operators, expected, atol=1e-5)

  def testIdentity(self):
    channel = channels.identity_channel(_CUTOFF)
    chi = population.population_choi(channel, gaussian.probe_params(0.5, 1.0),
                                     0.9, 2)
    oracle = channels.choi_from_kraus(channel, 2)
    self.assertLess(np.max(np.abs(chi - oracle)), 1e-3)

  def testLoss(self):
    channel = channels.loss_channel(0.7, _CUTOFF)
    chi = population.population_choi(channel, gaussian.probe_params(0.5, 1.0),
                                     0.85, 1)
    self.assertAlmostEqual(chi[1, 1, 0, 0].real, math.sqrt(0.7), delta=1e-3)
    self.assertAlmostEqual(chi[1, 1, 0, 0].real, 0.836660, delta=1e-3)
    np.testing.assert_allclose(chi, channels.choi_from_kraus(channel, 1),
                               atol=1e-3)

  def testPhaseSign(self):
    channel = channels.phase_channel(math.pi / 6, _CUTOFF)
    chi = population.population_choi(channel, gaussian.probe_params(0.5, 1.0),
                                     0.9, 1)
    self.assertAlmostEqual(cmath.phase(chi[0, 0, 1, 1]), math.pi / 6,
                           delta=1e-3)

  def testMixedProbe(self):
    params = gaussian.probe_params_from_variances(0.386421, 0.771540)
    channel = channels.identity_channel(_CUTOFF)
    chi = population.population_choi(channel, params, 0.9, 1)
    np.testing.assert_allclose(chi, channels.choi_from_kraus(channel, 1),
                               atol=1e-3)


class PopulationPovmTest(absltest.TestCase):

  def testOnOffDetector(self):
    povm = channels.onoff_detector(0.6, 0.0, 30)
    elements, traces = population.population_povm(
        povm, gaussian.probe_params(0.5, 1.0), 3)
    np.testing.assert_allclose(np.diag(elements[0]).real,
                               [1, 0.4, 0.16, 0.064], atol=1e-3)
    off_diagonal = elements[0] - np.diag(np.diag(elements[0]))
    self.assertLess(np.max(np.abs(off_diagonal)), 1e-3)
    np.testing.assert_allclose(np.sum(elements, axis=0), np.eye(4),
                               atol=1e-3)
    n_bar = math.sinh(0.5)**2
    # Levels above m_max are missing from the trace.
    self.assertAlmostEqual(traces[0], 1 / (1 + 0.6 * n_bar), delta=2e-4)
    self.assertLess(np.sum(traces), 1.0)

  def testTranspose(self):
    povm = _phase_detector(30)
    elements, _ = population.population_povm(
        povm, gaussian.probe_params(0.5, 1.0), 2)
    np.testing.assert_allclose(elements[0], povm.elements[0][:3, :3],
                               atol=1e-3)
    self.assertAlmostEqual(elements[0][0, 1].imag, -0.5, delta=1e-3)


if __name__ == '__main__':
  absltest.main()
