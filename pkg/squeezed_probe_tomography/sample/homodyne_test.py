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

"""Tests for sample.homodyne."""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import math

# Dependency imports
from absl.testing import absltest
from absl.testing import parameterized
import numpy as np
from scipy import stats
from squeezed_probe_tomography.sample import homodyne
from squeezed_probe_tomography.sample import probes
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import fock
from squeezed_probe_tomography.util import gaussian


def _random_density_matrix(rng, cutoff):
  size = cutoff + 1
  matrix = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
  rho = matrix @ matrix.conj().T
  return rho / np.trace(rho)


class QuadratureDistributionTest(parameterized.TestCase):

  @parameterized.parameters(0.0, 1.0, 2.5)
  def testVacuum(self, phi):
    x = np.linspace(-8, 8, 1601)
    grid = homodyne.quadrature_distribution(fock.fock_state(0, 6), phi, 1.0, x)
    self.assertAlmostEqual(grid.values[800], 1 / math.sqrt(math.pi))
    self.assertAlmostEqual(grid.values[800], 0.564190, places=6)
    self.assertAlmostEqual(grid.mass(), 1.0, places=10)

  def testSinglePhoton(self):
    x = np.linspace(-8, 8, 1601)
    grid = homodyne.quadrature_distribution(fock.fock_state(1, 6), 0.3, 1.0, x)
    np.testing.assert_allclose(
        grid.values, 2 * x**2 * np.exp(-x**2) / math.sqrt(math.pi),
        atol=1e-12)
    self.assertAlmostEqual(grid.values[800], 0.0)

  def testSinglePhotonWithLoss(self):
    grid = homodyne.quadrature_distribution(fock.fock_state(1, 10), 0.0, 0.8)
    self.assertAlmostEqual(grid.moment(2), 1.3, delta=1e-6)
    self.assertAlmostEqual(grid.moment(1), 0.0, delta=1e-10)

  def testMomentConsistency(self):
    rng = np.random.default_rng(21)
    for _ in range(20):
      rho = _random_density_matrix(rng, 6)
      phi = rng.uniform(0, 2 * math.pi)
      eta = rng.uniform(0.5, 0.95)
      mean, cov = fock.quadrature_moments(rho)
      direction = np.array([math.cos(phi), math.sin(phi)])
      mean_phi = direction @ mean
      second_phi = direction @ cov @ direction / 2 + mean_phi**2
      grid = homodyne.quadrature_distribution(rho, phi, eta)
      self.assertGreater(np.min(grid.values), -1e-10)
      self.assertAlmostEqual(grid.mass(), 1.0, delta=1e-6)
      self.assertAlmostEqual(grid.moment(1), math.sqrt(eta) * mean_phi,
                             delta=1e-6)
      self.assertAlmostEqual(grid.moment(2),
                             eta * second_phi + (1 - eta) / 2, delta=1e-6)

  def testConvolutionMatchesLossChannel(self):
    rho = _random_density_matrix(np.random.default_rng(4), 5)
    eta = 0.8
    grid = homodyne.quadrature_distribution(rho, 1.1, eta)
    expected = homodyne.ideal_densities(fock.attenuate(rho, eta), 1.1, grid.x)
    np.testing.assert_allclose(grid.values, expected, atol=1e-8)

  def testErrors(self):
    with self.assertRaises(errors.DomainError):
      homodyne.quadrature_distribution(fock.fock_state(0, 4), 0.0, 0.0)
    with self.assertRaises(errors.GridMassError):
      homodyne.quadrature_distribution(fock.fock_state(0, 4), 0.0, 1.0,
                                       np.linspace(-0.5, 0.5, 101))


class SamplerTest(absltest.TestCase):

  def testGenericVacuum(self):
    rng = np.random.default_rng(0)
    samples = homodyne.sample_quadrature_generic(
        fock.fock_state(0, 8), 0.0, 1.0, rng, size=100000)
    self.assertAlmostEqual(np.var(samples), 0.5, delta=0.01)

  def testGenericSinglePhotonNode(self):
    rng = np.random.default_rng(1)
    samples = homodyne.sample_quadrature_generic(
        fock.fock_state(1, 8), 0.0, 1.0, rng, size=100000)
    self.assertLess(np.mean(np.abs(samples) < 0.1), 0.002)

  def testGenericKolmogorovSmirnov(self):
    rng = np.random.default_rng(2)
    samples = homodyne.sample_quadrature_generic(
        fock.fock_state(0, 8), 0.7, 0.9, rng, size=10000)
    statistic, _ = stats.kstest(samples, 'norm', args=(0, math.sqrt(0.5)))
    self.assertLess(statistic, 0.02)

  def testGenericAgreesWithGaussianPath(self):
    params = gaussian.probe_params(0.5, 0.8)
    setting = probes.probe_setting(params, 0.9, 1.3)
    rho = probes.probe_fock_state(setting, 30)
    state = gaussian.probe_gaussian_state(params, 0.9, 1.3)
    phi, eta = 0.4, 0.85
    mean, variance = gaussian.quadrature_moments(state, phi)
    args = (math.sqrt(eta) * mean,
            math.sqrt(eta * variance + (1 - eta) / 2))
    generic = homodyne.sample_quadrature_generic(
        rho, phi, eta, np.random.default_rng(3), size=10000)
    fast = homodyne.sample_quadrature_gaussian(
        state, phi, eta, np.random.default_rng(4), size=10000)
    self.assertLess(stats.kstest(generic, 'norm', args=args)[0], 0.02)
    self.assertLess(stats.kstest(fast, 'norm', args=args)[0], 0.02)

  def testGaussianVariances(self):
    rng = np.random.default_rng(5)
    vacuum = gaussian.vacuum()
    samples = homodyne.sample_quadrature_gaussian(vacuum, 0.3, 1.0, rng,
                                                  size=100000)
    self.assertAlmostEqual(np.var(samples), 0.5, delta=0.01)
    squeezed = gaussian.GaussianState([0, 0], np.diag([0.6, 1 / 0.6]))
    samples = homodyne.sample_quadrature_gaussian(squeezed, 0.0, 1.0, rng,
                                                  size=100000)
    self.assertAlmostEqual(np.var(samples), 0.3, delta=0.01)
    samples = homodyne.sample_quadrature_gaussian(squeezed, 0.0, 0.8, rng,
                                                  size=100000)
    self.assertAlmostEqual(np.var(samples), 0.34, delta=0.01)

  def testBatchSampler(self):
    rng = np.random.default_rng(6)
    rhos = np.broadcast_to(fock.fock_state(1, 4), (20000, 5, 5))
    phis = rng.uniform(0, 2 * math.pi, 20000)
    samples = homodyne.sample_quadrature_batch(rhos, phis, 0.8, rng)
    self.assertAlmostEqual(np.mean(samples), 0.0, delta=0.05)
    self.assertAlmostEqual(np.var(samples), 1.3, delta=0.06)

  def testGaussianBatchMatchesMoments(self):
    rng = np.random.default_rng(7)
    n = 200000
    means = np.tile([1.0, 0.0], (n, 1))
    covs = np.broadcast_to(np.diag([0.6, 1 / 0.6]), (n, 2, 2))
    samples = homodyne.sample_gaussian_batch(means, covs, np.zeros(n), 0.8,
                                             rng)
    self.assertAlmostEqual(np.mean(samples), math.sqrt(0.8), delta=0.01)
    self.assertAlmostEqual(np.var(samples), 0.34, delta=0.01)

  def testSampleXa(self):
    params = gaussian.probe_params(0.5, 1.0)
    samples = homodyne.sample_xa(params, np.random.default_rng(8),
                                 size=1000000)
    self.assertAlmostEqual(np.var(samples), 0.771540, delta=0.01)
    self.assertAlmostEqual(np.mean(samples), 0.0,
                           delta=3 * math.sqrt(params.v_a / 1000000))

  def testClamp(self):
    params = gaussian.probe_params(0.5, 1.0)
    bound = 5 * math.sqrt(params.v_a)
    clamped, count = homodyne.clamp_xa(np.array([0.0, 10.0, -10.0]), params)
    self.assertEqual(count, 2)
    np.testing.assert_allclose(clamped, [0.0, bound, -bound])


if __name__ == '__main__':
  absltest.main()
