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

"""Homodyne statistics of truncated Fock states and Gaussian states.

An inefficient homodyne detector of efficiency `eta` at angle `phi` reports

    x = sqrt(eta) x_phi + sqrt(1 - eta) x_vac,

where `x_phi = x cos(phi) + p sin(phi)` and `x_vac` is a vacuum quadrature of
variance 1/2. The ideal density is
`p(y, phi) = sum_mn rho_mn exp(-i (m - n) phi) psi_m(y) psi_n(y)`.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import functools
import math

# Dependency imports
from absl import logging
import numpy as np
from scipy import integrate
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import fock


# States per density evaluation; bounds the (S, d, X) intermediate.
_DENSITY_CHUNK = 64


class QuadratureGrid(collections.namedtuple('QuadratureGrid', ('x', 'values'))):
  """A quadrature density tabulated on a uniform grid.

  Attributes:
    x: Increasing grid points.
    values: Density at the grid points, >= 0.
  """

  @property
  def x_min(self):
    return self.x[0]

  @property
  def x_max(self):
    return self.x[-1]

  @property
  def n_points(self):
    return len(self.x)

  def mass(self):
    return integrate.trapezoid(self.values, self.x)

  def moment(self, power):
    return integrate.trapezoid(self.x**power * self.values, self.x)


def _check_efficiency(eta):
  if not 0 < eta <= 1:
    raise errors.DomainError('Homodyne efficiency must lie in (0, 1], got {}'
                             .format(eta))


def grid_points(cutoff, n_points=None):
  """Returns the default grid for a state truncated at `cutoff`."""
  if n_points is None:
    n_points = settings.GRID_POINTS
  half_width = settings.GRID_MARGIN + math.sqrt(2 * cutoff)
  return np.linspace(-half_width, half_width, n_points)


def trapezoid_weights(x):
  weights = np.empty_like(x)
  spacing = np.diff(x)
  weights[0] = spacing[0] / 2
  weights[-1] = spacing[-1] / 2
  weights[1:-1] = (spacing[:-1] + spacing[1:]) / 2
  return weights


@functools.lru_cache(maxsize=8)
def _smearing_matrix(x_min, x_max, n_points, eta):
  x = np.linspace(x_min, x_max, n_points)
  variance = (1 - eta) / 2
  difference = x[:, np.newaxis] - math.sqrt(eta) * x[np.newaxis, :]
  kernel = (np.exp(-difference**2 / (2 * variance))
            / math.sqrt(2 * math.pi * variance))
  return kernel * trapezoid_weights(x)[np.newaxis, :]


def smearing_matrix(x, eta):
  """Returns `K` with `(K p)_i = int N(x_i; sqrt(eta) y, (1 - eta)/2) p(y) dy`.

  The integral is the trapezoid rule on the (uniform) grid `x` itself.
  """
  _check_efficiency(eta)
  if eta == 1:
    return np.eye(len(x))
  return _smearing_matrix(float(x[0]), float(x[-1]), len(x), float(eta))


def ideal_densities(rho, phi, x):
  """Returns `p(x, phi)` for an operator (or stack) at angle(s) `phi`.

  Args:
    rho: Operator of shape `(d, d)` or `(S, d, d)`.
    phi: Angle, or array of shape `(S,)`.
    x: Grid of shape `(X,)`.

  Returns:
    Real array of shape `(X,)` or `(S, X)`; complex if `rho` is not
    Hermitian.
  """
  rho = np.asarray(rho)
  cutoff = fock.cutoff_of(rho)
  rotated = rho * fock.phase_factors(phi, cutoff)
  psi = fock.hermite_wavefunctions(cutoff, x)
  density = np.sum(np.matmul(rotated, psi) * psi, axis=-2)
  if np.max(np.abs(rho - np.conj(np.swapaxes(rho, -1, -2)))) < 1e-10:
    return density.real
  return density


def check_mass(grid):
  """Warns or raises if `grid` does not hold the distribution's mass."""
  mass = grid.mass()
  if mass < settings.GRID_MASS_MINIMUM:
    raise errors.GridMassError(
        'Quadrature grid [{:.3g}, {:.3g}] holds only mass {:.6f}'
        .format(grid.x_min, grid.x_max, mass))
  if abs(mass - 1) > settings.GRID_MASS_WARNING:
    logging.warning('Quadrature grid mass is %.6f', mass)
  return mass


def quadrature_distribution(rho, phi, eta, x=None):
  """Returns the measured quadrature density of `rho`.

  The ideal density is smeared by direct discrete convolution with the
  detector noise on the same grid.

  Args:
    rho: Normalized density matrix.
    phi: Homodyne angle.
    eta: Efficiency in (0, 1].
    x: Optional uniform grid; defaults to `grid_points`.

  Returns:
    `QuadratureGrid`.

  Raises:
    DomainError: If `eta` is outside (0, 1].
    GridMassError: If the grid misses more than 1e-3 of the mass.
  """
  _check_efficiency(eta)
  rho = np.asarray(rho)
  if x is None:
    x = grid_points(fock.cutoff_of(rho))
  if eta < 1 and math.sqrt((1 - eta) / 2) < 2 * (x[1] - x[0]):
    # Noise narrower than the grid: attenuate in the Fock basis instead.
    smeared = ideal_densities(fock.attenuate(rho, eta), phi, x)
  else:
    smeared = smearing_matrix(x, eta) @ ideal_densities(rho, phi, x)
  if np.min(smeared) < -1e-10:
    raise errors.NumericalError('Quadrature density is negative: {}'
                                .format(np.min(smeared)))
  grid = QuadratureGrid(x, np.maximum(smeared, 0))
  check_mass(grid)
  return grid


def _inverse_cdf(x, density, uniforms):
  cdf = integrate.cumulative_trapezoid(density, x, initial=0)
  cdf /= cdf[-1]
  return np.interp(uniforms, cdf, x)


def sample_quadrature_generic(rho, phi, eta, rng, size=None):
  """Draws homodyne outcomes by inverting the tabulated CDF.

  Args:
    rho: Normalized density matrix.
    phi: Homodyne angle.
    eta: Efficiency in (0, 1].
    rng: `numpy.random.Generator`.
    size: Number of samples, or None for a single float.

  Returns:
    Samples distributed as `quadrature_distribution(rho, phi, eta)`.
  """
  grid = quadrature_distribution(rho, phi, eta)
  uniforms = rng.random(size)
  return _inverse_cdf(grid.x, grid.values, uniforms)


def sample_quadrature_batch(rhos, phis, eta, rng):
  """Draws one outcome for each state in a stack, each at its own angle.

  The ideal quadrature is drawn by inverse CDF and the detector noise is then
  added as `sqrt(eta) y + sqrt((1 - eta)/2) z`, which has the same law as the
  smeared density without a convolution per state.

  Args:
    rhos: States of shape `(S, d, d)`, each normalized.
    phis: Angles of shape `(S,)`.
    eta: Efficiency in (0, 1].
    rng: `numpy.random.Generator`.

  Returns:
    Array of shape `(S,)`.
  """
  _check_efficiency(eta)
  rhos = np.asarray(rhos)
  x = grid_points(fock.cutoff_of(rhos[0]))
  densities = np.concatenate([
      np.maximum(ideal_densities(rhos[i:i + _DENSITY_CHUNK],
                                 phis[i:i + _DENSITY_CHUNK], x), 0)
      for i in range(0, len(rhos), _DENSITY_CHUNK)])
  masses = integrate.trapezoid(densities, x, axis=-1)
  if np.min(masses) < settings.GRID_MASS_MINIMUM:
    raise errors.GridMassError('Quadrature grid holds only mass {:.6f}'
                               .format(np.min(masses)))
  uniforms = rng.random(len(rhos))
  noise = rng.standard_normal(len(rhos))
  ideal = np.array([_inverse_cdf(x, density, uniform)
                    for density, uniform in zip(densities, uniforms)])
  return math.sqrt(eta) * ideal + math.sqrt((1 - eta) / 2) * noise


def gaussian_quadrature_moments(means, covs, phis):
  """Returns mean and variance of `x_phi` for stacks of one-mode states."""
  directions = np.stack([np.cos(phis), np.sin(phis)], axis=-1)
  mean = np.sum(directions * means, axis=-1)
  variance = np.einsum('si,sij,sj->s', directions, covs, directions) / 2
  return mean, variance


def sample_quadrature_gaussian(state, phi, eta, rng, size=None):
  """Draws from `N(sqrt(eta) mu_phi, eta sigma_phi^2 + (1 - eta)/2)`."""
  _check_efficiency(eta)
  mean, variance = gaussian_quadrature_moments(
      state.mean[np.newaxis], state.cov[np.newaxis], np.array([phi]))
  scale = math.sqrt(eta * variance[0] + (1 - eta) / 2)
  return rng.normal(math.sqrt(eta) * mean[0], scale, size)


def sample_gaussian_batch(means, covs, phis, eta, rng):
  """Vectorized `sample_quadrature_gaussian`, one draw per state."""
  _check_efficiency(eta)
  mean, variance = gaussian_quadrature_moments(means, covs, phis)
  scale = np.sqrt(eta * variance + (1 - eta) / 2)
  return math.sqrt(eta) * mean + scale * rng.standard_normal(len(mean))


def sample_xa(params, rng, size=None):
  """Draws virtual mode-A outcomes, `N(0, V_A)` for every angle."""
  return rng.normal(0.0, math.sqrt(params.v_a), size)


def clamp_xa(x_a, params):
  """Clamps `|x_a| <= CLAMP_WIDTH sqrt(V_A)`; returns `(clamped, count)`."""
  bound = settings.CLAMP_WIDTH * math.sqrt(params.v_a)
  x_a = np.asarray(x_a)
  count = int(np.count_nonzero(np.abs(x_a) > bound))
  return np.clip(x_a, -bound, bound), count
