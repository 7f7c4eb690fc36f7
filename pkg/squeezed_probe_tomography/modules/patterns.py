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

"""Loss-compensating pattern functions.

For a homodyne detector of efficiency `eta` the kernel

    f_mn(x, eta) = (eta/2) int dq |q| exp(iqx) exp(q^2 (1 - eta)/4)
                   <m| exp(-i sqrt(eta) q x_op) |n>

has the property that averaging `f_mn(x, eta) exp(i (m - n) theta)` over
measured outcomes `x` and uniform angles `theta` in [0, 2 pi) gives the density
matrix element `rho_mn`. The matrix element of the displacement is symmetric
in `(m, n)`, so every `f_mn` is real, `f_nm = f_mn`, and
`f_mn(-x) = (-1)^(m+n) f_mn(x)`. Folding the integral onto `q >= 0` leaves

    f_mn(x) = eta c (eta/2)^(d/2) s_d int_0^inf q^(d+1)
              exp(q^2 (1 - 2 eta)/4) L_low^(d)(eta q^2/2) trig(q x) dq

with `low = min(m, n)`, `d = |m - n|`, `c = sqrt(low!/(low + d)!)`, and
`trig = cos, s_d = (-1)^(d/2)` for even `d`, `trig = sin, s_d =
(-1)^((d-1)/2)` for odd `d`. The Gaussian factor decays only for
`eta > 1/2`.
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
from scipy import interpolate
from scipy import special
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.sample import homodyne
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import fock
from squeezed_probe_tomography.util import serialization


def check_efficiency(eta, min_efficiency=None):
  """Raises `DomainError` unless `eta` admits well-behaved kernels."""
  if min_efficiency is None:
    min_efficiency = settings.MIN_EFFICIENCY
  if not settings.EFFICIENCY_HARD_LIMIT < eta <= 1:
    raise errors.DomainError(
        'Pattern functions need 1/2 < eta <= 1, got {}'.format(eta))
  if eta < min_efficiency:
    raise errors.DomainError(
        'eta = {} is below the minimum efficiency {}; kernels and estimator '
        'variance blow up towards 1/2'.format(eta, min_efficiency))


def _kernel_terms(m, n, eta):
  """Returns `(low, d, prefactor)` of the folded kernel of `f_mn`."""
  low = min(m, n)
  d = abs(m - n)
  log_c = 0.5 * (math.lgamma(low + 1) - math.lgamma(low + d + 1))
  sign = (-1)**(d // 2)
  prefactor = eta * math.exp(log_c) * (eta / 2)**(d / 2) * sign
  return low, d, prefactor


def _radial(q, low, d, eta):
  return (q**(d + 1) * np.exp(q**2 * (1 - 2 * eta) / 4)
          * special.eval_genlaguerre(low, d, eta * q**2 / 2))


def integration_limit(m, n, eta):
  """Returns `Q` such that the folded integrand is negligible beyond it.

  The envelope `|q^(d+1) exp(q^2 (1 - 2 eta)/4) L(eta q^2/2)|` is scanned in
  log space and `Q` is where it falls below `PATTERN_ENVELOPE_CUTOFF` times
  its peak for good.

  Raises:
    NumericalError: If the envelope peak exceeds the divergence bound.
  """
  low, d, _ = _kernel_terms(m, n, eta)
  q_scan = math.sqrt(3200 / (2 * eta - 1))
  q = np.linspace(0, q_scan, 20001)[1:]
  with np.errstate(divide='ignore'):
    log_envelope = ((d + 1) * np.log(q) + q**2 * (1 - 2 * eta) / 4
                    + np.log(np.abs(special.eval_genlaguerre(
                        low, d, eta * q**2 / 2))))
  peak = np.max(log_envelope)
  if peak > math.log(settings.PATTERN_DIVERGENCE_BOUND):
    raise errors.NumericalError(
        'Pattern kernel ({}, {}) at eta = {} diverges (envelope e^{:.0f})'
        .format(m, n, eta, peak))
  above = np.nonzero(
      log_envelope > peak + math.log(settings.PATTERN_ENVELOPE_CUTOFF))[0]
  return q[min(above[-1] + 1, len(q) - 1)]


def pattern_value(m, n, x, eta, min_efficiency=None):
  """Returns `f_mn(x, eta)` by adaptive oscillatory quadrature.

  Args:
    m: Row index >= 0.
    n: Column index >= 0.
    x: Measured quadrature value.
    eta: Detector efficiency in (1/2, 1].
    min_efficiency: Optional override of `settings.MIN_EFFICIENCY`.

  Returns:
    The (real) kernel value, as a float.
  """
  check_efficiency(eta, min_efficiency)
  low, d, prefactor = _kernel_terms(m, n, eta)
  limit = integration_limit(m, n, eta)
  odd = d % 2 == 1
  if x == 0:
    if odd:
      return 0.0
    value, _ = integrate.quad(_radial, 0, limit, args=(low, d, eta),
                              limit=500)
  else:
    value, _ = integrate.quad(_radial, 0, limit, args=(low, d, eta),
                              weight='sin' if odd else 'cos', wvar=abs(x),
                              limit=500)
    if odd and x < 0:
      value = -value
  return prefactor * value


def _gauss_legendre_nodes(limit):
  """Returns nodes and weights of the composite rule on [0, limit]."""
  width = settings.PATTERN_PANEL_WIDTH
  panels = int(math.ceil(limit / width))
  nodes, weights = np.polynomial.legendre.leggauss(settings.PATTERN_PANEL_NODES)
  centers = (np.arange(panels) + 0.5) * width
  q = (centers[:, np.newaxis] + 0.5 * width * nodes).ravel()
  w = np.tile(0.5 * width * weights, panels)
  return q, w


def tabulate(m_max, eta, x):
  """Evaluates `f_mn(x, eta)` for all `m, n <= m_max` on an array `x`.

  Uses a composite Gauss-Legendre rule on `[0, Q]`, vectorized over `x`.

  Returns:
    Real array of shape `(m_max + 1, m_max + 1, len(x))`.
  """
  x = np.asarray(x, dtype=np.float64)
  values = np.empty((m_max + 1, m_max + 1, len(x)))
  for m in range(m_max + 1):
    for n in range(m + 1):
      low, d, prefactor = _kernel_terms(m, n, eta)
      q, w = _gauss_legendre_nodes(integration_limit(m, n, eta))
      radial = w * _radial(q, low, d, eta)
      trig = np.sin if d % 2 else np.cos
      row = prefactor * (radial @ trig(np.outer(q, x)))
      values[m, n] = row
      values[n, m] = row
  return values


class PatternGrid(collections.namedtuple('PatternGrid',
                                         ('half_width', 'points'))):
  """Uniform grid `linspace(-half_width, half_width, points)`."""

  @property
  def x(self):
    return np.linspace(-self.half_width, self.half_width, self.points)


def default_grid():
  half_width = settings.PATTERN_HALF_WIDTH
  points = int(round(2 * half_width / settings.PATTERN_GRID_SPACING)) + 1
  return PatternGrid(half_width, points)


class PatternTable(object):
  """Tabulated `f_mn(x, eta)` with cubic-spline lookup.

  Outcomes outside the grid are evaluated directly with `tabulate`.
  """

  def __init__(self, eta, m_max, grid, values):
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (m_max + 1, m_max + 1, grid.points):
      raise ValueError('Table values have shape {}, expected {}'.format(
          values.shape, (m_max + 1, m_max + 1, grid.points)))
    self._eta = float(eta)
    self._m_max = int(m_max)
    self._grid = PatternGrid(float(grid.half_width), int(grid.points))
    self._values = values
    self._spline = interpolate.CubicSpline(self._grid.x, values, axis=-1)

  @property
  def eta(self):
    return self._eta

  @property
  def m_max(self):
    return self._m_max

  @property
  def grid(self):
    return self._grid

  @property
  def x(self):
    return self._grid.x

  @property
  def values(self):
    return self._values

  @property
  def key(self):
    return (self._m_max, self._eta, self._grid.half_width, self._grid.points)

  def __call__(self, x):
    """Returns `f_mn(x)` for an array of outcomes, shape `(M, M, len(x))`."""
    x = np.asarray(x, dtype=np.float64)
    result = self._spline(x)
    outside = np.abs(x) > self._grid.half_width
    if np.any(outside):
      logging.debug('Evaluating %d pattern values off the table',
                    np.count_nonzero(outside))
      result[..., outside] = tabulate(self._m_max, self._eta, x[outside])
    return result

  def per_sample(self, x):
    """Returns `f_mn(x_s)` with the sample axis first, shape `(S, M, M)`."""
    return np.moveaxis(self(x), -1, 0)


@functools.lru_cache(maxsize=16)
def _cached_table(m_max, eta, half_width, points):
  grid = PatternGrid(half_width, points)
  logging.info('Tabulating pattern functions m_max=%d eta=%.6g on %d points',
               m_max, eta, points)
  return PatternTable(eta, m_max, grid, tabulate(m_max, eta, grid.x))


def build_table(m_max, eta, grid=None, min_efficiency=None):
  """Returns the (cached) `PatternTable` for `(m_max, eta, grid)`."""
  check_efficiency(eta, min_efficiency)
  if m_max < 0:
    raise errors.DomainError('m_max must be >= 0, got {}'.format(m_max))
  if grid is None:
    grid = default_grid()
  return _cached_table(int(m_max), float(eta), float(grid.half_width),
                       int(grid.points))


def save_table(table, path):
  """Writes a table as a versioned `.npz` file."""
  with serialization.atomic_open(path, 'wb') as f:
    np.savez(f, format=settings.PATTERN_TABLE_FORMAT,
             version=settings.PATTERN_TABLE_VERSION, m_max=table.m_max,
             eta=table.eta, half_width=table.grid.half_width,
             points=table.grid.points, values=table.values)


def load_table(path, m_max=None, eta=None, grid=None):
  """Reads a table, checking the format version and, if given, the key.

  Raises:
    ConfigError: If the file is not a pattern table of the current version or
      its `(m_max, eta, grid)` differs from the requested one.
  """
  try:
    with np.load(path, allow_pickle=False) as data:
      if (str(data['format']) != settings.PATTERN_TABLE_FORMAT
          or int(data['version']) != settings.PATTERN_TABLE_VERSION):
        raise errors.ConfigError('{} is not a version {} pattern table'
                                 .format(path, settings.PATTERN_TABLE_VERSION))
      table = PatternTable(
          float(data['eta']), int(data['m_max']),
          PatternGrid(float(data['half_width']), int(data['points'])),
          data['values'])
  except errors.TomographyError:
    raise
  except (IOError, OSError, KeyError, ValueError) as error:
    raise errors.ConfigError('Cannot read pattern table {}: {}'
                             .format(path, error))
  expected = (m_max if m_max is not None else table.m_max,
              eta if eta is not None else table.eta,
              grid.half_width if grid is not None else table.grid.half_width,
              grid.points if grid is not None else table.grid.points)
  if expected != table.key:
    raise errors.ConfigError('Pattern table {} has key {}, expected {}'
                             .format(path, table.key, expected))
  return table


def reconstruct_operator(table, operator):
  """Applies the pattern-function estimator to exact homodyne statistics.

  Computes `(1/2 pi) int dtheta int dx p_eta(x, theta) f_mn(x)
  exp(i (m - n) theta)` with the trapezoid rule on the table grid and a
  uniform angle rule with enough nodes to be exact. `p_eta` is the measured
  density of `operator` at the table's efficiency; the operator need not be
  Hermitian, and the map is linear in it.

  Args:
    table: `PatternTable`.
    operator: Fock-basis operator.

  Returns:
    Complex array of shape `(m_max + 1, m_max + 1)`.
  """
  operator = np.asarray(operator)
  cutoff = fock.cutoff_of(operator)
  attenuated = fock.attenuate(operator, table.eta)
  n_theta = cutoff + table.m_max + 1
  theta = 2 * math.pi * np.arange(n_theta) / n_theta
  x = table.x
  densities = homodyne.ideal_densities(attenuated, theta, x)
  weighted = densities * homodyne.trapezoid_weights(x)
  integrals = np.einsum('tx,mnx->tmn', weighted, table.values)
  phases = np.conj(fock.phase_factors(theta, table.m_max))
  return np.mean(integrals * phases, axis=0)


def verify_unbiasedness(table, rho, eta=None):
  """Returns `max_mn |estimate_mn - rho_mn|` over the table's indices."""
  if eta is not None and abs(eta - table.eta) > 1e-12:
    raise errors.DomainError('Table is for eta = {}, not {}'
                             .format(table.eta, eta))
  rho = np.asarray(rho)
  size = min(table.m_max, fock.cutoff_of(rho)) + 1
  estimate = reconstruct_operator(table, rho)
  target = np.zeros_like(estimate)
  target[:size, :size] = rho[:size, :size]
  return float(np.max(np.abs(estimate - target)))
