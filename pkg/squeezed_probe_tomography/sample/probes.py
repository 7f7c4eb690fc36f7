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

"""Single-mode squeezed probes in Gaussian and Fock form.

A probe is a squeezed thermal state with variances `(V-, V+)` along `(x, p)`,
displaced by `d` along x and then conjugated by `U(theta)`:

    rho = U(theta) D(d / sqrt(2)) S(s) rho_th(n_bar) S(s)^dagger
          D(d / sqrt(2))^dagger U(theta)^dagger.

An ensemble of such probes with `d = d_coeff x_a`, `x_a ~ N(0, V_A)` and
uniform `theta` reproduces the states that a homodyne measurement of one mode
of a two-mode squeezed vacuum prepares on the other.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import math

# Dependency imports
from absl import logging
import numpy as np
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import fock


class ProbeSetting(collections.namedtuple(
    'ProbeSetting', ('theta', 'x_a', 'd', 'v_minus', 'v_plus'))):
  """One probe of the ensemble.

  Attributes:
    theta: Phase of the probe, equal to the mode-A homodyne angle.
    x_a: Virtual mode-A outcome.
    d: Displacement of the squeezed quadrature, `d_coeff * x_a`.
    v_minus: Squeezed-quadrature variance.
    v_plus: Anti-squeezed variance.
  """


def probe_setting(params, x_a, theta):
  return ProbeSetting(theta=theta, x_a=x_a, d=params.d_coeff * x_a,
                      v_minus=params.v_minus, v_plus=params.v_plus)


def squeezed_thermal_decomposition(v_minus, v_plus):
  """Returns `(n_bar, s)` with `S(s) rho_th(n_bar) S(s)^dagger` of variances
  `(v_minus, v_plus)`.

  Raises:
    DomainError: If the variances violate `V+ V- >= 1/4` or are not ordered.
  """
  if not 0 < v_minus < v_plus:
    raise errors.DomainError('Need 0 < V- < V+, got V- = {}, V+ = {}'
                             .format(v_minus, v_plus))
  product = v_minus * v_plus
  if 4 * product < 1 - settings.PHYSICALITY_TOLERANCE:
    raise errors.DomainError('Unphysical variances: V+ V- = {} < 1/4'
                             .format(product))
  n_bar = max(0.0, (2 * math.sqrt(product) - 1) / 2)
  s = 0.25 * math.log(v_plus / v_minus)
  return n_bar, s


def truncation_check(rho, epsilon=None):
  """Returns `(ok, leak)` for a state on a truncated Fock space.

  `leak` is the larger of the population in the top
  `settings.TRUNCATION_EDGE_LEVELS` levels and the trace deficit; `ok` is
  whether it is below `epsilon`.
  """
  if epsilon is None:
    epsilon = settings.TRUNCATION_TOLERANCE
  rho = np.asarray(rho)
  populations = np.real(np.diagonal(rho, axis1=-2, axis2=-1))
  edge = np.sum(populations[..., -settings.TRUNCATION_EDGE_LEVELS:], axis=-1)
  deficit = np.abs(1 - np.sum(populations, axis=-1))
  leak = np.maximum(edge, deficit)
  return bool(np.all(leak < epsilon)), float(np.max(leak))


def _check_truncation(rho, what):
  ok, leak = truncation_check(rho)
  if not ok:
    raise errors.TruncationError(
        '{} leaks {:.3g} to the Fock cutoff {}; raise the cutoff'
        .format(what, leak, fock.cutoff_of(rho)))


def probe_fock_state(setting, cutoff):
  """Returns the density matrix of a probe.

  Raises:
    TruncationError: If the state is not held by the truncation.
  """
  n_bar, s = squeezed_thermal_decomposition(setting.v_minus, setting.v_plus)
  squeeze = fock.squeeze_operator(s, cutoff)
  displace = fock.displacement_operator(setting.d / math.sqrt(2), cutoff)
  rotate = fock.phase_operator(setting.theta, cutoff)
  transform = rotate @ displace @ squeeze
  rho = transform @ fock.thermal_state(n_bar, cutoff) @ transform.conj().T
  _check_truncation(rho, 'Probe')
  return rho


def probe_moments(params, x_a, theta):
  """Returns means `(S, 2)` and covariances `(S, 2, 2)` of a probe batch.

  Vectorized `gaussian.probe_gaussian_state` over outcomes and angles.
  """
  theta = np.asarray(theta, dtype=np.float64)
  cos = np.cos(theta)
  sin = np.sin(theta)
  rotations = np.stack([np.stack([cos, sin], axis=-1),
                        np.stack([-sin, cos], axis=-1)], axis=-2)
  d = params.d_coeff * np.asarray(x_a, dtype=np.float64)
  means = rotations[..., 0] * d[..., np.newaxis]
  core = np.diag([2 * params.v_minus, 2 * params.v_plus])
  covs = rotations @ core @ np.swapaxes(rotations, -1, -2)
  return means, covs


class ProbeFactory(object):
  """Builds probe density matrices in batches.

  The squeezed thermal core and the eigenbasis of the displacement generator
  are computed once; a batch then costs a few matrix products per probe.
  """

  def __init__(self, params, cutoff):
    n_bar, s = squeezed_thermal_decomposition(params.v_minus, params.v_plus)
    squeeze = fock.squeeze_operator(s, cutoff).real
    thermal = fock.thermal_state(n_bar, cutoff).real
    self._core = squeeze @ thermal @ squeeze.T
    self._displacements = fock.RealDisplacements(cutoff)
    self._params = params
    self._cutoff = cutoff

  @property
  def cutoff(self):
    return self._cutoff

  @property
  def params(self):
    return self._params

  def unrotated(self, x_a):
    """Returns the real probes with `theta = 0`, shape `(S, d, d)`."""
    alphas = self._params.d_coeff * np.asarray(x_a) / math.sqrt(2)
    displace = self._displacements(alphas)
    return np.matmul(np.matmul(displace, self._core),
                     np.swapaxes(displace, -1, -2))

  def __call__(self, x_a, theta):
    """Returns probes for arrays of outcomes and angles, shape `(S, d, d)`."""
    return self.unrotated(x_a) * fock.phase_factors(theta, self._cutoff)

  def edge_check(self):
    """Checks the probe at the clamp bound and logs its leak."""
    bound = settings.CLAMP_WIDTH * math.sqrt(self._params.v_a)
    rho = self.unrotated(np.array([bound]))[0]
    ok, leak = truncation_check(rho)
    logging.info('Probe at |x_a| = %.3f leaks %.3g at cutoff %d', bound, leak,
                 self._cutoff)
    return ok, leak


def condition_two_mode_fock(lambda_, x_a, theta, cutoff):
  """Returns mode B of `sum_n lambda^n |nn>` after measuring `x_A^theta`.

  This is the conditional state computed directly in the two-mode Fock basis:
  `<x_A^theta|n> = exp(-i n theta) psi_n(x_a)`, so mode B is left in
  `sum_n lambda^n exp(-i n theta) psi_n(x_a) |n>`, normalized.
  """
  levels = np.arange(cutoff + 1)
  amplitudes = (lambda_**levels * np.exp(-1j * levels * theta)
                * fock.hermite_wavefunctions(cutoff, x_a))
  rho = np.outer(amplitudes, amplitudes.conj())
  return rho / np.trace(rho).real
