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

"""Closed-form Gaussian calculus for the squeezed-probe protocol.

Quadratures are ordered `(x_A, p_A, x_B, p_B)` and covariance matrices use
`gamma_jk = <dz_j dz_k + dz_k dz_j>`, so the vacuum has identity covariance
and a quadrature of variance `V` appears on the diagonal as `2 V`.

The central objects are the finite two-mode squeezed vacuum with mode A
passed through a loss of efficiency `eta_a`, the state of mode B after a
homodyne measurement of mode A, and the probe ensemble parameters that let
the same conditional states be synthesized from single-mode squeezed light.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import math

# Dependency imports
import numpy as np
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.util import errors


# Below this `gamma_A,xx` the conditioning divides by (numerical) zero.
_MIN_CONDITIONING_VARIANCE = 1e-12


class GaussianState(collections.namedtuple('GaussianState', ('mean', 'cov'))):
  """Gaussian state of one or two modes.

  Attributes:
    mean: Real vector of length `2 * modes`, ordered `(x, p)` per mode.
    cov: Real symmetric matrix; the vacuum has identity covariance.
  """

  def __new__(cls, mean, cov):
    mean = np.asarray(mean, dtype=np.float64)
    cov = np.asarray(cov, dtype=np.float64)
    if mean.ndim != 1 or mean.shape[0] % 2 or cov.shape != (mean.shape[0],) * 2:
      raise ValueError('Inconsistent shapes: mean {}, cov {}'
                       .format(mean.shape, cov.shape))
    return super(GaussianState, cls).__new__(cls, mean, cov)

  @property
  def modes(self):
    return self.mean.shape[0] // 2


class ProbeEnsembleParams(collections.namedtuple(
    'ProbeEnsembleParams',
    ('v_minus', 'v_plus', 'eta_a', 'lambda_', 'v_a', 'd_coeff', 'r'))):
  """Parameters of a squeezed-probe ensemble.

  Attributes:
    v_minus: Variance of the squeezed quadrature of each probe.
    v_plus: Variance of the anti-squeezed quadrature.
    eta_a: Effective homodyne efficiency of the virtual mode A.
    lambda_: `tanh(r)`; Fock amplitudes of the equivalent two-mode squeezed
      vacuum decay as `lambda_**n`.
    v_a: Variance of the virtual outcome `x_a`.
    d_coeff: Displacement of the squeezed quadrature per unit `x_a`.
    r: Two-mode squeezing constant.
  """


def vacuum(modes=1):
  return GaussianState(np.zeros(2 * modes), np.eye(2 * modes))


def symplectic_form(modes):
  return np.kron(np.eye(modes), np.array([[0., 1.], [-1., 0.]]))


def rotation_matrix(theta):
  """Returns the action of `U(theta) = exp(-i n theta)` on `(x, p)`.

  Conjugating a state by `U(theta)` maps its mean to `M mean` and its
  covariance to `M cov M^T`, where `M` is the returned matrix.
  """
  c = math.cos(theta)
  s = math.sin(theta)
  return np.array([[c, s], [-s, c]])


def physicality_residual(state):
  """Returns the most negative eigenvalue of `cov + i Omega` (0 if valid)."""
  matrix = state.cov + 1j * symplectic_form(state.modes)
  return min(0.0, np.min(np.linalg.eigvalsh(matrix)))


def is_valid(state, atol=1e-9):
  """Returns whether `cov` is symmetric and obeys the uncertainty relation."""
  if np.max(np.abs(state.cov - state.cov.T)) > 1e-12:
    return False
  return physicality_residual(state) > -atol


def rotate(state, theta, mode=0):
  """Returns the state with `mode` conjugated by `U(theta)`."""
  transform = np.eye(2 * state.modes)
  block = slice(2 * mode, 2 * mode + 2)
  transform[block, block] = rotation_matrix(theta)
  return GaussianState(transform @ state.mean,
                       transform @ state.cov @ transform.T)


def reduced(state, mode):
  block = slice(2 * mode, 2 * mode + 2)
  return GaussianState(state.mean[block], state.cov[block, block])


def quadrature_moments(state, phi, mode=0):
  """Returns mean and variance of `x_phi = x cos(phi) + p sin(phi)`."""
  single = reduced(state, mode)
  direction = np.array([math.cos(phi), math.sin(phi)])
  mean = direction @ single.mean
  variance = direction @ single.cov @ direction / 2
  return mean, variance


def apply_gaussian_channel(state, action):
  """Applies the Gaussian channel `(X, Y)` to a single-mode state.

  The mean maps to `X mean` and the covariance to `X cov X^T + Y`.

  Args:
    state: Single-mode `GaussianState`.
    action: Pair `(X, Y)` of 2x2 real matrices.

  Returns:
    The output `GaussianState`.
  """
  return GaussianState(*apply_gaussian_action(state.mean, state.cov, action))


def apply_gaussian_action(means, covs, action):
  """Applies `(X, Y)` to means of shape `(..., 2)` and covs `(..., 2, 2)`."""
  transform, noise = action
  transform = np.asarray(transform, dtype=np.float64)
  means = np.asarray(means, dtype=np.float64) @ transform.T
  covs = transform @ np.asarray(covs, dtype=np.float64) @ transform.T + noise
  return means, covs


def _check_efficiency(eta, name='eta'):
  if not 0 < eta <= 1:
    raise errors.DomainError('{} must lie in (0, 1], got {}'.format(name, eta))


def tmsv_covariance(r, eta_a):
  """Returns the two-mode squeezed vacuum with a loss `eta_a` on mode A.

  Args:
    r: Squeezing constant >= 0.
    eta_a: Transmission of mode A, in (0, 1].

  Returns:
    Zero-mean two-mode `GaussianState` with diagonal blocks `2 V_A`, `2 V_B`
    and correlations `+K` between the x quadratures and `-K` between the p
    quadratures.
  """
  if r < 0:
    raise errors.DomainError('Squeezing constant must be >= 0, got {}'
                             .format(r))
  _check_efficiency(eta_a, 'eta_a')
  cosh = math.cosh(2 * r)
  two_v_a = eta_a * cosh + 1 - eta_a
  two_v_b = cosh
  k = math.sqrt(eta_a) * math.sinh(2 * r)
  cov = np.array([[two_v_a, 0, k, 0],
                  [0, two_v_a, 0, -k],
                  [k, 0, two_v_b, 0],
                  [0, -k, 0, two_v_b]])
  return GaussianState(np.zeros(4), cov)


def condition_on_homodyne(state, x_meas, theta):
  """Returns mode B after measuring `x_A^theta = x_meas` on mode A.

  Mode A is first conjugated by `U(theta)` so that the measured quadrature
  becomes its x quadrature; the Schur complement then gives the conditional
  covariance of mode B, which does not depend on `x_meas`.

  Args:
    state: Two-mode `GaussianState`.
    x_meas: Measured value of `x_A cos(theta) + p_A sin(theta)`.
    theta: Homodyne angle on mode A.

  Returns:
    Single-mode `GaussianState` of mode B.

  Raises:
    SingularConditioningError: If the measured quadrature has no variance.
  """
  if state.modes != 2:
    raise ValueError('Conditioning needs a two-mode state, got {} modes'
                     .format(state.modes))
  state = rotate(state, theta, mode=0)
  gamma_a = state.cov[0, 0]
  if gamma_a < _MIN_CONDITIONING_VARIANCE:
    raise errors.SingularConditioningError(
        'Measured quadrature variance {} is singular'.format(gamma_a / 2))
  correlation = state.cov[2:4, 0]
  cov = state.cov[2:4, 2:4] - np.outer(correlation, correlation) / gamma_a
  mean = state.mean[2:4] + correlation * (x_meas - state.mean[0]) / gamma_a
  return GaussianState(mean, cov)


def variances_from_squeezing(r, eta_a):
  """Returns `(V-, V+)` of the conditional states of `tmsv_covariance`."""
  _check_efficiency(eta_a, 'eta_a')
  cosh = math.cosh(2 * r)
  sinh = math.sinh(2 * r)
  v_plus = cosh / 2
  v_minus = (cosh - eta_a * sinh**2 / (eta_a * cosh + 1 - eta_a)) / 2
  return v_minus, v_plus


def probe_params_from_variances(v_minus, v_plus):
  """Returns the probe ensemble implied by squeezed-probe variances.

  Args:
    v_minus: Squeezed-quadrature variance, in (0, 1/2).
    v_plus: Anti-squeezed variance, > 1/2, with `V+ V- >= 1/4`.

  Returns:
    `ProbeEnsembleParams`.

  Raises:
    DomainError: If the probe is not squeezed or violates the uncertainty
      relation. Products within `settings.PHYSICALITY_TOLERANCE` of 1/4 are
      accepted and give `eta_a = 1`.
  """
  if not v_minus > 0:
    raise errors.DomainError('V- must be > 0, got {}'.format(v_minus))
  if v_minus >= 0.5:
    raise errors.DomainError(
        'Probe not squeezed: V- = {} >= 1/2 makes the estimator kernels '
        'diverge'.format(v_minus))
  if v_plus <= 0.5:
    raise errors.DomainError('V+ must be > 1/2, got {}'.format(v_plus))
  if 4 * v_plus * v_minus < 1 - settings.PHYSICALITY_TOLERANCE:
    raise errors.DomainError(
        'Unphysical probe: V+ V- = {} < 1/4'.format(v_plus * v_minus))

  eta_a = (2 * (v_plus - v_minus)
           / ((2 * v_plus - 1) * (2 * v_minus + 1)))
  eta_a = min(eta_a, 1.0)
  lambda_ = math.sqrt((2 * v_plus - 1) / (2 * v_plus + 1))
  r = 0.5 * math.acosh(2 * v_plus)
  v_a = (2 * eta_a * v_plus + 1 - eta_a) / 2
  d_coeff = (math.sqrt(2 * (v_plus - v_minus))
             * math.sqrt((2 * v_minus + 1) / (2 * v_plus + 1)))
  return ProbeEnsembleParams(
      v_minus=v_minus, v_plus=v_plus, eta_a=eta_a, lambda_=lambda_, v_a=v_a,
      d_coeff=d_coeff, r=r)


def probe_params(r, eta_a):
  """Returns the probe ensemble equivalent to `tmsv_covariance(r, eta_a)`."""
  if not r > 0:
    raise errors.DomainError('Squeezing constant must be > 0, got {}'
                             .format(r))
  return probe_params_from_variances(*variances_from_squeezing(r, eta_a))


def probe_gaussian_state(params, x_a, theta):
  """Returns the Gaussian description of one probe.

  The probe has variances `(V-, V+)` along `(x, p)` and mean `(d, 0)` with
  `d = d_coeff x_a`, and is then conjugated by `U(theta)`.
  """
  d = params.d_coeff * x_a
  state = GaussianState([d, 0.0],
                        np.diag([2 * params.v_minus, 2 * params.v_plus]))
  return rotate(state, theta)
