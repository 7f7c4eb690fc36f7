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

"""Quantum channels and detectors with exact Choi tensors and POVMs.

These are the reference operations that reconstructions are checked against.
A channel is a list of Kraus operators on the truncated Fock space; its Choi
tensor is indexed `chi[k, m, l, n] = sum_j <m|A_j|k> <n|A_j|l>^*`, so that
`E(rho)_mn = sum_kl chi[k, m, l, n] rho_kl`.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import math

# Dependency imports
import numpy as np
from scipy import stats
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import fock
from squeezed_probe_tomography.util import gaussian


class KrausChannel(collections.namedtuple(
    'KrausChannel',
    ('kraus_ops', 'trace_preserving', 'gaussian_action', 'name'))):
  """Completely positive map in Kraus form.

  Attributes:
    kraus_ops: Complex array of shape `(J, cutoff + 1, cutoff + 1)`.
    trace_preserving: Whether `sum_j A_j^dagger A_j = I`; otherwise the map
      describes a conditional operation whose trace is its success
      probability.
    gaussian_action: Pair `(X, Y)` when the channel maps Gaussian states to
      Gaussian states as `mean -> X mean, cov -> X cov X^T + Y`; else None.
    name: Human-readable description.
  """

  def __new__(cls, kraus_ops, trace_preserving, gaussian_action=None,
              name='channel'):
    kraus_ops = np.asarray(kraus_ops, dtype=np.complex128)
    if kraus_ops.ndim == 2:
      kraus_ops = kraus_ops[np.newaxis]
    if kraus_ops.ndim != 3 or kraus_ops.shape[1] != kraus_ops.shape[2]:
      raise ValueError('Kraus operators must have shape (J, d, d), got {}'
                       .format(kraus_ops.shape))
    return super(KrausChannel, cls).__new__(
        cls, kraus_ops, bool(trace_preserving), gaussian_action, name)

  @property
  def cutoff(self):
    return self.kraus_ops.shape[-1] - 1


class Povm(collections.namedtuple('Povm', ('elements', 'name'))):
  """Detector described by diagonal or general POVM elements.

  Attributes:
    elements: Complex array of shape `(K, cutoff + 1, cutoff + 1)`; element
      `k` is the operator of outcome `k`.
    name: Human-readable description.
  """

  def __new__(cls, elements, name='detector'):
    elements = np.asarray(elements, dtype=np.complex128)
    return super(Povm, cls).__new__(cls, elements, name)

  @property
  def cutoff(self):
    return self.elements.shape[-1] - 1

  @property
  def num_outcomes(self):
    return self.elements.shape[0]


def _check_transmission(t, name='T'):
  if not 0 <= t <= 1:
    raise errors.DomainError('{} must lie in [0, 1], got {}'.format(name, t))


def _number_power(base, cutoff):
  """Returns `base^n` as a diagonal operator (with `0^0 = 1`)."""
  return np.diag(np.power(float(base), np.arange(cutoff + 1)))


def identity_channel(cutoff):
  return KrausChannel([np.eye(cutoff + 1)], True,
                      (np.eye(2), np.zeros((2, 2))), 'identity')


def loss_channel(t, cutoff):
  """Returns the pure-loss channel of transmission `t`.

  Kraus operators are `A_j = (1 - t)^(j/2) t^(n/2) a^j / sqrt(j!)` for
  `j = 0, ..., cutoff`.
  """
  _check_transmission(t)
  kraus_ops = fock.loss_kraus_operators(t, cutoff)
  action = (math.sqrt(t) * np.eye(2), (1 - t) * np.eye(2))
  return KrausChannel(kraus_ops, True, action, 'loss(T={})'.format(t))


def phase_channel(phi0, cutoff):
  """Returns the phase shift `rho -> U(phi0) rho U(phi0)^dagger`."""
  action = (gaussian.rotation_matrix(phi0), np.zeros((2, 2)))
  return KrausChannel([fock.phase_operator(phi0, cutoff)], True, action,
                      'phase(phi0={})'.format(phi0))


def photon_subtraction(t, cutoff):
  """Returns the conditional photon subtraction `sqrt(1 - t) t^(n/2) a`.

  This is the single-photon branch of a beam splitter of transmission `t`
  followed by an ideal photon counter; it is trace-decreasing.
  """
  _check_transmission(t)
  operator = (math.sqrt(1 - t) * np.sqrt(_number_power(t, cutoff))
              @ fock.annihilation(cutoff))
  return KrausChannel([operator], False, None,
                      'photon-subtraction(T={})'.format(t))


def apply_channel(channel, rho):
  """Returns `sum_j A_j rho A_j^dagger`.

  Args:
    channel: `KrausChannel`.
    rho: Density matrix, or a stack of them with shape `(S, d, d)`.

  Returns:
    Output operator(s), same shape as `rho`.
  """
  rho = np.asarray(rho)
  if rho.shape[-1] != channel.kraus_ops.shape[-1]:
    raise ValueError('Cutoff mismatch: state {} vs channel {}'
                     .format(rho.shape[-1] - 1, channel.cutoff))
  ops = channel.kraus_ops
  if rho.ndim == 2:
    return np.einsum('jab,bc,jdc->ad', ops, rho, ops.conj())
  return np.einsum('jab,sbc,jdc->sad', ops, rho, ops.conj())


def choi_from_kraus(channel, k_max):
  """Returns the Choi tensor `chi[k, m, l, n]` restricted to levels <= k_max."""
  if not 0 <= k_max <= channel.cutoff:
    raise errors.DomainError('k_max {} outside channel cutoff {}'
                             .format(k_max, channel.cutoff))
  ops = channel.kraus_ops[:, :k_max + 1, :k_max + 1]
  return np.einsum('jmk,jnl->kmln', ops, ops.conj())


def choi_contract(chi, rho):
  """Returns `E(rho)_mn = sum_kl chi[k, m, l, n] rho_kl`."""
  return np.einsum('kmln,kl->mn', chi, rho)


def choi_matrix(chi):
  """Returns chi as a matrix over joint indices `(k, m)` and `(l, n)`."""
  size = chi.shape[0] * chi.shape[1]
  return np.reshape(chi, (size, size))


def choi_hermiticity_residual(chi):
  return np.max(np.abs(chi - np.conj(np.transpose(chi, (2, 3, 0, 1)))))


def choi_partial_trace(chi):
  """Returns `sum_m chi[k, m, l, m]`, the identity for trace-preserving maps."""
  return np.einsum('kmlm->kl', chi)


def trusted_levels(cutoff):
  """Returns how many of the lowest Fock levels are free of edge artifacts."""
  return max(1, int(math.floor((cutoff + 1)
                               * (1 - settings.TRUNCATION_EDGE_FRACTION))))


def completeness_residual(channel):
  """Returns `max |sum_j A_j^dagger A_j - I|` below the truncation edge."""
  ops = channel.kraus_ops
  total = np.einsum('jba,jbc->ac', ops.conj(), ops)
  levels = trusted_levels(channel.cutoff)
  return np.max(np.abs(total - np.eye(channel.cutoff + 1))[:levels, :levels])


def onoff_detector(eta_d, p_dark, cutoff):
  """Returns the click/no-click detector with dark counts.

  Outcome 0 is no click with `Pi^0 = (1 - p_dark) (1 - eta_d)^n`; outcome 1
  is a click.
  """
  _check_transmission(eta_d, 'eta_d')
  if not 0 <= p_dark < 1:
    raise errors.DomainError('p_dark must lie in [0, 1), got {}'
                             .format(p_dark))
  no_click = (1 - p_dark) * _number_power(1 - eta_d, cutoff)
  elements = [no_click, np.eye(cutoff + 1) - no_click]
  return Povm(elements, 'onoff(eta_d={}, p_dark={})'.format(eta_d, p_dark))


def pnr_detector(eta_d, k_max, cutoff):
  """Returns a photon-number-resolving detector with efficiency `eta_d`.

  Outcome `k < k_max` reports exactly `k` detected photons; outcome `k_max`
  collects everything at or above `k_max`.
  """
  _check_transmission(eta_d, 'eta_d')
  if not 1 <= k_max <= cutoff:
    raise errors.DomainError('PNR k_max must lie in [1, cutoff], got {}'
                             .format(k_max))
  levels = np.arange(cutoff + 1)
  diagonals = [stats.binom.pmf(k, levels, eta_d) for k in range(k_max)]
  diagonals.append(1 - np.sum(diagonals, axis=0))
  elements = [np.diag(diagonal) for diagonal in diagonals]
  return Povm(elements, 'pnr(eta_d={}, k_max={})'.format(eta_d, k_max))


def trivial_detector(cutoff):
  """Returns the single-outcome detector `{I}`."""
  return Povm([np.eye(cutoff + 1)], 'trivial')


def povm_residuals(povm):
  """Returns `(min eigenvalue, completeness residual)` of a POVM."""
  min_eigenvalue = min(fock.min_eigenvalue(element)
                       for element in povm.elements)
  completeness = np.max(np.abs(np.sum(povm.elements, axis=0)
                               - np.eye(povm.cutoff + 1)))
  return min_eigenvalue, completeness


def outcome_probabilities(povm, rho):
  """Returns `p_k = Tr[Pi^k rho]`, clipped to [0, 1].

  Args:
    povm: `Povm`.
    rho: Normalized density matrix, or a stack of them `(S, d, d)`.

  Returns:
    Probabilities of shape `(K,)` or `(S, K)`.

  Raises:
    DomainError: If a state is not normalized to within 1e-8.
  """
  rho = np.asarray(rho)
  traces = np.trace(rho, axis1=-2, axis2=-1).real
  if np.any(np.abs(traces - 1) > 1e-8):
    raise errors.DomainError('Outcome probabilities need normalized states, '
                             'got trace {}'.format(
                                 traces.flat[np.argmax(np.abs(traces - 1))]))
  probabilities = np.einsum('kab,...ba->...k', povm.elements, rho).real
  return np.clip(probabilities, 0, 1)


# Builders by configuration name, with the parameters each one takes.
CHANNELS = {
    'identity': (identity_channel, ()),
    'loss': (loss_channel, ('T',)),
    'phase': (phase_channel, ('phi0',)),
    'photon-subtraction': (photon_subtraction, ('T',)),
}

DETECTORS = {
    'onoff': (onoff_detector, ('eta_d', 'p_dark')),
    'pnr': (pnr_detector, ('eta_d', 'k_max')),
    'trivial': (trivial_detector, ()),
}


def build_channel(kind, parameters, cutoff):
  """Builds a channel from its configuration name and parameters."""
  builder, names = CHANNELS[kind]
  return builder(*[parameters[name] for name in names], cutoff=cutoff)


def build_detector(kind, parameters, cutoff):
  builder, names = DETECTORS[kind]
  return builder(*[parameters[name] for name in names], cutoff=cutoff)
