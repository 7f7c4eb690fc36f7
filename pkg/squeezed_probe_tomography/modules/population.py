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

"""Noise-free versions of the process and detector estimators.

The Monte-Carlo averages over `(theta, x_a, phi, x_b)` are replaced by
deterministic quadrature: the trapezoid rule in `x_a` against the Gaussian
density `N(0, V_A)`, uniform angle rules with enough nodes to be exact, and
`patterns.reconstruct_operator` for the output mode. With no sampling noise
the results agree with the Kraus oracles up to quadrature error, which pins
down every sign and index convention of the estimators at once.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import math

# Dependency imports
from absl import logging
import numpy as np
from squeezed_probe_tomography.modules import channels
from squeezed_probe_tomography.modules import estimators
from squeezed_probe_tomography.modules import patterns
from squeezed_probe_tomography.sample import homodyne
from squeezed_probe_tomography.sample import probes
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import fock


# Virtual outcomes are integrated over this many standard deviations.
_XA_WIDTH = 6.0
_XA_NODES = 401


def _xa_rule(params):
  """Returns nodes and weights of the x_a rule, density included."""
  half_width = _XA_WIDTH * math.sqrt(params.v_a)
  x_a = np.linspace(-half_width, half_width, _XA_NODES)
  density = (np.exp(-x_a**2 / (2 * params.v_a))
             / math.sqrt(2 * math.pi * params.v_a))
  return x_a, homodyne.trapezoid_weights(x_a) * density


def _angles(cutoff, levels):
  count = cutoff + levels + 1
  return 2 * math.pi * np.arange(count) / count


def _factory(params, cutoff):
  factory = probes.ProbeFactory(params, cutoff)
  half_width = _XA_WIDTH * math.sqrt(params.v_a)
  ok, leak = probes.truncation_check(factory.unrotated(
      np.array([half_width]))[0])
  if not ok:
    raise errors.TruncationError(
        'Probe at |x_a| = {:.3f} leaks {:.3g} to the Fock cutoff {}'
        .format(half_width, leak, cutoff))
  return factory


def probe_moments_operators(params, k_max, cutoff):
  """Returns `O_kl = E[f_kl(x_a, eta_A) exp(i (k - l) theta) rho(x_a, theta)]`.

  The expectation runs over the probe ensemble; `O_kl` equals
  `(1 - lambda^2) lambda^(k + l) |k><l|` up to quadrature and truncation
  error, which is what makes the two-mode estimator work.

  Returns:
    Complex array of shape `(K, K, cutoff + 1, cutoff + 1)`, `K = k_max + 1`.
  """
  x_a, weights = _xa_rule(params)
  kernels = patterns.tabulate(k_max, params.eta_a, x_a)
  unrotated = _factory(params, cutoff).unrotated(x_a)
  # sum_x w(x) f_kl(x) rho_0(x)
  weighted = np.einsum('x,klx,xab->klab', weights, kernels, unrotated,
                       optimize=True)
  theta = _angles(cutoff, k_max)
  probe_phases = fock.phase_factors(theta, cutoff)
  kernel_phases = np.conj(fock.phase_factors(theta, k_max))
  # Average over theta of exp(i (k - l) theta) exp(-i (a - b) theta).
  angular = (np.einsum('tkl,tab->klab', kernel_phases, probe_phases)
             / len(theta))
  return weighted * angular


def population_choi(channel, params, eta_b, k_max, cutoff=None):
  """Returns the Choi tensor the estimator converges to, without noise.

  Args:
    channel: `channels.KrausChannel`; its cutoff is used for the probes unless
      `cutoff` is given, in which case they must agree.
    params: `ProbeEnsembleParams`.
    eta_b: Output homodyne efficiency.
    k_max: Largest Fock level reconstructed.
    cutoff: Optional Fock truncation.

  Returns:
    Complex array `chi[k, m, l, n]` of shape `(K, K, K, K)`.
  """
  if cutoff is None:
    cutoff = channel.cutoff
  if cutoff != channel.cutoff:
    raise errors.ConfigError('Channel cutoff {} differs from {}'
                             .format(channel.cutoff, cutoff))
  table_b = patterns.build_table(k_max, eta_b)
  size = k_max + 1
  operators = probe_moments_operators(params, k_max, cutoff)
  outputs = channels.apply_channel(
      channel, operators.reshape((size * size,) + operators.shape[2:]))
  chi = np.empty((size,) * 4, dtype=np.complex128)
  for index, output in enumerate(outputs):
    k, l = divmod(index, size)
    chi[k, :, l, :] = patterns.reconstruct_operator(table_b, output)
  logging.info('Population Choi tensor of %s at k_max=%d', channel.name, k_max)
  return estimators.rescaling(params.lambda_, size)[
      :, np.newaxis, :, np.newaxis] * chi


def population_povm(povm, params, m_max):
  """Returns the POVM elements the estimator converges to, without noise.

  Returns:
    `(elements, traces)`: complex array `Pi[k, m, n]` of shape `(K, M, M)`
    and the traces of the conditional states `rho^k` over levels <= m_max,
    which fall short of the outcome probabilities by `O(lambda^(2 m_max + 2))`.
  """
  cutoff = povm.cutoff
  x_a, weights = _xa_rule(params)
  kernels = patterns.tabulate(m_max, params.eta_a, x_a)
  unrotated = _factory(params, cutoff).unrotated(x_a)
  theta = _angles(cutoff, m_max)
  # p(k | x_a, theta) = sum_ab Pi_ba rho_0(x_a)_ab exp(-i (a - b) theta)
  probabilities = np.einsum('kba,xab,tab->kxt', povm.elements, unrotated,
                            fock.phase_factors(theta, cutoff),
                            optimize=True).real
  kernel_phases = np.conj(fock.phase_factors(theta, m_max))
  conditional = np.einsum('x,kxt,mnx,tmn->kmn', weights, probabilities,
                          kernels, kernel_phases, optimize=True) / len(theta)
  traces = np.trace(conditional, axis1=-2, axis2=-1).real
  scale = estimators.rescaling(params.lambda_, m_max + 1)
  return scale * np.swapaxes(conditional, -1, -2), traces
