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

"""Monte-Carlo estimators of Choi tensors and POVM elements.

Both estimators average pattern-function kernels over simulated or measured
shots. Uniform random angles turn the angle integrals into expectations, so
the estimate is a plain sample mean whose standard error comes from the same
accumulator.

The probe ensemble is equivalent to measuring one mode of a two-mode squeezed
vacuum `sqrt(1 - lambda^2) sum_n lambda^n |nn>`, so the raw averages carry a
factor `(1 - lambda^2) lambda^(k + l)` that is divided out at the end.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections

# Dependency imports
from absl import logging
import numpy as np
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.modules import patterns
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import fock
from squeezed_probe_tomography.util import statistics


# Shots per kernel evaluation; bounds the (S, K, K) intermediates.
_CHUNK = 65536


class EstimateWithError(collections.namedtuple(
    'EstimateWithError', ('value', 'std_error', 'n_samples', 'metadata'))):
  """An estimated tensor with per-element standard errors.

  Attributes:
    value: Complex tensor, `chi[k, m, l, n]` or `Pi[m, n]`.
    std_error: Real tensor of the same shape, >= 0.
    n_samples: Number of attempted shots averaged over.
    metadata: Dict with probe parameters, efficiencies and run rates.
  """


def rescaling(lambda_, size):
  """Returns `R[k, l] = 1 / ((1 - lambda^2) lambda^(k + l))`."""
  levels = np.arange(size)
  powers = float(lambda_)**(levels[:, np.newaxis] + levels[np.newaxis, :])
  return 1 / ((1 - lambda_**2) * powers)


def phased_kernels(table, x, angles):
  """Returns `f_kl(x_s) exp(i (k - l) angle_s)` with shape `(S, K, K)`."""
  return table.per_sample(x) * np.conj(fock.phase_factors(angles,
                                                          table.m_max))


def _check_samples(n_attempted):
  if n_attempted < 2:
    raise errors.DomainError(
        'Need at least 2 attempted shots to estimate, got {}'
        .format(n_attempted))


def _with_count(accumulator, count):
  """Counts rejected shots, whose kernels are zero, in the average."""
  return statistics.MomentAccumulator(accumulator.total,
                                      accumulator.total_squares, count)


def _warn_noise(std_error, what):
  worst = float(np.max(std_error))
  if worst > settings.NOISE_WARNING_BOUND:
    index = np.unravel_index(np.argmax(std_error), std_error.shape)
    logging.warning(
        '%s standard error reaches %.3g at %s; the lambda^-(k+l) rescaling '
        'amplifies noise at high levels', what, worst,
        [int(i) for i in index])


def _params_metadata(params):
  return {name: float(value) for name, value in params._asdict().items()}


def estimate_choi(samples, params, eta_b, k_max, table_a=None, table_b=None):
  """Estimates the Choi tensor `chi[k, m, l, n]` for `k, l, m, n <= k_max`.

  Args:
    samples: `protocol.ProcessSamples`.
    params: `ProbeEnsembleParams` of the probes.
    eta_b: Efficiency of the output homodyne detector.
    k_max: Largest Fock level reconstructed.
    table_a: Optional `PatternTable` for `params.eta_a`.
    table_b: Optional `PatternTable` for `eta_b`.

  Returns:
    Hermitian-symmetrized `EstimateWithError`; the raw asymmetry is in
    `metadata['raw_asymmetry']`.

  Raises:
    DomainError: If there are fewer than two attempted shots or an efficiency
      is out of range.
  """
  _check_samples(samples.n_attempted)
  if table_a is None:
    table_a = patterns.build_table(k_max, params.eta_a)
  if table_b is None:
    table_b = patterns.build_table(k_max, eta_b)
  for table, eta in ((table_a, params.eta_a), (table_b, eta_b)):
    if table.m_max < k_max or abs(table.eta - eta) > 1e-12:
      raise errors.ConfigError(
          'Pattern table (m_max={}, eta={}) does not cover k_max={}, eta={}'
          .format(table.m_max, table.eta, k_max, eta))
  size = k_max + 1
  accumulators = [statistics.MomentAccumulator.empty((size,) * 4)]
  for start in range(0, len(samples.x_b), _CHUNK):
    chunk = slice(start, start + _CHUNK)
    left = phased_kernels(table_a, samples.x_a[chunk],
                          samples.theta[chunk])[:, :size, :size]
    right = phased_kernels(table_b, samples.x_b[chunk],
                           samples.phi[chunk])[:, :size, :size]
    accumulators.append(statistics.outer_product_moments(left, right))
  accumulator = _with_count(statistics.merge_all(accumulators),
                            samples.n_attempted)
  scale = rescaling(params.lambda_, size)[:, np.newaxis, :, np.newaxis]
  raw = scale * accumulator.mean()
  raw_error = scale * accumulator.std_error()
  adjoint = np.conj(np.transpose(raw, (2, 3, 0, 1)))
  asymmetry = float(np.max(np.abs(raw - adjoint)))
  value = (raw + adjoint) / 2
  std_error = (raw_error + np.transpose(raw_error, (2, 3, 0, 1))) / 2
  _warn_noise(std_error, 'Choi')
  logging.info('Estimated Choi tensor from %d shots (%d kept), k_max=%d',
               samples.n_attempted, len(samples.x_b), k_max)
  metadata = {
      'estimator': 'choi',
      'k_max': k_max,
      'eta_b': eta_b,
      'probe': _params_metadata(params),
      'n_attempted': samples.n_attempted,
      'n_kept': len(samples.x_b),
      'raw_asymmetry': asymmetry,
      'run': dict(samples.metadata),
  }
  if samples.metadata.get('post_selected'):
    metadata['post_selection'] = (
        'rejected shots enter with zero kernel; trace-decreasing Choi tensor')
  return EstimateWithError(value, std_error, samples.n_attempted, metadata)


def estimate_povm(samples, params, outcome_k, m_max, num_outcomes=None,
                  table=None):
  """Estimates the POVM element of outcome `outcome_k` for `m, n <= m_max`.

  The conditional state `rho^k_mn` is the mean over all shots of
  `1[k_s = outcome_k] f_mn(x_a) exp(i (m - n) theta)`; the element is then
  `Pi^k_mn = rho^k_nm / ((1 - lambda^2) lambda^(m + n))`, note the transpose.
  The trace of `rho^k` over levels <= m_max estimates the probability of the
  outcome, up to a bias of order `lambda^(2 m_max + 2)`.

  Args:
    samples: `protocol.DetectorSamples`.
    params: `ProbeEnsembleParams` of the probes.
    outcome_k: Outcome label.
    m_max: Largest Fock level reconstructed.
    num_outcomes: Number of detector outcomes; defaults to the run metadata.
    table: Optional `PatternTable` for `params.eta_a`.

  Returns:
    `EstimateWithError` whose metadata holds `trace_estimate`,
    `trace_std_error`, `frequency` and `frequency_std_error`.

  Raises:
    DomainError: If the outcome label is unknown or there are too few shots.
  """
  _check_samples(samples.n_attempted)
  if num_outcomes is None:
    num_outcomes = samples.metadata.get('num_outcomes')
  labels = np.asarray(samples.k, dtype=np.int64)
  known = (range(num_outcomes) if num_outcomes is not None
           else set(labels.tolist()))
  if outcome_k not in known:
    raise errors.DomainError('Unknown outcome label {}'.format(outcome_k))
  if table is None:
    table = patterns.build_table(m_max, params.eta_a)
  size = m_max + 1
  selected = labels == outcome_k
  kernels = phased_kernels(table, samples.x_a[selected],
                           samples.theta[selected])[:, :size, :size]
  accumulator = _with_count(
      statistics.MomentAccumulator.from_samples(kernels), samples.n_attempted)
  traces = _with_count(
      statistics.MomentAccumulator.from_samples(
          np.trace(kernels, axis1=-2, axis2=-1).real),
      samples.n_attempted)
  scale = rescaling(params.lambda_, size)
  value = scale * np.transpose(accumulator.mean())
  std_error = scale * np.transpose(accumulator.std_error())
  _warn_noise(std_error, 'POVM')
  frequency, frequency_error = statistics.binomial_std_error(
      int(np.count_nonzero(selected)), samples.n_attempted)
  metadata = {
      'estimator': 'povm',
      'outcome': outcome_k,
      'm_max': m_max,
      'probe': _params_metadata(params),
      'n_attempted': samples.n_attempted,
      'trace_estimate': float(traces.mean()),
      'trace_std_error': float(traces.std_error()),
      'frequency': frequency,
      'frequency_std_error': frequency_error,
      'run': dict(samples.metadata),
  }
  return EstimateWithError(value, std_error, samples.n_attempted, metadata)


def estimate_detector(samples, params, m_max, num_outcomes=None, table=None):
  """Estimates every POVM element; returns a list indexed by outcome."""
  if num_outcomes is None:
    num_outcomes = samples.metadata.get('num_outcomes')
  if num_outcomes is None:
    num_outcomes = int(np.max(samples.k)) + 1
  return [estimate_povm(samples, params, k, m_max, num_outcomes, table)
          for k in range(num_outcomes)]
