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

"""Simulated squeezed-probe runs for process and detector tomography.

Each shot draws a probe angle `theta` and a virtual mode-A outcome `x_a`,
prepares the corresponding probe, and then either sends it through a channel
and measures a homodyne quadrature at a random angle `phi` (process runs), or
records the outcome of a detector (detector runs).

Channels that act on Gaussian states as `(X, Y)` take a vectorized Gaussian
path; all other channels and all detectors are simulated in the Fock basis.
Trace-decreasing channels are post-selected: a shot is kept with probability
`Tr E(rho)`, and only kept shots appear in the samples while
`n_attempted` counts every shot.
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
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.modules import channels
from squeezed_probe_tomography.sample import homodyne
from squeezed_probe_tomography.sample import probes
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import gaussian
from squeezed_probe_tomography.util import rng
from squeezed_probe_tomography.util import serialization


class ProcessSamples(collections.namedtuple(
    'ProcessSamples',
    ('theta', 'x_a', 'phi', 'x_b', 'n_attempted', 'metadata'))):
  """Kept shots of a process run, one array entry per shot.

  Attributes:
    theta: Probe angles in [0, 2 pi).
    x_a: Virtual mode-A outcomes, after clamping.
    phi: Homodyne angles in [0, 2 pi).
    x_b: Homodyne outcomes.
    n_attempted: Number of shots including post-selection failures.
    metadata: Dict with the run's seed, clamp and success rates.
  """

  @property
  def n_kept(self):
    return len(self.x_b)


class DetectorSamples(collections.namedtuple(
    'DetectorSamples', ('theta', 'x_a', 'k', 'n_attempted', 'metadata'))):
  """Shots of a detector run; `k` holds the integer outcome labels."""


def _uniform_angles(generator, count):
  return generator.uniform(0, 2 * math.pi, count)


def _draw_probes(params, streams, count):
  theta = _uniform_angles(streams.angles, count)
  x_a, clamped = homodyne.clamp_xa(
      homodyne.sample_xa(params, streams.probe, count), params)
  return theta, x_a, clamped


def _batches(count):
  return [slice(start, min(start + settings.FOCK_BATCH_SIZE, count))
          for start in range(0, count, settings.FOCK_BATCH_SIZE)]


def _process_block(block, channel, params, eta_b, seed, cutoff):
  """Simulates one shot block; returns its arrays and counters."""
  streams = rng.make_streams(seed, block.index)
  theta, x_a, clamped = _draw_probes(params, streams, block.count)
  phi = _uniform_angles(streams.angles, block.count)
  if channel.gaussian_action is not None:
    means, covs = gaussian.apply_gaussian_action(
        *probes.probe_moments(params, x_a, theta),
        action=channel.gaussian_action)
    x_b = homodyne.sample_gaussian_batch(means, covs, phi, eta_b,
                                         streams.measurement)
    keep = np.ones(block.count, dtype=bool)
  else:
    factory = probes.ProbeFactory(params, cutoff)
    x_b = np.empty(block.count)
    keep = np.ones(block.count, dtype=bool)
    for batch in _batches(block.count):
      outputs = channels.apply_channel(channel,
                                       factory(x_a[batch], theta[batch]))
      traces = np.trace(outputs, axis1=-2, axis2=-1).real
      if not channel.trace_preserving:
        accepted = streams.selection.random(len(traces)) < traces
        keep[batch] = accepted
      else:
        accepted = np.ones(len(traces), dtype=bool)
      indices = np.arange(batch.start, batch.stop)[accepted]
      if len(indices):
        normalized = (outputs[accepted]
                      / traces[accepted][:, np.newaxis, np.newaxis])
        x_b[indices] = homodyne.sample_quadrature_batch(
            normalized, phi[indices], eta_b, streams.measurement)
  return theta[keep], x_a[keep], phi[keep], x_b[keep], clamped


def _check_probes(params, cutoff, strict):
  ok, leak = probes.ProbeFactory(params, cutoff).edge_check()
  if ok:
    return
  message = ('Probe at the clamp bound leaks {:.3g} to the Fock cutoff {}; '
             'raise the cutoff'.format(leak, cutoff))
  if strict:
    raise errors.TruncationError(message)
  logging.warning(message)


def _rate_metadata(n, clamped, kept):
  clamp_rate = clamped / n if n else 0.0
  success_rate = kept / n if n else 0.0
  if clamp_rate > settings.CLAMP_RATE_WARNING:
    logging.warning('Clamped %.3g of the x_a outcomes', clamp_rate)
  return {'n_attempted': n, 'n_kept': kept, 'n_clamped': clamped,
          'clamp_rate': clamp_rate, 'success_rate': success_rate}


def _params_metadata(params):
  return {name: float(value) for name, value in params._asdict().items()}


def simulate_process_run(channel, params, eta_b, n, seed, workers=1,
                         block_size=None):
  """Simulates `n` shots of squeezed-probe process tomography.

  Args:
    channel: `channels.KrausChannel`; its cutoff is the Fock truncation of
      the probes on the Fock path.
    params: `ProbeEnsembleParams` of the probes.
    eta_b: Efficiency of the output homodyne detector, above 1/2.
    n: Number of attempted shots.
    seed: Non-negative integer seed.
    workers: Number of processes.
    block_size: Optional override of `settings.SHOT_BLOCK_SIZE`.

  Returns:
    `ProcessSamples` with the kept shots in shot order.

  Raises:
    DomainError: If `eta_b` is at or below 1/2.
    TruncationError: If probes on the Fock path do not fit the cutoff.
  """
  if not settings.EFFICIENCY_HARD_LIMIT < eta_b <= 1:
    raise errors.DomainError('eta_B must lie in (1/2, 1], got {}'
                             .format(eta_b))
  cutoff = channel.cutoff
  _check_probes(params, cutoff, strict=channel.gaussian_action is None)
  logging.info('Simulating %d shots of %s (eta_B=%.4g, seed=%d)', n,
               channel.name, eta_b, seed)
  function = functools.partial(_process_block, channel=channel, params=params,
                               eta_b=eta_b, seed=seed, cutoff=cutoff)
  parts = rng.map_blocks(function, rng.shot_blocks(n, block_size), workers)
  arrays = [np.concatenate([part[i] for part in parts]) if parts
            else np.zeros(0) for i in range(4)]
  clamped = sum(part[4] for part in parts)
  metadata = _rate_metadata(n, clamped, len(arrays[3]))
  if (not channel.trace_preserving
      and metadata['success_rate'] < settings.SUCCESS_RATE_WARNING):
    logging.warning('Post-selection kept only %d of %d shots',
                    metadata['n_kept'], n)
  metadata.update({'seed': seed, 'eta_b': eta_b, 'channel': channel.name,
                   'post_selected': not channel.trace_preserving,
                   'probe': _params_metadata(params)})
  return ProcessSamples(*arrays, n_attempted=n, metadata=metadata)


def _detector_block(block, povm, params, seed):
  streams = rng.make_streams(seed, block.index)
  theta, x_a, clamped = _draw_probes(params, streams, block.count)
  factory = probes.ProbeFactory(params, povm.cutoff)
  outcomes = np.empty(block.count, dtype=np.int64)
  for batch in _batches(block.count):
    rhos = factory(x_a[batch], theta[batch])
    traces = np.trace(rhos, axis1=-2, axis2=-1).real
    probabilities = channels.outcome_probabilities(
        povm, rhos / traces[:, np.newaxis, np.newaxis])
    probabilities /= np.sum(probabilities, axis=-1, keepdims=True)
    thresholds = np.cumsum(probabilities, axis=-1)[:, :-1]
    uniforms = streams.measurement.random(len(traces))
    outcomes[batch] = np.sum(uniforms[:, np.newaxis] >= thresholds, axis=-1)
  return theta, x_a, outcomes, clamped


def simulate_detector_run(povm, params, n, seed, workers=1, block_size=None):
  """Simulates `n` shots of squeezed-probe detector tomography.

  Args:
    povm: `channels.Povm`; its cutoff is the probe truncation.
    params: `ProbeEnsembleParams` of the probes.
    n: Number of shots.
    seed: Non-negative integer seed.
    workers: Number of processes.
    block_size: Optional override of `settings.SHOT_BLOCK_SIZE`.

  Returns:
    `DetectorSamples`.
  """
  _check_probes(params, povm.cutoff, strict=True)
  logging.info('Simulating %d shots of %s (seed=%d)', n, povm.name, seed)
  function = functools.partial(_detector_block, povm=povm, params=params,
                               seed=seed)
  parts = rng.map_blocks(function, rng.shot_blocks(n, block_size), workers)
  theta, x_a = [np.concatenate([part[i] for part in parts]) if parts
                else np.zeros(0) for i in range(2)]
  k = (np.concatenate([part[2] for part in parts]) if parts
       else np.zeros(0, dtype=np.int64))
  metadata = _rate_metadata(n, sum(part[3] for part in parts), n)
  metadata.update({'seed': seed, 'detector': povm.name,
                   'num_outcomes': povm.num_outcomes,
                   'probe': _params_metadata(params)})
  return DetectorSamples(theta, x_a, k, n_attempted=n, metadata=metadata)


def outcome_frequencies(samples, num_outcomes):
  """Returns `(frequencies, std_errors)` of the outcome labels.

  Raises:
    DomainError: If there are no shots or a label is out of range.
  """
  k = np.asarray(samples.k, dtype=np.int64)
  if samples.n_attempted == 0:
    raise errors.DomainError('No detector shots')
  if len(k) and (np.min(k) < 0 or np.max(k) >= num_outcomes):
    raise errors.DomainError('Outcome labels must lie in [0, {}), got {}'
                             .format(num_outcomes, np.unique(k).tolist()))
  counts = np.bincount(k, minlength=num_outcomes)
  frequencies = counts / samples.n_attempted
  std_errors = np.sqrt(frequencies * (1 - frequencies) / samples.n_attempted)
  return frequencies, std_errors


def _attempted(path, metadata, n_kept):
  if 'n_attempted' not in metadata:
    logging.warning('%s has no n_attempted in its sidecar; assuming all %d '
                    'shots were kept', path, n_kept)
    return n_kept
  return int(metadata['n_attempted'])


def write_process_samples(path, samples):
  data = {'theta': samples.theta, 'x_a': samples.x_a, 'phi': samples.phi,
          'x_b': samples.x_b}
  serialization.write_samples(path, serialization.PROCESS_COLUMNS, data,
                              samples.metadata)


def read_process_samples(path):
  """Reads process samples; `n_attempted` comes from the sidecar.

  Without a sidecar every shot counts as kept, which is wrong for
  post-selected runs; a warning says so.
  """
  data, metadata = serialization.read_samples(path,
                                              serialization.PROCESS_COLUMNS)
  n_attempted = _attempted(path, metadata, len(data['x_b']))
  return ProcessSamples(data['theta'], data['x_a'], data['phi'], data['x_b'],
                        n_attempted=n_attempted, metadata=metadata)


def write_detector_samples(path, samples):
  data = {'theta': samples.theta, 'x_a': samples.x_a,
          'k': np.asarray(samples.k, dtype=np.int64)}
  serialization.write_samples(path, serialization.DETECTOR_COLUMNS, data,
                              samples.metadata)


def read_detector_samples(path):
  data, metadata = serialization.read_samples(path,
                                              serialization.DETECTOR_COLUMNS)
  k = data['k'].astype(np.int64)
  if not np.array_equal(k, data['k']):
    raise errors.ConfigError('{} has non-integer outcome labels'.format(path))
  n_attempted = _attempted(path, metadata, len(k))
  return DetectorSamples(data['theta'], data['x_a'], k,
                         n_attempted=n_attempted, metadata=metadata)
