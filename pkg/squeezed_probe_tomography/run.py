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

"""Batch front end: runs one task described by a JSON configuration.

    python -m squeezed_probe_tomography.run --config=run.json --out=results

Exit status is 0 on success, 1 if a comparison or validation fails, and 2, 3
or 4 for configuration, domain and numerical errors.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

# Dependency imports
from absl import app
from absl import flags
from absl import logging
import numpy as np
from squeezed_probe_tomography import config as config_lib
from squeezed_probe_tomography import validate
from squeezed_probe_tomography.modules import channels
from squeezed_probe_tomography.modules import estimators
from squeezed_probe_tomography.modules import patterns
from squeezed_probe_tomography.modules import reports
from squeezed_probe_tomography.sample import protocol
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import fock
from squeezed_probe_tomography.util import gaussian
from squeezed_probe_tomography.util import serialization


FLAGS = flags.FLAGS

flags.DEFINE_string('config', None, 'Path of the JSON run configuration')
flags.DEFINE_integer('workers', None, 'Overrides the number of workers')
flags.DEFINE_integer('seed', None, 'Overrides the seed')
flags.DEFINE_string('out', None, 'Directory for relative paths')


EXIT_FAILED = 1


def _probe_params(config):
  return gaussian.probe_params_from_variances(config.probe['v_minus'],
                                              config.probe['v_plus'])


def _operation_parameters(spec):
  return {key: value for key, value in spec.items() if key != 'type'}


def _channel(config):
  return channels.build_channel(config.channel['type'],
                                _operation_parameters(config.channel),
                                config.cutoff)


def _detector(config):
  return channels.build_detector(config.detector['type'],
                                 _operation_parameters(config.detector),
                                 config.cutoff)


def _write_result(config, kind, payload, metadata):
  path = config.paths['output']
  serialization.write_json(path, serialization.result_document(
      kind, payload, config.to_dict(), metadata))
  logging.info('Wrote %s', path)
  return path


def _simulate_process(config):
  samples = protocol.simulate_process_run(
      _channel(config), _probe_params(config), config.eta_b, config.samples,
      config.seed, workers=config.workers)
  protocol.write_process_samples(config.paths['samples'], samples)
  logging.info('Wrote %d samples to %s', samples.n_kept,
               config.paths['samples'])
  _write_result(config, config.task, {'samples': config.paths['samples']},
                samples.metadata)
  return 0


def _simulate_detector(config):
  samples = protocol.simulate_detector_run(
      _detector(config), _probe_params(config), config.samples, config.seed,
      workers=config.workers)
  protocol.write_detector_samples(config.paths['samples'], samples)
  logging.info('Wrote %d samples to %s', len(samples.k),
               config.paths['samples'])
  _write_result(config, config.task, {'samples': config.paths['samples']},
                samples.metadata)
  return 0


def _reconstruct_process(config, params):
  samples = protocol.read_process_samples(config.paths['samples'])
  tables = [patterns.build_table(config.k_max, eta,
                                 min_efficiency=config.min_efficiency)
            for eta in (params.eta_a, config.eta_b)]
  estimate = estimators.estimate_choi(samples, params, config.eta_b,
                                      config.k_max, *tables)
  payload = {
      'chi': serialization.encode_complex(estimate.value),
      'std_error': estimate.std_error,
      'k_max': config.k_max,
      'n_samples': estimate.n_samples,
  }
  if config.channel is not None:
    oracle = channels.choi_from_kraus(_channel(config), config.k_max)
    payload['report'] = reports.compare_report(
        estimate.value, oracle, estimate.std_error,
        **config.tolerance).to_document()
  return payload, estimate.metadata


def _reconstruct_detector(config, params):
  samples = protocol.read_detector_samples(config.paths['samples'])
  povm = _detector(config)
  table = patterns.build_table(config.m_max, params.eta_a,
                               min_efficiency=config.min_efficiency)
  estimates = estimators.estimate_detector(
      samples, params, config.m_max, povm.num_outcomes, table)
  value = np.stack([estimate.value for estimate in estimates])
  std_error = np.stack([estimate.std_error for estimate in estimates])
  size = config.m_max + 1
  report = reports.compare_report(value, povm.elements[:, :size, :size],
                                  std_error, **config.tolerance)
  payload = {
      'povm': serialization.encode_complex(value),
      'std_error': std_error,
      'm_max': config.m_max,
      'n_samples': samples.n_attempted,
      'outcomes': [{key: estimate.metadata[key] for key in
                    ('trace_estimate', 'trace_std_error', 'frequency',
                     'frequency_std_error')} for estimate in estimates],
      'report': report.to_document(),
  }
  metadata = dict(estimates[0].metadata)
  for key in ('outcome', 'trace_estimate', 'trace_std_error', 'frequency',
              'frequency_std_error'):
    metadata.pop(key)
  return payload, metadata


def _reconstruct(config):
  params = _probe_params(config)
  if config.detector is not None:
    payload, metadata = _reconstruct_detector(config, params)
  else:
    payload, metadata = _reconstruct_process(config, params)
  _write_result(config, config.task, payload, metadata)
  return 0


def _oracle_choi(config):
  channel = _channel(config)
  chi = channels.choi_from_kraus(channel, config.k_max)
  _write_result(config, config.task,
                {'chi': serialization.encode_complex(chi),
                 'k_max': config.k_max},
                {'channel': channel.name,
                 'trace_preserving': channel.trace_preserving})
  return 0


def _pattern_table(config):
  table = patterns.build_table(config.m_max, config.eta,
                               min_efficiency=config.min_efficiency)
  patterns.save_table(table, config.paths['table'])
  vacuum_error = patterns.verify_unbiasedness(
      table, fock.fock_state(0, max(config.m_max, 1)))
  _write_result(config, config.task,
                {'table': config.paths['table'], 'm_max': table.m_max,
                 'eta': table.eta, 'half_width': table.grid.half_width,
                 'points': table.grid.points},
                {'vacuum_unbiasedness_error': vacuum_error})
  return 0


def _validate(config):
  results = validate.run_suites()
  _write_result(config, config.task,
                {'suites': [result._asdict() for result in results]}, {})
  return 0 if all(result.passed for result in results) else EXIT_FAILED


def _compare(config):
  report = reports.compare_files(config.paths['estimate'],
                                 config.paths['oracle'], **config.tolerance)
  _write_result(config, config.task, {'report': report.to_document()},
                {'estimate': config.paths['estimate'],
                 'oracle': config.paths['oracle']})
  return 0 if report.passed else EXIT_FAILED


TASKS = {
    'simulate-process': _simulate_process,
    'simulate-detector': _simulate_detector,
    'reconstruct': _reconstruct,
    'oracle-choi': _oracle_choi,
    'pattern-table': _pattern_table,
    'validate': _validate,
    'compare': _compare,
}


def run(config):
  """Executes the task of a validated `RunConfig`; returns the exit status."""
  logging.info('Running task %s (seed %d, %d workers)', config.task,
               config.seed, config.workers)
  return TASKS[config.task](config)


def main(argv):
  if len(argv) > 1:
    raise app.UsageError('Too many command-line arguments.')
  try:
    config = config_lib.apply_overrides(
        config_lib.load_config(FLAGS.config), workers=FLAGS.workers,
        seed=FLAGS.seed, out=FLAGS.out)
    return run(config)
  except errors.TomographyError as error:
    logging.error('%s: %s', type(error).__name__, error)
    return errors.exit_status(error)


if __name__ == '__main__':
  flags.mark_flag_as_required('config')
  app.run(main)
