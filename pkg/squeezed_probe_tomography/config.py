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

"""Run configuration: schema, parsing and flag overrides.

A run is described by one JSON object, for example

    {
      "task": "simulate-process",
      "channel": {"type": "loss", "T": 0.7},
      "probe": {"v_minus": 0.324027, "v_plus": 0.77154},
      "eta_b": 0.85,
      "samples": 1000000,
      "seed": 1,
      "paths": {"samples": "loss.csv"}
    }

Unknown keys, wrong types and keys a task needs but lacks are `ConfigError`s,
raised before any computation. Physical ranges are left to the modules.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import io
import json
import numbers
import os

# Dependency imports
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.modules import channels
from squeezed_probe_tomography.util import errors
import six


TASKS = ('simulate-process', 'simulate-detector', 'reconstruct',
         'oracle-choi', 'pattern-table', 'validate', 'compare')

PATH_KEYS = ('samples', 'output', 'table', 'estimate', 'oracle')


class RunConfig(collections.namedtuple(
    'RunConfig',
    ('task', 'channel', 'detector', 'probe', 'eta_b', 'eta', 'samples',
     'seed', 'cutoff', 'k_max', 'm_max', 'workers', 'min_efficiency',
     'paths', 'tolerance'))):
  """A validated run configuration.

  Attributes:
    task: One of `TASKS`.
    channel: Dict with `type` and the channel's parameters, or None.
    detector: Dict with `type` and the detector's parameters, or None.
    probe: Dict with `v_minus` and `v_plus`, or None.
    eta_b: Output homodyne efficiency of process runs.
    eta: Efficiency of a pattern table.
    samples: Number of shots to simulate.
    seed: Non-negative seed.
    cutoff: Fock truncation.
    k_max: Largest input/output level of process tasks, default
      `settings.DEFAULT_K_MAX`.
    m_max: Largest level of detector reconstructions and pattern tables.
    workers: Number of worker processes.
    min_efficiency: Lowest accepted pattern-function efficiency.
    paths: Dict with keys from `PATH_KEYS`.
    tolerance: Dict with `se_factor` and `abs_floor`.
  """

  def to_dict(self):
    return {key: value for key, value in self._asdict().items()
            if value is not None}


class _Float(object):
  name = 'number'

  @staticmethod
  def accepts(value):
    return (isinstance(value, numbers.Real)
            and not isinstance(value, bool))


class _Int(object):
  name = 'integer'

  @staticmethod
  def accepts(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


class _String(object):
  name = 'string'

  @staticmethod
  def accepts(value):
    return isinstance(value, six.string_types)


_TOP_LEVEL = {
    'task': _String,
    'channel': dict,
    'detector': dict,
    'probe': dict,
    'eta_b': _Float,
    'eta': _Float,
    'samples': _Int,
    'seed': _Int,
    'cutoff': _Int,
    'k_max': _Int,
    'm_max': _Int,
    'workers': _Int,
    'min_efficiency': _Float,
    'paths': dict,
    'tolerance': dict,
}

_PROBE = {'v_minus': _Float, 'v_plus': _Float}
_PATHS = {key: _String for key in PATH_KEYS}
_TOLERANCE = {'se_factor': _Float, 'abs_floor': _Float}

# Parameters of every channel and detector kind; all numbers but `k_max`.
_INTEGER_PARAMETERS = ('k_max',)

_REQUIRED = {
    'simulate-process': ('channel', 'probe', 'eta_b', 'samples'),
    'simulate-detector': ('detector', 'probe', 'samples'),
    'reconstruct': ('probe',),
    'oracle-choi': ('channel',),
    'pattern-table': ('eta', 'm_max'),
    'validate': (),
    'compare': (),
}


def _check_type(where, key, value, kind):
  if kind is dict:
    if not isinstance(value, dict):
      raise errors.ConfigError('{}{} must be an object, got {!r}'
                               .format(where, key, value))
  elif not kind.accepts(value):
    raise errors.ConfigError('{}{} must be a {}, got {!r}'
                             .format(where, key, kind.name, value))


def _check_object(where, document, schema, required=()):
  for key, value in six.iteritems(document):
    if key not in schema:
      raise errors.ConfigError('Unknown key {}{}; expected one of {}'
                               .format(where, key, sorted(schema)))
    _check_type(where, key, value, schema[key])
  for key in required:
    if key not in document:
      raise errors.ConfigError('Missing key {}{}'.format(where, key))


def _check_operation(key, spec, registry):
  """Checks a channel or detector entry against its builder registry."""
  if 'type' not in spec:
    raise errors.ConfigError('{}.type is required; one of {}'
                             .format(key, sorted(registry)))
  kind = spec['type']
  if kind not in registry:
    raise errors.ConfigError('Unknown {} type {!r}; expected one of {}'
                             .format(key, kind, sorted(registry)))
  _, names = registry[kind]
  schema = {'type': _String}
  for name in names:
    schema[name] = _Int if name in _INTEGER_PARAMETERS else _Float
  _check_object(key + '.', spec, schema, required=schema.keys())


def _task_requirements(document):
  task = document['task']
  required = list(_REQUIRED[task])
  paths = []
  if task == 'reconstruct':
    if 'detector' in document:
      required.append('m_max')
    else:
      required.append('eta_b')
    paths.append('samples')
  elif task == 'compare':
    paths.extend(['estimate', 'oracle'])
  return required, paths


def parse_config(document):
  """Validates a decoded JSON document and returns a `RunConfig`.

  Raises:
    ConfigError: On unknown keys, wrong types or missing keys.
  """
  if not isinstance(document, dict):
    raise errors.ConfigError('Configuration must be a JSON object')
  _check_object('', document, _TOP_LEVEL, required=('task',))
  task = document['task']
  if task not in TASKS:
    raise errors.ConfigError('Unknown task {!r}; expected one of {}'
                             .format(task, list(TASKS)))
  required, required_paths = _task_requirements(document)
  _check_object('', document, _TOP_LEVEL, required=required)
  if 'channel' in document:
    _check_operation('channel', document['channel'], channels.CHANNELS)
  if 'detector' in document:
    _check_operation('detector', document['detector'], channels.DETECTORS)
  if 'probe' in document:
    _check_object('probe.', document['probe'], _PROBE,
                  required=('v_minus', 'v_plus'))
  paths = dict(document.get('paths', {}))
  _check_object('paths.', paths, _PATHS, required=required_paths)
  tolerance = dict(document.get('tolerance', {}))
  _check_object('tolerance.', tolerance, _TOLERANCE)
  paths.setdefault('output', task + '.json')
  if task.startswith('simulate-'):
    paths.setdefault('samples', 'samples.csv')
  if task == 'pattern-table':
    paths.setdefault('table', 'pattern_table.npz')
  tolerance.setdefault('se_factor', settings.SE_FACTOR)
  tolerance.setdefault('abs_floor', settings.ABS_FLOOR)
  k_max = document.get('k_max')
  if k_max is None and (task == 'oracle-choi' or (
      task == 'reconstruct' and 'detector' not in document)):
    k_max = settings.DEFAULT_K_MAX
  for key in ('samples', 'seed', 'k_max', 'm_max'):
    if document.get(key, 0) < 0:
      raise errors.ConfigError('{} must be >= 0, got {}'
                               .format(key, document[key]))
  for key in ('cutoff', 'workers'):
    if document.get(key, 1) < 1:
      raise errors.ConfigError('{} must be >= 1, got {}'
                               .format(key, document[key]))
  return RunConfig(
      task=task,
      channel=document.get('channel'),
      detector=document.get('detector'),
      probe=document.get('probe'),
      eta_b=document.get('eta_b'),
      eta=document.get('eta'),
      samples=document.get('samples'),
      seed=document.get('seed', 0),
      cutoff=document.get('cutoff', settings.DEFAULT_CUTOFF),
      k_max=k_max,
      m_max=document.get('m_max'),
      workers=document.get('workers', 1),
      min_efficiency=document.get('min_efficiency', settings.MIN_EFFICIENCY),
      paths=paths,
      tolerance=tolerance)


def load_config(path):
  """Reads and validates a configuration file."""
  try:
    with io.open(path) as f:
      document = json.load(f)
  except (IOError, OSError) as error:
    raise errors.ConfigError('Cannot read config {}: {}'.format(path, error))
  except ValueError as error:
    raise errors.ConfigError('Config {} is not valid JSON: {}'
                             .format(path, error))
  return parse_config(document)


def apply_overrides(config, workers=None, seed=None, out=None):
  """Applies command-line overrides; `out` prefixes relative paths."""
  if workers is not None:
    if workers < 1:
      raise errors.ConfigError('workers must be >= 1, got {}'.format(workers))
    config = config._replace(workers=workers)
  if seed is not None:
    if seed < 0:
      raise errors.ConfigError('seed must be >= 0, got {}'.format(seed))
    config = config._replace(seed=seed)
  if out is not None:
    paths = {key: value if os.path.isabs(value) else os.path.join(out, value)
             for key, value in six.iteritems(config.paths)}
    config = config._replace(paths=paths)
  return config
