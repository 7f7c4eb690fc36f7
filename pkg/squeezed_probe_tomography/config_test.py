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

"""Tests for config."""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import io
import os

# Dependency imports
from absl.testing import absltest
from absl.testing import parameterized
from squeezed_probe_tomography import config
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.util import errors


_PROCESS = {
    'task': 'simulate-process',
    'channel': {'type': 'loss', 'T': 0.7},
    'probe': {'v_minus': 0.324027, 'v_plus': 0.77154},
    'eta_b': 0.85,
    'samples': 1000,
}


def _with(**changes):
  document = dict(_PROCESS)
  document.update(changes)
  return document


class ParseConfigTest(parameterized.TestCase):

  def testDefaults(self):
    parsed = config.parse_config(_PROCESS)
    self.assertEqual(parsed.task, 'simulate-process')
    self.assertEqual(parsed.seed, 0)
    self.assertEqual(parsed.workers, 1)
    self.assertEqual(parsed.cutoff, settings.DEFAULT_CUTOFF)
    self.assertEqual(parsed.paths, {'output': 'simulate-process.json',
                                    'samples': 'samples.csv'})
    self.assertEqual(parsed.tolerance, {'se_factor': settings.SE_FACTOR,
                                        'abs_floor': settings.ABS_FLOOR})
    self.assertNotIn('detector', parsed.to_dict())

  def testPatternTableDefaults(self):
    parsed = config.parse_config({'task': 'pattern-table', 'eta': 0.9,
                                  'm_max': 3})
    self.assertEqual(parsed.paths['table'], 'pattern_table.npz')

  @parameterized.named_parameters(
      ('not_object', ['task']),
      ('unknown_key', _with(colour='red')),
      ('unknown_task', _with(task='simulate')),
      ('missing_task', {'samples': 3}),
      ('missing_eta_b', {key: value for key, value in _PROCESS.items()
                         if key != 'eta_b'}),
      ('bool_samples', _with(samples=True)),
      ('float_samples', _with(samples=10.0)),
      ('string_eta', _with(eta_b='0.9')),
      ('negative_seed', _with(seed=-1)),
      ('zero_workers', _with(workers=0)),
      ('unknown_channel', _with(channel={'type': 'amplifier'})),
      ('missing_channel_parameter', _with(channel={'type': 'loss'})),
      ('extra_channel_parameter', _with(channel={'type': 'identity',
                                                 'T': 0.5})),
      ('channel_without_type', _with(channel={'T': 0.5})),
      ('bad_probe', _with(probe={'v_minus': 0.3})),
      ('unknown_path', _with(paths={'log': 'x.txt'})),
      ('unknown_tolerance', _with(tolerance={'sigma': 3.0})),
  )
  def testRejected(self, document):
    with self.assertRaises(errors.ConfigError):
      config.parse_config(document)

  def testPhysicalRangesLeftToModules(self):
    parsed = config.parse_config(_with(eta_b=0.2))
    self.assertEqual(parsed.eta_b, 0.2)

  def testReconstructRequirements(self):
    process = {'task': 'reconstruct', 'probe': _PROCESS['probe'],
               'eta_b': 0.85, 'k_max': 2, 'paths': {'samples': 'a.csv'}}
    self.assertEqual(config.parse_config(process).k_max, 2)
    with self.assertRaises(errors.ConfigError):
      config.parse_config(dict(process, paths={}))
    detector = {'task': 'reconstruct', 'probe': _PROCESS['probe'],
                'detector': {'type': 'pnr', 'eta_d': 0.8, 'k_max': 3},
                'paths': {'samples': 'a.csv'}}
    with self.assertRaises(errors.ConfigError):
      config.parse_config(detector)
    self.assertEqual(config.parse_config(dict(detector, m_max=3)).m_max, 3)

  def testDefaultKMax(self):
    parsed = config.parse_config({'task': 'oracle-choi',
                                  'channel': {'type': 'identity'}})
    self.assertEqual(parsed.k_max, settings.DEFAULT_K_MAX)
    self.assertIsNone(config.parse_config(_PROCESS).k_max)

  def testIntegerDetectorParameter(self):
    detector = {'type': 'pnr', 'eta_d': 0.8, 'k_max': 2.5}
    with self.assertRaises(errors.ConfigError):
      config.parse_config({'task': 'simulate-detector', 'detector': detector,
                           'probe': _PROCESS['probe'], 'samples': 10})

  def testCompareNeedsPaths(self):
    with self.assertRaises(errors.ConfigError):
      config.parse_config({'task': 'compare',
                           'paths': {'estimate': 'e.json'}})
    parsed = config.parse_config({'task': 'compare', 'paths': {
        'estimate': 'e.json', 'oracle': 'o.json'}})
    self.assertEqual(parsed.paths['output'], 'compare.json')


class LoadConfigTest(absltest.TestCase):

  def _write(self, text):
    path = os.path.join(self.create_tempdir().full_path, 'run.json')
    with io.open(path, 'w') as f:
      f.write(text)
    return path

  def testLoad(self):
    parsed = config.load_config(self._write(
        u'{"task": "validate", "seed": 4}'))
    self.assertEqual(parsed.seed, 4)

  def testInvalidJson(self):
    with self.assertRaises(errors.ConfigError):
      config.load_config(self._write(u'{"task": '))

  def testMissingFile(self):
    with self.assertRaises(errors.ConfigError):
      config.load_config(os.path.join(self.create_tempdir().full_path,
                                      'missing.json'))


class ApplyOverridesTest(absltest.TestCase):

  def testOverrides(self):
    parsed = config.parse_config(_with(paths={'samples': '/data/loss.csv'}))
    updated = config.apply_overrides(parsed, workers=4, seed=9, out='/tmp/run')
    self.assertEqual(updated.workers, 4)
    self.assertEqual(updated.seed, 9)
    self.assertEqual(updated.paths['samples'], '/data/loss.csv')
    self.assertEqual(updated.paths['output'],
                     os.path.join('/tmp/run', 'simulate-process.json'))

  def testNoOverrides(self):
    parsed = config.parse_config(_PROCESS)
    self.assertEqual(config.apply_overrides(parsed), parsed)

  def testRejected(self):
    parsed = config.parse_config(_PROCESS)
    with self.assertRaises(errors.ConfigError):
      config.apply_overrides(parsed, workers=0)
    with self.assertRaises(errors.ConfigError):
      config.apply_overrides(parsed, seed=-2)


if __name__ == '__main__':
  absltest.main()
