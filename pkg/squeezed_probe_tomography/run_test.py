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

"""Tests for run."""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import io
import json
import math
import os

# Dependency imports
from absl.testing import absltest
from absl.testing import flagsaver
import numpy as np
from squeezed_probe_tomography import config as config_lib
from squeezed_probe_tomography import run
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import serialization


_PROBE = {'v_minus': 0.324027, 'v_plus': 0.77154}


def _write_config(directory, document, name='run.json'):
  path = os.path.join(directory, name)
  with io.open(path, 'w') as f:
    f.write(json.dumps(document))
  return path


class RunTest(absltest.TestCase):

  def setUp(self):
    super(RunTest, self).setUp()
    self.directory = self.create_tempdir().full_path

  def _main(self, document, **overrides):
    path = _write_config(self.directory, document)
    with flagsaver.flagsaver(config=path, out=self.directory, **overrides):
      return run.main(['run'])

  def _result(self, name):
    return serialization.read_result(os.path.join(self.directory, name))

  def testOracleChoi(self):
    status = self._main({'task': 'oracle-choi', 'cutoff': 6, 'k_max': 1,
                         'channel': {'type': 'loss', 'T': 0.7},
                         'paths': {'output': 'oracle.json'}})
    self.assertEqual(status, 0)
    result = self._result('oracle.json')
    self.assertEqual(result['kind'], 'oracle-choi')
    self.assertAlmostEqual(result['chi'][1][1][0][0][0], 0.836660, places=6)
    self.assertEqual(result['chi'][1][1][0][0][1], 0.0)
    self.assertEqual(result['config']['channel'], {'type': 'loss', 'T': 0.7})
    self.assertIn('conventions', result)

  def testConfigErrorStatus(self):
    status = self._main({'task': 'oracle-choi', 'k_max': 1, 'colour': 'red',
                         'channel': {'type': 'identity'}})
    self.assertEqual(status, errors.EXIT_CONFIG)

  def testMissingConfigFile(self):
    with flagsaver.flagsaver(config=os.path.join(self.directory, 'nope.json')):
      self.assertEqual(run.main(['run']), errors.EXIT_CONFIG)

  def _reconstruct_identity(self, samples):
    return self._main({'task': 'reconstruct', 'k_max': 1, 'eta_b': 0.9,
                       'probe': _PROBE, 'paths': {'samples': samples}})

  def testMissingSamplesStatus(self):
    self.assertEqual(self._reconstruct_identity('nope.csv'),
                     errors.EXIT_CONFIG)

  def testCorruptSamplesStatus(self):
    with io.open(os.path.join(self.directory, 'corrupt.csv'), 'w') as f:
      f.write(u'theta,x_a,phi,x_b\n1,2,abc,4\n')
    self.assertEqual(self._reconstruct_identity('corrupt.csv'),
                     errors.EXIT_CONFIG)

  def testMissingCompareInputStatus(self):
    status = self._main({'task': 'compare', 'paths': {
        'estimate': 'missing.json', 'oracle': 'missing.json'}})
    self.assertEqual(status, errors.EXIT_CONFIG)

  def testDomainErrorStatus(self):
    status = self._main({'task': 'simulate-process', 'samples': 10,
                         'channel': {'type': 'identity'}, 'eta_b': 0.9,
                         'probe': {'v_minus': 0.6, 'v_plus': 0.9}})
    self.assertEqual(status, errors.EXIT_DOMAIN)

  def testNumericalErrorStatus(self):
    status = self._main({'task': 'simulate-detector', 'samples': 10,
                         'cutoff': 8, 'probe': _PROBE,
                         'detector': {'type': 'onoff', 'eta_d': 0.6,
                                      'p_dark': 0.0}})
    self.assertEqual(status, errors.EXIT_NUMERICAL)

  def testProcessPipeline(self):
    simulate = {'task': 'simulate-process', 'samples': 20000, 'seed': 3,
                'channel': {'type': 'identity'}, 'probe': _PROBE,
                'eta_b': 0.9, 'paths': {'samples': 'identity.csv',
                                        'output': 'simulate.json'}}
    self.assertEqual(self._main(simulate), 0)
    with io.open(os.path.join(self.directory, 'identity.csv')) as f:
      first = f.read()
    self.assertEqual(self._main(simulate, workers=2), 0)
    with io.open(os.path.join(self.directory, 'identity.csv')) as f:
      self.assertEqual(f.read(), first)

    reconstruct = {'task': 'reconstruct', 'k_max': 1, 'eta_b': 0.9,
                   'channel': {'type': 'identity'}, 'probe': _PROBE,
                   'paths': {'samples': 'identity.csv',
                             'output': 'estimate.json'}}
    self.assertEqual(self._main(reconstruct), 0)
    estimate = self._result('estimate.json')
    self.assertEqual(np.shape(estimate['std_error']), (2, 2, 2, 2))
    self.assertTrue(estimate['report']['passed'])
    self.assertEqual(estimate['metadata']['n_attempted'], 20000)

    oracle = {'task': 'oracle-choi', 'k_max': 1,
              'channel': {'type': 'identity'},
              'paths': {'output': 'oracle.json'}}
    self.assertEqual(self._main(oracle), 0)
    compare = {'task': 'compare',
               'paths': {'estimate': 'estimate.json', 'oracle': 'oracle.json',
                         'output': 'compare.json'}}
    self.assertEqual(self._main(compare), 0)
    self.assertTrue(self._result('compare.json')['report']['passed'])

  def testDetectorPipeline(self):
    detector = {'type': 'onoff', 'eta_d': 0.6, 'p_dark': 0.0}
    simulate = {'task': 'simulate-detector', 'samples': 20000, 'seed': 5,
                'detector': detector, 'probe': _PROBE,
                'paths': {'samples': 'onoff.csv'}}
    self.assertEqual(self._main(simulate), 0)
    reconstruct = {'task': 'reconstruct', 'm_max': 2, 'detector': detector,
                   'probe': _PROBE, 'paths': {'samples': 'onoff.csv'}}
    self.assertEqual(self._main(reconstruct), 0)
    result = self._result('reconstruct.json')
    povm = serialization.decode_complex(result['povm'])
    self.assertEqual(povm.shape, (2, 3, 3))
    self.assertLen(result['outcomes'], 2)
    self.assertAlmostEqual(
        sum(outcome['frequency'] for outcome in result['outcomes']), 1.0)
    self.assertTrue(result['report']['passed'])

  def testPatternTable(self):
    status = self._main({'task': 'pattern-table', 'm_max': 1, 'eta': 0.9})
    self.assertEqual(status, 0)
    result = self._result('pattern-table.json')
    self.assertLess(result['metadata']['vacuum_unbiasedness_error'], 1e-5)
    self.assertTrue(os.path.exists(os.path.join(self.directory,
                                                'pattern_table.npz')))

  def testRunWithoutFlags(self):
    config = config_lib.parse_config({'task': 'oracle-choi', 'k_max': 0,
                                      'channel': {'type': 'phase',
                                                  'phi0': math.pi}})
    config = config_lib.apply_overrides(config, out=self.directory)
    self.assertEqual(run.run(config), 0)
    result = self._result('oracle-choi.json')
    self.assertEqual(result['chi'], [[[[[1.0, 0.0]]]]])


if __name__ == '__main__':
  absltest.main()
