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

"""Tests for util.serialization."""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import io
import os

# Dependency imports
from absl.testing import absltest
import numpy as np
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import serialization


class ComplexCodecTest(absltest.TestCase):

  def testLeaves(self):
    nested = serialization.encode_complex(np.array([[1 + 2j, -0.5j]]))
    self.assertEqual(nested, [[[1.0, 2.0], [-0.0, -0.5]]])
    np.testing.assert_array_equal(serialization.decode_complex(nested),
                                  np.array([[1 + 2j, -0.5j]]))

  def testBadLeaves(self):
    with self.assertRaises(errors.ConfigError):
      serialization.decode_complex([[1.0, 2.0, 3.0]])

  def testDumpsIsCanonical(self):
    first = serialization.dumps({'b': np.float64(0.5), 'a': np.int64(3)})
    second = serialization.dumps({'a': 3, 'b': 0.5})
    self.assertEqual(first, second)
    with self.assertRaises(ValueError):
      serialization.dumps({'a': float('nan')})


class AtomicOpenTest(absltest.TestCase):

  def testReplacesOnSuccess(self):
    directory = self.create_tempdir().full_path
    path = os.path.join(directory, 'out.txt')
    with serialization.atomic_open(path) as f:
      f.write(u'hello\n')
    with io.open(path) as f:
      self.assertEqual(f.read(), 'hello\n')
    self.assertEqual(os.listdir(directory), ['out.txt'])

  def testLeavesNothingOnFailure(self):
    directory = self.create_tempdir().full_path
    path = os.path.join(directory, 'out.txt')
    with self.assertRaises(RuntimeError):
      with serialization.atomic_open(path) as f:
        f.write(u'partial')
        raise RuntimeError('interrupted')
    self.assertEqual(os.listdir(directory), [])

  def testCreatesDirectory(self):
    path = os.path.join(self.create_tempdir().full_path, 'a', 'b.json')
    serialization.write_json(path, {'x': 1})
    self.assertEqual(serialization.read_json(path), {'x': 1})

  def testPermissionsFollowUmask(self):
    path = os.path.join(self.create_tempdir().full_path, 'out.json')
    serialization.write_json(path, {'x': 1})
    umask = os.umask(0)
    os.umask(umask)
    self.assertEqual(os.stat(path).st_mode & 0o777, 0o666 & ~umask)


class ResultTest(absltest.TestCase):

  def testRoundTrip(self):
    path = os.path.join(self.create_tempdir().full_path, 'result.json')
    document = serialization.result_document(
        'oracle-choi', {'chi': serialization.encode_complex(np.eye(2))},
        {'task': 'oracle-choi'}, {'seed': 1})
    serialization.write_json(path, document)
    loaded = serialization.read_result(path)
    self.assertEqual(loaded['kind'], 'oracle-choi')
    self.assertEqual(loaded['conventions'], settings.CONVENTIONS)
    np.testing.assert_array_equal(
        serialization.decode_complex(loaded['chi']), np.eye(2))

  def testRejectsOtherFormat(self):
    path = os.path.join(self.create_tempdir().full_path, 'other.json')
    serialization.write_json(path, {'format': 'something-else', 'version': 1})
    with self.assertRaises(errors.ConfigError):
      serialization.read_result(path)

  def testUnreadable(self):
    directory = self.create_tempdir().full_path
    with self.assertRaises(errors.ConfigError):
      serialization.read_result(os.path.join(directory, 'missing.json'))
    path = os.path.join(directory, 'broken.json')
    with io.open(path, 'w') as f:
      f.write(u'{"format": ')
    with self.assertRaises(errors.ConfigError):
      serialization.read_result(path)
    with io.open(path, 'w') as f:
      f.write(u'[1, 2]')
    with self.assertRaises(errors.ConfigError):
      serialization.read_result(path)


class SamplesTest(absltest.TestCase):

  def testProcessSamples(self):
    path = os.path.join(self.create_tempdir().full_path, 'samples.csv')
    rng = np.random.default_rng(5)
    data = {column: rng.normal(size=7)
            for column in serialization.PROCESS_COLUMNS}
    serialization.write_samples(path, serialization.PROCESS_COLUMNS, data,
                                {'n_attempted': 7})
    loaded, metadata = serialization.read_samples(
        path, serialization.PROCESS_COLUMNS)
    for column in serialization.PROCESS_COLUMNS:
      np.testing.assert_array_equal(loaded[column], data[column])
    self.assertEqual(metadata, {'n_attempted': 7})
    with io.open(path) as f:
      self.assertEqual(f.readline(), 'theta,x_a,phi,x_b\n')

  def testIntegerColumn(self):
    path = os.path.join(self.create_tempdir().full_path, 'detector.csv')
    data = {'theta': np.array([0.25, 1.5]), 'x_a': np.array([-1.0, 2.0]),
            'k': np.array([0, 1])}
    serialization.write_samples(path, serialization.DETECTOR_COLUMNS, data,
                                {})
    with io.open(path) as f:
      lines = f.read().splitlines()
    self.assertEqual(lines, ['theta,x_a,k', '0.25,-1,0', '1.5,2,1'])

  def testWrongHeader(self):
    path = os.path.join(self.create_tempdir().full_path, 'samples.csv')
    serialization.write_samples(path, serialization.DETECTOR_COLUMNS,
                                {'theta': [0.0], 'x_a': [0.0], 'k': [0]}, {})
    with self.assertRaises(errors.ConfigError):
      serialization.read_samples(path, serialization.PROCESS_COLUMNS)

  def testEmpty(self):
    path = os.path.join(self.create_tempdir().full_path, 'empty.csv')
    data = {column: np.zeros(0) for column in serialization.PROCESS_COLUMNS}
    serialization.write_samples(path, serialization.PROCESS_COLUMNS, data, {})
    loaded, _ = serialization.read_samples(path,
                                           serialization.PROCESS_COLUMNS)
    self.assertEqual(loaded['x_b'].shape, (0,))

  def _write(self, text):
    path = os.path.join(self.create_tempdir().full_path, 'samples.csv')
    with io.open(path, 'w') as f:
      f.write(text)
    return path

  def testMissingFile(self):
    with self.assertRaises(errors.ConfigError):
      serialization.read_samples(
          os.path.join(self.create_tempdir().full_path, 'nope.csv'),
          serialization.PROCESS_COLUMNS)

  def testNonNumericValue(self):
    path = self._write(u'theta,x_a,phi,x_b\n1,2,abc,4\n')
    with self.assertRaises(errors.ConfigError):
      serialization.read_samples(path, serialization.PROCESS_COLUMNS)

  def testShortRow(self):
    path = self._write(u'theta,x_a,phi,x_b\n1,2,3,4\n1,2\n')
    with self.assertRaises(errors.ConfigError):
      serialization.read_samples(path, serialization.PROCESS_COLUMNS)

  def testCorruptSidecar(self):
    path = self._write(u'theta,x_a,phi,x_b\n1,2,3,4\n')
    with io.open(serialization.sidecar_path(path), 'w') as f:
      f.write(u'{n_attempted')
    with self.assertRaises(errors.ConfigError):
      serialization.read_samples(path, serialization.PROCESS_COLUMNS)


if __name__ == '__main__':
  absltest.main()
