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

"""Tests for util.rng."""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import functools

# Dependency imports
from absl.testing import absltest
import numpy as np
from squeezed_probe_tomography.util import rng


def _draw(block, seed):
  streams = rng.make_streams(seed, block.index)
  return streams.probe.normal(size=block.count)


class StreamsTest(absltest.TestCase):

  def testDeterministic(self):
    first = rng.make_streams(7, 3)
    second = rng.make_streams(7, 3)
    np.testing.assert_array_equal(first.angles.random(5),
                                  second.angles.random(5))

  def testStreamsDiffer(self):
    streams = rng.make_streams(7, 3)
    self.assertFalse(np.array_equal(streams.angles.random(5),
                                    streams.probe.random(5)))
    other_block = rng.make_streams(7, 4)
    self.assertFalse(np.array_equal(rng.make_streams(7, 3).angles.random(5),
                                    other_block.angles.random(5)))

  def testNegativeSeed(self):
    with self.assertRaises(ValueError):
      rng.make_streams(-1, 0)


class ShotBlocksTest(absltest.TestCase):

  def testPartition(self):
    blocks = rng.shot_blocks(10, block_size=4)
    self.assertEqual(blocks, [rng.ShotBlock(0, 0, 4), rng.ShotBlock(1, 4, 4),
                              rng.ShotBlock(2, 8, 2)])
    self.assertEqual(rng.shot_blocks(0, block_size=4), [])

  def testWorkerCountDoesNotMatter(self):
    blocks = rng.shot_blocks(50, block_size=8)
    function = functools.partial(_draw, seed=11)
    serial = np.concatenate(rng.map_blocks(function, blocks, workers=1))
    parallel = np.concatenate(rng.map_blocks(function, blocks, workers=3))
    np.testing.assert_array_equal(serial, parallel)
    self.assertLen(serial, 50)


if __name__ == '__main__':
  absltest.main()
