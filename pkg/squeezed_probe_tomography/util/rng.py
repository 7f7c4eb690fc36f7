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

"""Seedable random streams and the fixed shot partition.

A run of `n` shots is cut into blocks of `settings.SHOT_BLOCK_SIZE`. Block `b`
draws every random number from streams spawned off `SeedSequence([seed, b])`,
so the output depends only on `(seed, n)` and never on how blocks are spread
over worker processes.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import concurrent.futures

# Dependency imports
from absl import logging
import numpy as np
from squeezed_probe_tomography import settings


class RngStreams(collections.namedtuple(
    'RngStreams', ('angles', 'probe', 'measurement', 'selection'))):
  """Independent generators for one shot block.

  Attributes:
    angles: Homodyne angles `theta` and `phi`.
    probe: Virtual mode-A outcomes `x_a`.
    measurement: Homodyne outcomes and detector clicks.
    selection: Post-selection of trace-decreasing operations.
  """


def make_streams(seed, block):
  """Returns the `RngStreams` of shot block `block` of a run seeded `seed`."""
  if seed < 0 or block < 0:
    raise ValueError('Seed and block must be >= 0, got {} and {}'
                     .format(seed, block))
  root = np.random.SeedSequence([int(seed), int(block)])
  return RngStreams(*[np.random.default_rng(child) for child in root.spawn(4)])


class ShotBlock(collections.namedtuple(
    'ShotBlock', ('index', 'start', 'count'))):
  """Shots `start, ..., start + count - 1`, drawn from stream `index`."""


def shot_blocks(n, block_size=None):
  """Partitions `n` shots into `ShotBlock`s."""
  if block_size is None:
    block_size = settings.SHOT_BLOCK_SIZE
  if n < 0:
    raise ValueError('Number of shots must be >= 0, got {}'.format(n))
  blocks = []
  for index, start in enumerate(range(0, n, block_size)):
    blocks.append(ShotBlock(index, start, min(block_size, n - start)))
  return blocks


def map_blocks(function, blocks, workers=1):
  """Applies `function` to each block, returning results in block order.

  Args:
    function: Picklable callable taking a `ShotBlock`.
    blocks: Sequence of `ShotBlock`.
    workers: Number of processes; 1 runs in this process.

  Returns:
    List of results, one per block, in the order of `blocks`.
  """
  blocks = list(blocks)
  if workers <= 1 or len(blocks) <= 1:
    results = []
    for block in blocks:
      results.append(function(block))
      logging.debug('Finished shot block %d (%d shots)', block.index,
                    block.count)
    return results
  workers = min(workers, len(blocks))
  logging.info('Spreading %d shot blocks over %d workers', len(blocks),
               workers)
  with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
    return list(executor.map(function, blocks))
