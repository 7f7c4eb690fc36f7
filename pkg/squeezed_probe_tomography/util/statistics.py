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

"""Mergeable first and second moment accumulators for Monte-Carlo means."""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections
import math

# Dependency imports
import numpy as np
from squeezed_probe_tomography.util import errors


class MomentAccumulator(collections.namedtuple(
    'MomentAccumulator', ('total', 'total_squares', 'count'))):
  """Running sums of a (possibly complex) tensor-valued sample.

  Attributes:
    total: Sum of the samples.
    total_squares: Sum of the squared moduli of the samples.
    count: Number of samples. Samples that are identically zero still count.
  """

  def __new__(cls, total, total_squares, count):
    return super(MomentAccumulator, cls).__new__(
        cls, np.asarray(total), np.asarray(total_squares, dtype=np.float64),
        int(count))

  @classmethod
  def empty(cls, shape, dtype=np.complex128):
    return cls(np.zeros(shape, dtype=dtype), np.zeros(shape), 0)

  @classmethod
  def from_samples(cls, samples):
    """Accumulates samples stacked along the first axis."""
    samples = np.asarray(samples)
    return cls(np.sum(samples, axis=0), np.sum(np.abs(samples)**2, axis=0),
               samples.shape[0])

  def merge(self, other):
    if self.total.shape != other.total.shape:
      raise ValueError('Cannot merge accumulators of shapes {} and {}'
                       .format(self.total.shape, other.total.shape))
    return MomentAccumulator(self.total + other.total,
                             self.total_squares + other.total_squares,
                             self.count + other.count)

  def mean(self):
    if self.count == 0:
      raise errors.DomainError('No samples to average')
    return self.total / self.count

  def std_error(self):
    """Returns the standard error of `mean()`, elementwise."""
    if self.count < 2:
      raise errors.DomainError(
          'Need at least 2 samples for a standard error, got {}'
          .format(self.count))
    n = self.count
    mean = self.total / n
    variance = (self.total_squares - n * np.abs(mean)**2) / (n - 1)
    return np.sqrt(np.maximum(variance, 0) / n)


def merge_all(accumulators):
  """Merges accumulators in the given order."""
  accumulators = list(accumulators)
  if not accumulators:
    raise ValueError('Nothing to merge')
  result = accumulators[0]
  for accumulator in accumulators[1:]:
    result = result.merge(accumulator)
  return result


def outer_product_moments(left, right):
  """Accumulates samples `g_s[k, m, l, n] = left_s[k, l] right_s[m, n]`.

  The per-sample tensor is never formed, which keeps memory linear in the
  number of samples.

  Args:
    left: Array of shape `(samples, K, K)`.
    right: Array of shape `(samples, M, M)`.

  Returns:
    `MomentAccumulator` over tensors of shape `(K, M, K, M)`.
  """
  total = np.einsum('skl,smn->kmln', left, right)
  total_squares = np.einsum('skl,smn->kmln', np.abs(left)**2,
                            np.abs(right)**2)
  return MomentAccumulator(total, total_squares, left.shape[0])


def binomial_std_error(successes, n):
  """Returns `(p, sqrt(p (1 - p) / n))` for an empirical frequency."""
  if n == 0:
    raise errors.DomainError('No trials')
  p = successes / n
  return p, math.sqrt(p * (1 - p) / n)
