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

"""Comparison of estimates against oracles under a tolerance policy.

An element passes if `|estimate - oracle| <= max(se_factor * SE, abs_floor)`.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import collections

# Dependency imports
from absl import logging
import numpy as np
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.util import errors
from squeezed_probe_tomography.util import serialization


# Result keys holding comparable tensors, in lookup order.
TENSOR_KEYS = ('chi', 'povm')


class Report(collections.namedtuple(
    'Report', ('abs_errors', 'ratios', 'passed_elements', 'se_factor',
               'abs_floor'))):
  """Per-element comparison.

  Attributes:
    abs_errors: Absolute errors.
    ratios: Errors divided by standard errors; 0 where the error is 0 and
      `inf` where only the standard error is 0.
    passed_elements: Boolean tensor of per-element verdicts.
    se_factor: Multiplier `c` of the standard error.
    abs_floor: Absolute tolerance floor.
  """

  @property
  def passed(self):
    return bool(np.all(self.passed_elements))

  @property
  def max_error(self):
    return float(np.max(self.abs_errors)) if self.abs_errors.size else 0.0

  @property
  def max_ratio(self):
    return float(np.max(self.ratios)) if self.ratios.size else 0.0

  def to_document(self):
    """Returns a JSON-ready dict; infinite ratios are written as None."""
    return {
        'passed': self.passed,
        'max_error': self.max_error,
        'max_ratio': self.max_ratio if np.isfinite(self.max_ratio) else None,
        'abs_errors': self.abs_errors.tolist(),
        'error_over_se': np.where(np.isfinite(self.ratios), self.ratios,
                                  None).tolist(),
        'failed_elements': np.argwhere(~self.passed_elements).tolist(),
        'se_factor': self.se_factor,
        'abs_floor': self.abs_floor,
    }


def compare_report(estimate, oracle, std_error=None, se_factor=None,
                   abs_floor=None):
  """Compares an estimated tensor with an oracle tensor.

  Args:
    estimate: Complex tensor.
    oracle: Complex tensor of the same shape.
    std_error: Per-element standard errors of `estimate`; zero if omitted.
    se_factor: Defaults to `settings.SE_FACTOR`.
    abs_floor: Defaults to `settings.ABS_FLOOR`.

  Returns:
    `Report`.

  Raises:
    ConfigError: If the shapes differ.
  """
  if se_factor is None:
    se_factor = settings.SE_FACTOR
  if abs_floor is None:
    abs_floor = settings.ABS_FLOOR
  estimate = np.asarray(estimate)
  oracle = np.asarray(oracle)
  if std_error is None:
    std_error = np.zeros(estimate.shape)
  std_error = np.asarray(std_error, dtype=np.float64)
  if estimate.shape != oracle.shape or std_error.shape != estimate.shape:
    raise errors.ConfigError(
        'Cannot compare tensors of shapes {} and {} (standard errors {})'
        .format(estimate.shape, oracle.shape, std_error.shape))
  difference = np.abs(estimate - oracle)
  with np.errstate(divide='ignore', invalid='ignore'):
    ratios = np.where(difference == 0, 0.0, difference / std_error)
  passed = difference <= np.maximum(se_factor * std_error, abs_floor)
  report = Report(difference, ratios, passed, float(se_factor),
                  float(abs_floor))
  logging.info('Comparison %s: max error %.4g, max error/SE %.3g',
               'passed' if report.passed else 'FAILED', report.max_error,
               report.max_ratio)
  return report


def tensor_from_result(document):
  """Returns `(key, tensor, std_error)` of a result document."""
  for key in TENSOR_KEYS:
    if key in document:
      tensor = serialization.decode_complex(document[key])
      std_error = document.get('std_error')
      if std_error is not None:
        std_error = np.asarray(std_error, dtype=np.float64)
      return key, tensor, std_error
  raise errors.ConfigError('Result of kind {!r} holds no tensor among {}'
                           .format(document.get('kind'), TENSOR_KEYS))


def compare_files(estimate_path, oracle_path, se_factor=None, abs_floor=None):
  """Runs `compare_report` on two result files.

  Raises:
    ConfigError: If a file is not a result file, the two hold different
      tensors, or their shapes differ.
  """
  estimate_key, estimate, std_error = tensor_from_result(
      serialization.read_result(estimate_path))
  oracle_key, oracle, _ = tensor_from_result(
      serialization.read_result(oracle_path))
  if estimate_key != oracle_key:
    raise errors.ConfigError('Cannot compare {!r} with {!r}'
                             .format(estimate_key, oracle_key))
  return compare_report(estimate, oracle, std_error, se_factor, abs_floor)
