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

"""Codecs for result files, sample files and atomic writes.

Results are JSON with sorted keys; complex tensors are nested lists whose
leaves are `[re, im]` pairs. Samples are CSV with a header row and a JSON
sidecar (`<path>.json`) holding run metadata such as the number of attempted
shots.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import contextlib
import csv
import io
import json
import os
import tempfile

# Dependency imports
import numpy as np
from squeezed_probe_tomography import settings
from squeezed_probe_tomography.util import errors
import six


PROCESS_COLUMNS = ('theta', 'x_a', 'phi', 'x_b')
DETECTOR_COLUMNS = ('theta', 'x_a', 'k')


def _file_mode():
  umask = os.umask(0)
  os.umask(umask)
  return 0o666 & ~umask


@contextlib.contextmanager
def atomic_open(path, mode='w'):
  """Opens a temporary file that replaces `path` only if the block succeeds."""
  directory = os.path.dirname(os.path.abspath(path))
  if not os.path.isdir(directory):
    os.makedirs(directory)
  handle, temp_path = tempfile.mkstemp(
      dir=directory, prefix='.' + os.path.basename(path) + '.')
  try:
    with io.open(handle, mode) as f:
      yield f
    os.chmod(temp_path, _file_mode())
    os.replace(temp_path, path)
  except BaseException:
    if os.path.exists(temp_path):
      os.remove(temp_path)
    raise


def encode_complex(array):
  """Returns nested lists with `[re, im]` leaves."""
  array = np.asarray(array, dtype=np.complex128)
  return np.stack([array.real, array.imag], axis=-1).tolist()


def decode_complex(nested):
  array = np.asarray(nested, dtype=np.float64)
  if array.shape[-1:] != (2,):
    raise errors.ConfigError('Complex tensor leaves must be [re, im] pairs')
  return array[..., 0] + 1j * array[..., 1]


def _default(value):
  if isinstance(value, np.ndarray):
    return value.tolist()
  if isinstance(value, np.integer):
    return int(value)
  if isinstance(value, np.floating):
    return float(value)
  if isinstance(value, np.bool_):
    return bool(value)
  raise TypeError('Not JSON serializable: {!r}'.format(value))


def dumps(document):
  return json.dumps(document, sort_keys=True, indent=1, default=_default,
                    allow_nan=False) + '\n'


def write_json(path, document):
  with atomic_open(path) as f:
    f.write(six.text_type(dumps(document)))


def read_json(path):
  """Reads a JSON file.

  Raises:
    ConfigError: If the file cannot be read or is not valid JSON.
  """
  try:
    with io.open(path) as f:
      return json.load(f)
  except (IOError, OSError) as error:
    raise errors.ConfigError('Cannot read {}: {}'.format(path, error))
  except ValueError as error:
    raise errors.ConfigError('{} is not valid JSON: {}'.format(path, error))


def result_document(kind, payload, config, metadata):
  """Returns a self-describing result document."""
  document = {
      'format': settings.RESULT_FORMAT,
      'version': settings.RESULT_VERSION,
      'kind': kind,
      'conventions': settings.CONVENTIONS,
      'config': config,
      'metadata': metadata,
  }
  document.update(payload)
  return document


def read_result(path):
  document = read_json(path)
  if (not isinstance(document, dict)
      or document.get('format') != settings.RESULT_FORMAT
      or document.get('version') != settings.RESULT_VERSION):
    raise errors.ConfigError('{} is not a version {} result file'
                             .format(path, settings.RESULT_VERSION))
  return document


def _format_value(value):
  return '{:.{}g}'.format(value, settings.SAMPLES_CSV_PRECISION)


def sidecar_path(path):
  return path + '.json'


def write_samples(path, columns, data, metadata):
  """Writes a sample CSV and its metadata sidecar.

  Args:
    path: CSV path.
    columns: Column names.
    data: Dict mapping each column to a 1-d array.
    metadata: JSON-serializable dict, written to `sidecar_path(path)`.
  """
  arrays = [np.asarray(data[column]) for column in columns]
  with atomic_open(path) as f:
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(columns)
    for row in zip(*arrays):
      writer.writerow([str(int(value)) if isinstance(value, np.integer)
                       else _format_value(value) for value in row])
  write_json(sidecar_path(path), metadata)


def read_samples(path, columns):
  """Returns `(data, metadata)` from a sample CSV and its sidecar.

  Raises:
    ConfigError: If the file cannot be read, has other columns or holds a
      row that is not `len(columns)` numbers.
  """
  try:
    with io.open(path) as f:
      reader = csv.reader(f)
      header = next(reader, None)
      rows = [row for row in reader if row]
  except (IOError, OSError, csv.Error) as error:
    raise errors.ConfigError('Cannot read {}: {}'.format(path, error))
  if header is None or tuple(header) != tuple(columns):
    raise errors.ConfigError('{} has columns {}, expected {}'
                             .format(path, header, list(columns)))
  for index, row in enumerate(rows):
    if len(row) != len(columns):
      raise errors.ConfigError('{} row {} has {} fields, expected {}'
                               .format(path, index + 1, len(row), len(columns)))
  try:
    table = np.asarray(rows, dtype=np.float64).reshape(-1, len(columns))
  except ValueError as error:
    raise errors.ConfigError('{} holds a non-numeric value: {}'
                             .format(path, error))
  data = {column: table[:, i] for i, column in enumerate(columns)}
  metadata = {}
  if os.path.exists(sidecar_path(path)):
    metadata = read_json(sidecar_path(path))
  return data, metadata
