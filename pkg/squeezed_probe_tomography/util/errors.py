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

"""Exceptions raised by the tomography package.

Each family maps to one process exit status in `run.py`.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function


class TomographyError(Exception):
  """Base class for errors raised by this package."""


class ConfigError(TomographyError, ValueError):
  """Run configuration does not match the schema."""


class DomainError(TomographyError, ValueError):
  """A physical parameter is outside the domain where the method applies."""


class NumericalError(TomographyError, ArithmeticError):
  """A numerical step failed or lost its accuracy guarantees."""


class TruncationError(NumericalError):
  """Population leaked to the Fock cutoff."""


class SingularConditioningError(NumericalError):
  """Homodyne conditioning on a quadrature with vanishing variance."""


class GridMassError(NumericalError):
  """A quadrature grid does not hold the distribution's mass."""


EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4


def exit_status(error):
  """Returns the process exit status for `error`."""
  if isinstance(error, ConfigError):
    return EXIT_CONFIG
  if isinstance(error, DomainError):
    return EXIT_DOMAIN
  if isinstance(error, NumericalError):
    return EXIT_NUMERICAL
  raise TypeError('Not a tomography error: {!r}'.format(error))
