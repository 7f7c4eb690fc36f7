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

"""Linear algebra on a truncated single-mode Fock space.

Operators are complex numpy arrays of shape `(cutoff + 1, cutoff + 1)` with
entry `(m, n)` equal to `<m|A|n>`. The quadrature operators are
`x = (a + a^dagger) / sqrt(2)` and `p = (a - a^dagger) / (i sqrt(2))`, so the
vacuum has quadrature variance 1/2.

Nothing here mutates its arguments; returned arrays are fresh.
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import math

# Dependency imports
from squeezed_probe_tomography.util import errors
import numpy as np
import scipy.linalg


def cutoff_of(operator):
  """Returns the Fock cutoff of a square operator (or state vector)."""
  operator = np.asarray(operator)
  if operator.ndim == 2 and operator.shape[0] != operator.shape[1]:
    raise ValueError('Operator is not square: shape {}'.format(operator.shape))
  return operator.shape[-1] - 1


def _check_cutoff(cutoff):
  if int(cutoff) != cutoff or cutoff < 1:
    raise errors.DomainError('Fock cutoff must be an integer >= 1, got {}'
                             .format(cutoff))
  return int(cutoff)


def annihilation(cutoff):
  """Returns the ladder operator `a` with `<n-1|a|n> = sqrt(n)`."""
  cutoff = _check_cutoff(cutoff)
  return np.diag(np.sqrt(np.arange(1, cutoff + 1)), k=1).astype(np.complex128)


def number_operator(cutoff):
  cutoff = _check_cutoff(cutoff)
  return np.diag(np.arange(cutoff + 1)).astype(np.complex128)


def position_operator(cutoff):
  a = annihilation(cutoff)
  return (a + a.conj().T) / math.sqrt(2)


def momentum_operator(cutoff):
  a = annihilation(cutoff)
  return (a - a.conj().T) / (1j * math.sqrt(2))


def hermite_wavefunctions(n_max, x):
  """Returns `psi_n(x)` for `n = 0, ..., n_max`.

  Uses the upward recurrence
  `psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}`,
  which stays stable where the explicit Hermite polynomials overflow.

  Args:
    n_max: Integer >= 0.
    x: Float or array of quadrature values.

  Returns:
    Array of shape `(n_max + 1,) + shape(x)`.
  """
  x = np.asarray(x, dtype=np.float64)
  values = np.empty((n_max + 1,) + x.shape)
  values[0] = math.pi**-0.25 * np.exp(-x**2 / 2)
  if n_max >= 1:
    values[1] = math.sqrt(2) * x * values[0]
  for n in range(1, n_max):
    values[n + 1] = (math.sqrt(2 / (n + 1)) * x * values[n]
                     - math.sqrt(n / (n + 1)) * values[n - 1])
  return values


def hermite_wavefunction(n, x):
  """Returns the harmonic-oscillator eigenfunction `psi_n(x)`."""
  if n < 0:
    raise ValueError('n must be >= 0, got {}'.format(n))
  return hermite_wavefunctions(n, x)[n]


def phase_operator(theta, cutoff):
  """Returns `U(theta) = exp(-i n theta)`."""
  cutoff = _check_cutoff(cutoff)
  return np.diag(np.exp(-1j * theta * np.arange(cutoff + 1)))


def phase_factors(theta, cutoff):
  """Returns the matrix `exp(-i (m - n) theta)`.

  Elementwise multiplication by this matrix equals conjugation by
  `phase_operator(theta, cutoff)`. `theta` may be an array, in which case the
  result has shape `shape(theta) + (cutoff + 1, cutoff + 1)`.
  """
  levels = np.arange(cutoff + 1)
  difference = levels[:, np.newaxis] - levels[np.newaxis, :]
  theta = np.asarray(theta, dtype=np.float64)
  return np.exp(-1j * theta[..., np.newaxis, np.newaxis] * difference)


def displacement_operator(alpha, cutoff):
  """Returns `D(alpha) = exp(alpha a^dagger - alpha^* a)` on the truncation."""
  a = annihilation(cutoff)
  return scipy.linalg.expm(alpha * a.conj().T - np.conj(alpha) * a)


class RealDisplacements(object):
  """Batch evaluation of `D(alpha)` for real `alpha`.

  The generator `a^dagger - a` is diagonalized once; each displacement is then
  a product with a diagonal phase, which is how per-shot probe states are built
  without a matrix exponential per shot.
  """

  def __init__(self, cutoff):
    a = annihilation(cutoff)
    hermitian = 1j * (a.conj().T - a)
    eigenvalues, eigenvectors = scipy.linalg.eigh(hermitian)
    self._eigenvalues = eigenvalues
    self._eigenvectors = eigenvectors
    self._cutoff = cutoff

  @property
  def cutoff(self):
    return self._cutoff

  def __call__(self, alphas):
    """Returns the displacements for an array of real amplitudes.

    Args:
      alphas: Array of real amplitudes, shape `(batch,)`.

    Returns:
      Array of shape `(batch, cutoff + 1, cutoff + 1)`. The matrices are real up
      to rounding, and are returned as real arrays.
    """
    alphas = np.asarray(alphas, dtype=np.float64)
    phases = np.exp(-1j * alphas[:, np.newaxis] * self._eigenvalues)
    vectors = self._eigenvectors
    matrices = np.einsum('ij,bj,kj->bik', vectors, phases, vectors.conj())
    return matrices.real


def squeeze_operator(s, cutoff):
  """Returns `S(s) = exp((s/2)(a^2 - a^dagger^2))`.

  For `s > 0` the x quadrature of `S(s)|0>` has variance `exp(-2s)/2`.
  """
  a = annihilation(cutoff)
  a_dagger = a.conj().T
  return scipy.linalg.expm(0.5 * s * (a @ a - a_dagger @ a_dagger))


def fock_state(n, cutoff):
  """Returns the density matrix `|n><n|`."""
  cutoff = _check_cutoff(cutoff)
  if not 0 <= n <= cutoff:
    raise ValueError('Fock level {} outside cutoff {}'.format(n, cutoff))
  rho = np.zeros((cutoff + 1, cutoff + 1), dtype=np.complex128)
  rho[n, n] = 1
  return rho


def coherent_vector(alpha, cutoff):
  """Returns the Fock amplitudes of `|alpha>` up to the cutoff."""
  cutoff = _check_cutoff(cutoff)
  amplitudes = np.empty(cutoff + 1, dtype=np.complex128)
  amplitudes[0] = np.exp(-abs(alpha)**2 / 2)
  for n in range(1, cutoff + 1):
    amplitudes[n] = amplitudes[n - 1] * alpha / math.sqrt(n)
  return amplitudes


def coherent_state(alpha, cutoff):
  vector = coherent_vector(alpha, cutoff)
  return np.outer(vector, vector.conj())


def thermal_state(n_bar, cutoff):
  """Returns the diagonal state with `p_n = n_bar^n / (n_bar + 1)^(n + 1)`.

  The geometric tail beyond the cutoff is dropped, not renormalized, so the
  trace deficit measures truncation.
  """
  cutoff = _check_cutoff(cutoff)
  if n_bar < 0:
    raise errors.DomainError('Mean photon number must be >= 0, got {}'
                             .format(n_bar))
  levels = np.arange(cutoff + 1)
  populations = (n_bar / (n_bar + 1))**levels / (n_bar + 1)
  return np.diag(populations).astype(np.complex128)


def husimi_q(operator, alpha):
  """Returns `Q(alpha) = <alpha|A|alpha> / pi` for a Fock-basis operator."""
  vector = coherent_vector(alpha, cutoff_of(operator))
  return np.vdot(vector, np.asarray(operator) @ vector) / math.pi


def expectation(rho, operator):
  return np.trace(np.asarray(rho) @ np.asarray(operator))


def quadrature_moments(rho):
  """Returns the mean `(<x>, <p>)` and covariance matrix of a state.

  The covariance uses `gamma_jk = <dz_j dz_k + dz_k dz_j>`, so the vacuum has
  identity covariance. Second-moment operators are formed one level above the
  cutoff and then truncated, which makes their matrix elements exact.

  Args:
    rho: Density matrix.

  Returns:
    Pair `(mean, cov)` of real arrays with shapes `(2,)` and `(2, 2)`.
  """
  rho = np.asarray(rho)
  cutoff = cutoff_of(rho)
  size = cutoff + 1
  x_big = position_operator(cutoff + 1)
  p_big = momentum_operator(cutoff + 1)
  quadratures = [x_big[:size, :size], p_big[:size, :size]]
  big = [x_big, p_big]
  mean = np.array([expectation(rho, q).real for q in quadratures])
  cov = np.empty((2, 2))
  for i in range(2):
    for j in range(2):
      anticommutator = (big[i] @ big[j] + big[j] @ big[i])[:size, :size]
      cov[i, j] = expectation(rho, anticommutator).real - 2 * mean[i] * mean[j]
  return mean, cov


def hermiticity_residual(operator):
  operator = np.asarray(operator)
  return np.max(np.abs(operator - operator.conj().T))


def min_eigenvalue(rho):
  rho = np.asarray(rho)
  return np.min(scipy.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))


def is_density_matrix(rho, atol=1e-10, eig_tol=1e-8, normalized=True):
  """Returns whether `rho` is Hermitian, positive and of unit (or <=1) trace."""
  rho = np.asarray(rho)
  if hermiticity_residual(rho) >= atol:
    return False
  if min_eigenvalue(rho) <= -eig_tol:
    return False
  trace = np.trace(rho).real
  if normalized:
    return abs(trace - 1) < eig_tol
  return trace <= 1 + eig_tol


def pure_state_fidelity(rho, vector):
  """Returns `<psi|rho|psi>` for a normalized state vector `psi`."""
  vector = np.asarray(vector)
  return np.vdot(vector, np.asarray(rho) @ vector).real


def loss_kraus_operators(t, cutoff):
  """Returns `A_j = (1 - t)^(j/2) t^(n/2) a^j / sqrt(j!)`, `j = 0..cutoff`."""
  if not 0 <= t <= 1:
    raise errors.DomainError('Transmission must lie in [0, 1], got {}'
                             .format(t))
  a = annihilation(cutoff)
  attenuation = np.diag(np.power(float(t), np.arange(cutoff + 1) / 2))
  kraus_ops = np.empty((cutoff + 1, cutoff + 1, cutoff + 1),
                       dtype=np.complex128)
  a_power = np.eye(cutoff + 1)
  for j in range(cutoff + 1):
    kraus_ops[j] = ((1 - t)**(j / 2) / math.sqrt(math.factorial(j))
                    * attenuation @ a_power)
    a_power = a_power @ a
  return kraus_ops


def attenuate(rho, t):
  """Applies a pure loss of transmission `t` to an operator or a stack."""
  rho = np.asarray(rho)
  if t == 1:
    return rho.copy()
  ops = loss_kraus_operators(t, cutoff_of(rho))
  return np.einsum('jab,...bc,jdc->...ad', ops, rho, ops.conj())
