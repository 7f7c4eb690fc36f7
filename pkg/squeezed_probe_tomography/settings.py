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

"""Settings for simulation and reconstruction runs."""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

# Fock-space truncation used when a config does not name one.
DEFAULT_CUTOFF = 30

# Largest process level when a config does not name one.
DEFAULT_K_MAX = 3

# Probes and channel outputs must keep the top Fock levels below this.
TRUNCATION_TOLERANCE = 1e-6
TRUNCATION_EDGE_LEVELS = 3

# Trace-preservation checks skip this fraction of the top Fock levels.
TRUNCATION_EDGE_FRACTION = 0.2

# Homodyne grids.
GRID_POINTS = 2048
GRID_MARGIN = 3.0
GRID_MASS_WARNING = 1e-4
GRID_MASS_MINIMUM = 0.999

# Pattern tables are sampled at least this finely.
PATTERN_GRID_SPACING = 0.01
PATTERN_ENVELOPE_CUTOFF = 1e-17
PATTERN_PANEL_WIDTH = 0.5
PATTERN_PANEL_NODES = 16
PATTERN_TABLE_FORMAT = 'squeezed-probe-tomography/pattern-table'
PATTERN_TABLE_VERSION = 1

# Efficiencies at or below one half have no loss-compensating kernels.
EFFICIENCY_HARD_LIMIT = 0.5 + 1e-6
MIN_EFFICIENCY = 0.55

# Virtual mode-A outcomes are clamped to this many standard deviations.
CLAMP_WIDTH = 5.0
CLAMP_RATE_WARNING = 1e-3

# Shots are drawn in fixed blocks so results do not depend on worker count.
SHOT_BLOCK_SIZE = 65536
FOCK_BATCH_SIZE = 512

# Warn when rescaled standard errors exceed this.
NOISE_WARNING_BOUND = 0.1
SUCCESS_RATE_WARNING = 1e-3

# Default acceptance policy: pass if |error| <= max(SE_FACTOR * SE, ABS_FLOOR).
SE_FACTOR = 4.0
ABS_FLOOR = 0.03

RESULT_FORMAT = 'squeezed-probe-tomography/result'
RESULT_VERSION = 1
SAMPLES_CSV_PRECISION = 17

# Recorded in every result file.
CONVENTIONS = {
    'quadrature': 'x=(a+a^dagger)/sqrt(2), vacuum variance 1/2',
    'covariance': 'gamma_jk=<dz_j dz_k + dz_k dz_j>, vacuum diagonal 1',
    'phase_shift': 'U(theta)=exp(-i n theta)',
    'homodyne_angle': 'x_theta=x cos(theta)+p sin(theta)',
    'probe_rotation': 'U(theta) rho_0 U(theta)^dagger',
    'pattern_functions': 'uniform angle average over [0, 2pi), eta/2 kernel',
    'choi_index_order': 'chi[k][m][l][n]=<km|chi|ln>, input mode first',
    'povm_index_order': 'pi[k][m][n]=<m|Pi^k|n>',
    'version': 1,
}

# Relative slack on the uncertainty product 4 V+ V- >= 1 of probe variances.
PHYSICALITY_TOLERANCE = 1e-5

# Pattern tables cover |x| <= PATTERN_HALF_WIDTH; outcomes beyond it are
# evaluated directly.
PATTERN_HALF_WIDTH = 12.0

# Pattern kernels whose integrand exceeds this are treated as diverged.
PATTERN_DIVERGENCE_BOUND = 1e150
