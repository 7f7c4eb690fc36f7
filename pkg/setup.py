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

"""Module setuptools script."""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

from setuptools import find_packages
from setuptools import setup

description = """Squeezed-probe tomography of quantum processes and detectors.

This package simulates and reconstructs continuous-variable process and
detector tomography driven by single-mode squeezed probes. Homodyne data from
the probes are averaged against loss-compensating pattern functions to give
the Choi tensor of a channel or the POVM elements of a detector, each with
per-element standard errors, and are checked against exact Kraus and POVM
oracles.
"""

setup(
    name='squeezed_probe_tomography',
    version='1.0.0',
    description='Squeezed-probe tomography of quantum processes and detectors',
    long_description=description,
    license='Apache License, Version 2.0',
    keywords='quantum tomography homodyne squeezed light',
    packages=find_packages(),
    install_requires=[
        'absl-py>=0.1.0',
        'numpy>=1.17',
        'scipy>=1.6',
        'six',
    ],
    extras_require={
        'test': ['sympy>=1.2'],
    },
    python_requires='>=3.6',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: POSIX :: Linux',
        'Programming Language :: Python :: 3.6',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering :: Physics',
    ],
)
