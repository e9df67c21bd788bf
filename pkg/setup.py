#!/usr/bin/env python3
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.
# -*- coding: utf-8 -*-

import os
import sys

from setuptools import setup
from setuptools.command.install import install

VERSION = "0.1.0"


def readme():
    with open('README.rst') as f:
        return f.read()


class VerifyVersionCommand(install):
    """Custom command to verify that the git tag matches our version"""
    description = 'verify that the git tag matches our version'

    def run(self):
        tag = os.getenv('CIRCLE_TAG')

        if tag != VERSION:
            info = "Git tag: {0} does not match the version of this app: {1}".format(
                tag, VERSION
            )
            sys.exit(info)


setup(
    name='plapkit',
    version=VERSION,
    description='Ground states and sign-changing ground states of discrete p-Laplacian equations with logarithmic '
                'nonlinearity',
    long_description=readme(),
    keywords='p-Laplacian lattice Nehari manifold ground state logarithmic nonlinearity',
    author='plapkit project members',
    license='MIT',
    packages=['plapkit'],
    install_requires=[
        'numpy', 'pandas', 'scipy', 'click', 'tqdm', 'pandas-validator'
    ],
    entry_points={
        'console_scripts': ['plapkit=plapkit.cli:main'],
    },
    zip_safe=False,
    classifiers=[
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: Implementation :: CPython',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    cmdclass={
        'verify': VerifyVersionCommand,
    }
)
