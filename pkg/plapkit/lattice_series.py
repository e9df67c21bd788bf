#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import logging
import sys

import numpy as np
import pandas as pd
import pandas_validator as pv

from .lattice import LatticeWindow, Sequence


class SequenceDataFrameValidator(pv.DataFrameValidator):
    column_num = 2
    index_column = pv.IntegerColumnValidator('index')
    value = pv.FloatColumnValidator('value')


class SequenceSeries:
    """
        Reads and writes the Sequence dump format: '#'-prefixed key=value header lines followed by a tab separated
        table with the columns index and value, one row per site of the window.

        :Example:

        >>> import plapkit
        >>> series = plapkit.SequenceSeries()
        >>> series.dump(plapkit.Sequence.spike(2, 1.5), 'spike.tsv', {'p': 2, 'q': 3})
        >>> u, header = series.load('spike.tsv')
        >>> u.at(0), header['N']
        (1.5, '2')
    """

    def __init__(self):
        logging.debug("SequenceSeries init")

    @staticmethod
    def frame(u):
        """
            The sequence as a frame with the columns index and value.

            :rtype: pandas.DataFrame
        """
        return pd.DataFrame({'index': u.window.indices, 'value': u.values})

    def dump(self, u, filename, header=None):
        """
            Writes u to filename. The header always records N; further keys (p, q, r, profile, s0, ...) come from
            `header` in insertion order.

            :param u: the sequence
            :type u: Sequence
            :param filename: the output path
            :type filename: str
            :param header: (optional) extra header entries
            :type header: dict
        """
        entries = {'N': u.window.radius}
        entries.update(header or {})
        with open(filename, 'w') as handle:
            for key, value in entries.items():
                handle.write('# {}={}\n'.format(key, repr(value) if isinstance(value, float) else value))
            self.frame(u).to_csv(handle, sep='\t', index=False)

    @staticmethod
    def read_header(filename):
        header = {}
        with open(filename) as handle:
            for line in handle:
                if not line.startswith('#'):
                    break
                key, _, value = line[1:].strip().partition('=')
                header[key.strip()] = value.strip()
        return header

    def load(self, filename):
        """
            Reads a dump written by :meth:`dump`.

            :param filename: the dump path
            :type filename: str
            :return: the sequence and the header entries (as strings), or None when the file fails validation
            :rtype: (Sequence, dict)
        """
        try:
            header = self.read_header(filename)
            data_frame = pd.read_csv(filename, sep='\t', comment='#', float_precision='round_trip')
            validator = SequenceDataFrameValidator()

            if not validator.is_valid(data_frame):
                logging.error('Error loading sequence dump, wrong format.')
                return None
            radius = int(header.get('N', (len(data_frame) - 1) // 2))
            window = LatticeWindow(radius)
            if not np.array_equal(data_frame['index'].values, window.indices):
                logging.error('Error loading sequence dump, sites do not cover the window of radius %s.', radius)
                return None
            return Sequence(window, data_frame['value'].values), header
        except IOError as e:
            ierr = "({}): {}".format(e.errno, e.strerror)
            logging.error("load sequence dump, file not found, I/O error %s", ierr)
        except ValueError as verr:
            logging.error("load sequence dump ValueError ->%s", verr)
        except:
            logging.error("Unexpected error on load sequence dump: %s", sys.exc_info()[0])
        return None
