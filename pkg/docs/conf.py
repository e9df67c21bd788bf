# -*- coding: utf-8 -*-
#
# plapkit documentation build configuration file.

import sys
import os

sys.path.insert(0, os.path.abspath('..'))

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.mathjax']

mathjax_path = 'https://cdnjs.cloudflare.com/ajax/libs/mathjax/2.7.4/MathJax.js?config=TeX-AMS-MML_HTMLorMML'

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = u'plapkit'
copyright = u'2024, plapkit project members'
author = u'plapkit project members'

version = '0.1'
release = '0.1.0'

language = None

exclude_patterns = ['_build']

pygments_style = 'sphinx'

todo_include_todos = False

htmlhelp_basename = 'plapkitdoc'

latex_elements = {
}

latex_documents = [
  (master_doc, 'plapkit.tex', u'plapkit Documentation',
   author, 'manual'),
]

man_pages = [
    (master_doc, 'plapkit', u'plapkit Documentation',
     [author], 1)
]

texinfo_documents = [
  (master_doc, 'plapkit', u'plapkit Documentation',
   author, 'plapkit', 'Ground states of discrete p-Laplacian equations.',
   'Miscellaneous'),
]

from unittest.mock import MagicMock


class Mock(MagicMock):
    @classmethod
    def __getattr__(cls, name):
        return MagicMock()


MOCK_MODULES = ['numpy',
                'numpy.linalg',
                'pandas',
                'pandas_validator',
                'scipy',
                'scipy.optimize',
                'scipy.special',
                'tqdm',
                'click']
sys.modules.update((mod_name, Mock()) for mod_name in MOCK_MODULES)
