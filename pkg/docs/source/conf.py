# -*- coding: utf-8 -*-
#
# hgflow documentation build configuration file.

import sys
import os

# Make the package importable without installing it.
sys.path.insert(0, os.path.abspath('../..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.coverage',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'hgflow'
copyright = u'2026, hgflow developers'

from _hgflow_version import __version__
version = __version__
release = version

exclude_patterns = []
add_module_names = False
autodoc_docstring_signature = True
pygments_style = 'sphinx'

html_theme = 'alabaster'
htmlhelp_basename = 'hgflowdoc'

latex_elements = {
}

latex_documents = [
  ('index', 'hgflow.tex', u'hgflow Documentation',
   u'hgflow developers', 'manual'),
]

man_pages = [
    ('index', 'hgflow', u'hgflow Documentation',
     [u'hgflow developers'], 1)
]
