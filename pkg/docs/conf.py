import cliffnet

project = 'cliffnet'
copyright = '2026, cliffnet developers'
author = 'cliffnet developers'

master_doc = 'index'

# The full version, including alpha/beta/rc tags
version = cliffnet.__version__
release = version


# -- General configuration ---------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.mathjax']

templates_path = ['_templates']

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']


# -- Options for HTML output -------------------------------------------------

html_theme = 'shibuya'

html_static_path = ['_static']

html_copy_source = False
html_show_sourcelink = False
