# Sphinx configuration for the keplerwave documentation.
# Build from docs/sphinx with: sphinx-build -b html source build
import os
import sys

# keplerwave/ sits three levels above this file
sys.path.insert(0, os.path.abspath("../../.."))

project = "keplerwave"
copyright = "2026, keplerwave developers"
author = "keplerwave developers"
release = "0.1.0"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
]
autodoc_member_order = "groupwise"
autodoc_default_options = {"members": True, "show-inheritance": True}
autosummary_generate = True
napoleon_google_docstring = True
napoleon_numpy_docstring = False

templates_path = ["_templates"]
exclude_patterns: list[str] = []

html_theme = "nature"
html_static_path = ["_static"]
