#
# mppencode documentation build configuration file.
#
import os
import sys

sys.path.insert(0, os.path.abspath("../.."))

from mppencode import __version__  # noqa: E402

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.githubpages",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "mppencode"
copyright = "2026, the mppencode developers"
author = "the mppencode developers"

version = __version__
release = __version__

language = "en"
exclude_patterns = []
pygments_style = "sphinx"
todo_include_todos = False

html_theme = "alabaster"
html_theme_options = {
    "show_powered_by": False,
    "show_related": False,
}
html_static_path = ["_static"]
htmlhelp_basename = "mppencodedoc"

latex_documents = [
    (master_doc, "mppencode.tex", "mppencode Documentation", author, "manual"),
]
man_pages = [(master_doc, "mppencode", "mppencode Documentation", [author], 1)]
