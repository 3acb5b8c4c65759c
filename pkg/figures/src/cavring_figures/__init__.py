"""Offline figure scripts for cavring CSV outputs.

Pure file-to-file transforms: each script reads the documented CSV
schema, validates it, and renders an image.  No simulation logic lives
here; the simulator is fully usable without this package.
"""

__version__ = "0.1.0"
