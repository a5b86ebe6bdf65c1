# Bump when the serialized catalog or template layout changes.
formatversion = '1.0'

try:
    from .version import version
except ImportError:
    # version.py is written by setuptools_scm on installation
    version = "v0.1"
