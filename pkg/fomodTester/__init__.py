# Licensed under a MIT license - see LICENSE.rst
import os

from .testerVersion import version as __version__

# Create the test function for self test
try:
    from astropy.tests.runner import TestRunner
    test = TestRunner.make_test_runner_in(os.path.dirname(__file__))
except ImportError:
    test = None

from .testerLogger import setup_logger
from .handlerKeys import KeyHandler
from .handlerCompile import CompileHandler
from .handlerExperiment import ExperimentHandler
from .typeCatalog import TypeCatalog
from .hnfCompiler import compile_hnf, read_templates
from .testerRuntime import compile_tester, run_union

__all__ = ["__version__", "test", "setup_logger", "KeyHandler", "CompileHandler",
           "ExperimentHandler", "TypeCatalog", "compile_hnf", "read_templates",
           "compile_tester", "run_union"]
