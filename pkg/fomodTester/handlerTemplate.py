"""
handlerTemplate

Parent of the batch handlers. Holds the key handler, the sentence and
experiment selections, a per-(c, d) catalog cache and the looper.
"""

import logging

import numpy as np

from .typeCatalog import TypeCatalog
from .utilsKeyReaders import DEFAULT_GUARDS

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


class HandlerTemplate:
    """
    Template handler class inherited by specific handler objects.
    """

    def __init__(
        self,
        key_handler = None,
        dry_run = False,
        ):

        self._kh = None
        self._catalogs = {}

        self._sentences_first = None
        self._sentences_last = None
        self._sentences_skip = None
        self._sentences_only = None
        self._experiments_skip = None
        self._experiments_only = None

        self._sentences_list = []
        self._experiments_list = []

        if key_handler is not None:
            self.set_key_handler(key_handler, nobuild=True)

        self.set_sentences(nobuild=True)
        self.set_experiments(nobuild=True)

        self._build_lists()

        self.set_dry_run(dry_run)

#region Parameter toggles

    def set_key_handler(
        self,
        key_handler = None,
        nobuild = False):
        """
        Set the KeyHandler that interfaces with the key files.
        """
        self._kh = key_handler
        if not nobuild:
            self._build_lists()
        return(None)

    def set_dry_run(
        self,
        dry_run = False):
        """
        In a dry run loops only log what they would do.
        """
        self._dry_run = dry_run
        return(None)

#endregion

#region List building routines

    def set_sentences(
        self,
        first=None,
        last=None,
        skip=[],
        only=[],
        nobuild=False):
        """
        Set conditions on the sentences considered when a loop is run.
        By default, consider all sentences.
        """
        self._sentences_first = first
        self._sentences_last = last

        if np.isscalar(skip):
            self._sentences_skip = [skip]
        else:
            self._sentences_skip = skip

        if np.isscalar(only):
            self._sentences_only = [only]
        else:
            self._sentences_only = only

        if not nobuild:
            self._build_lists()
        return(None)

    def set_experiments(
        self,
        skip=[],
        only=[],
        nobuild=False):
        """
        Set conditions on the experiments considered when a loop is run.
        """
        if np.isscalar(skip):
            self._experiments_skip = [skip]
        else:
            self._experiments_skip = skip

        if np.isscalar(only):
            self._experiments_only = [only]
        else:
            self._experiments_only = only

        if not nobuild:
            self._build_lists()
        return(None)

    def _build_lists(self):
        """
        Build the sentence and experiment lists from the key handler and
        the selection conditions.
        """
        if self._kh is None:
            logger.debug("No key handler set, lists stay empty.")
            self._sentences_list = []
            self._experiments_list = []
            return(None)

        self._sentences_list = self._kh.get_sentences(
            only=self._sentences_only, skip=self._sentences_skip,
            first=self._sentences_first, last=self._sentences_last)
        self._experiments_list = self._kh.get_experiments(
            only=self._experiments_only, skip=self._experiments_skip)
        return(None)

    def get_sentences(self):
        return(self._sentences_list)

    def get_experiments(self):
        return(self._experiments_list)

#endregion

#region Shared helpers

    def get_guards(self):
        if self._kh is None:
            return dict(DEFAULT_GUARDS)
        return self._kh.get_guards()

    def get_catalog(self, c, d):
        """
        Type catalog of C^c_d, built once per handler.
        """
        key = (int(c), int(d))
        if key not in self._catalogs:
            guards = self.get_guards()
            self._catalogs[key] = TypeCatalog(c, d, canonical_cap=guards['canonical_cap'],
                                              type_guard=guards['type_guard'])
        return self._catalogs[key]

    def looper(
        self,
        do_sentences=False,
        do_experiments=False):
        """
        Generator over the selected sentences or experiments.
        """
        if do_sentences:
            for this_sentence in self.get_sentences():
                yield this_sentence
        if do_experiments:
            for this_experiment in self.get_experiments():
                yield this_experiment

#endregion
