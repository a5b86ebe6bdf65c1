"""
The KeyHandler navigates the key files that drive batch compilation and
experiments: the master key names the key directory, the output and
sentence roots, and the guard, sentence and experiment keys.

A master key looks like

    key_dir          ./
    output_root      ../output/
    sentence_root    ../sentences/
    guard_key        guards.txt
    sentence_key     sentences.txt
    experiment_key   experiments.txt
"""

import logging
import os

from . import utilsKeyReaders as key_readers
from . import utilsLists as list_utils
from .testerLogger import log_banner
from .utilsErrors import ArgumentError
from .utilsKeyReaders import DEFAULT_GUARDS

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)

SINGLE_KEYS = ['key_dir', 'output_root', 'sentence_root']
LIST_KEYS = ['guard_key', 'sentence_key', 'experiment_key']


class KeyHandler:
    """
    Class to handle the key files of a batch of sentences and
    experiments.
    """

    def __init__(self,
                 master_key='fomod_keys/master_key.txt',
                 dochecks=True,
                 ):

        self._dochecks = dochecks

        self._master_key = None

        self._guard_dict = None
        self._sentence_dict = None
        self._experiment_dict = None

        self.build_key_handler(master_key)

    ##############################################################
    # FILE READING AND INITIALIZATION
    ##############################################################

    def build_key_handler(self, master_key=None):
        """
        Construct the key handler object.
        """

        log_banner(logger, "Initializing the tester KeyHandler.")

        if master_key is None or os.path.isfile(master_key) is False:
            logger.error("Master key " + str(master_key) + " not found. Aborting.")
            raise ArgumentError("Master key " + str(master_key) + " not found.")

        self._master_key = os.path.abspath(master_key)
        self._read_master_key()

        log_banner(logger, "Reading individual key files.")

        self._read_all_keys()

        if self._dochecks:
            self.check_sentence_files()

        log_banner(logger, "Master key reading and checks complete.")

    ##############################################################
    # READ THE MASTER KEY
    ##############################################################

    def _read_master_key(self):
        """
        Read the master key. Paths are relative to the master key's
        directory.
        """
        logger.info("Master key file: " + self._master_key)

        base_dir = os.path.dirname(self._master_key)
        self._key_dir = base_dir
        self._output_root = base_dir
        self._sentence_root = base_dir
        self._keys = {this_key: [] for this_key in LIST_KEYS}

        seen = set()
        lines_read = 0
        with open(self._master_key, 'r') as infile:
            for line in infile:
                if key_readers.skip_line(line):
                    continue
                words = line.split()
                # All key entries go key-value
                if len(words) != 2:
                    continue
                this_key, this_value = words

                if this_key in SINGLE_KEYS:
                    if this_key in seen:
                        logger.warning("Multiple " + this_key +
                                       " definitions. Using the last one.")
                    seen.add(this_key)
                    setattr(self, '_' + this_key, os.path.join(base_dir, this_value))
                    lines_read += 1
                elif this_key in LIST_KEYS:
                    self._keys[this_key].append(this_value)
                    lines_read += 1
                else:
                    logger.warning("Unknown master key entry " + this_key + ". Ignoring it.")

        logger.info("Successfully imported " + str(lines_read) + " key/value pairs.")

        if self._dochecks:
            self.check_key_existence()

        return True

    def check_key_existence(self):
        """
        Check file existence for the keys defined in the master file.
        """
        errors = 0

        if not os.path.isdir(self._key_dir):
            logger.error("Missing the key directory. Currently set to " + self._key_dir)
            errors += 1

        for this_list in self._keys.values():
            for this_key in this_list:
                if not os.path.isfile(os.path.join(self._key_dir, this_key)):
                    logger.error("key " + this_key + " is defined but does not exist in " +
                                 self._key_dir)
                    errors += 1

        if errors > 0:
            logger.error("Checked key file existence. Found " + str(errors) + " errors.")
            raise ArgumentError("Checked key file existence. Found " + str(errors) + " errors.")

        logger.info("Checked key file existence with no errors.")
        return True

    def _read_all_keys(self):
        """
        Read the guard, sentence and experiment keys into dictionaries.
        """
        self._guard_dict = key_readers.batch_read(
            key_list=self._keys['guard_key'], reader_function=key_readers.read_guard_key,
            key_dir=self._key_dir)
        self._sentence_dict = key_readers.batch_read(
            key_list=self._keys['sentence_key'], reader_function=key_readers.read_sentence_key,
            key_dir=self._key_dir)
        self._experiment_dict = key_readers.batch_read(
            key_list=self._keys['experiment_key'],
            reader_function=key_readers.read_experiment_key, key_dir=self._key_dir)

    def check_sentence_files(self):
        """
        Warn about sentences whose HNF file is missing.
        """
        missing = 0
        for this_name in sorted(self._sentence_dict):
            this_file = self.get_hnf_file(this_name)
            if not os.path.isfile(this_file):
                logger.warning("Missing HNF file for " + this_name + ": " + this_file)
                missing += 1
        for this_name, this_params in sorted(self._experiment_dict.items()):
            sentence = this_params.get('sentence', '')
            if sentence not in self._sentence_dict:
                logger.warning("Experiment " + this_name + " refers to unknown sentence " +
                               repr(sentence))
                missing += 1
        return missing == 0

    ##############################################################
    # ACCESSORS
    ##############################################################

    def get_guards(self):
        """
        Default guards updated with the guard keys.
        """
        guards = dict(DEFAULT_GUARDS)
        guards.update(self._guard_dict)
        return guards

    def get_output_root(self):
        return self._output_root

    def get_sentences(self, only=None, skip=None, first=None, last=None):
        return list_utils.select_from_list(list(self._sentence_dict.keys()), first=first,
                                           last=last, skip=skip, only=only)

    def get_sentence_info(self, sentence=None):
        if sentence not in self._sentence_dict:
            raise ArgumentError("Sentence " + str(sentence) + " not in the sentence keys.")
        return dict(self._sentence_dict[sentence])

    def get_hnf_file(self, sentence=None):
        return os.path.join(self._sentence_root, self.get_sentence_info(sentence)['hnf_file'])

    def get_sentence_file(self, sentence=None):
        """
        Path of the FO+MOD companion, or None when it does not exist.
        """
        fname = os.path.join(self._sentence_root,
                             self.get_sentence_info(sentence)['sentence_file'])
        if os.path.isfile(fname):
            return fname
        return None

    def get_templates_file(self, sentence=None):
        return os.path.join(self._output_root, sentence + '.templates.json')

    def get_experiments(self, only=None, skip=None, first=None, last=None):
        return list_utils.select_from_list(list(self._experiment_dict.keys()), first=first,
                                           last=last, skip=skip, only=only)

    def get_experiment_params(self, experiment=None):
        if experiment not in self._experiment_dict:
            raise ArgumentError("Experiment " + str(experiment) + " not in the experiment keys.")
        return key_readers.complete_experiment(self._experiment_dict[experiment])

    def get_report_file(self, experiment=None, ext='json'):
        return os.path.join(self._output_root, experiment + '.report.' + ext)

    def make_output_root(self):
        if not os.path.isdir(self._output_root):
            logger.info("Creating output directory " + self._output_root)
            os.makedirs(self._output_root)
        return self._output_root
