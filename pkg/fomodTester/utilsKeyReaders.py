"""
Readers for the tester's key files: guard values, sentence lists and
experiment definitions.
"""

import ast
import logging
import os

from .utilsErrors import ArgumentError

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


##############################################################
# Defaults
##############################################################

DEFAULT_GUARDS = {
    'canonical_cap': 8,
    'type_guard': 10**4,
    'eval_cap': 12,
    'edit_distance_cap': 10,
    'clause_guard': 10**5,
    'tuple_guard': 10**5,
    'expansion_guard': 10**4,
    'frobenius_guard': 10**6,
    'decompose_guard': 10**7,
    'member_enum_guard': 10**6,
    'amplification_c0': 18,
}

EXPERIMENT_PARAMS = {
    'sentence': '',
    'family': '',
    'n_list': [],
    'epsilon_list': [],
    'repeats': 0,
    'seed': 0,
    'chv': [],
    'mix': [],
    'expect': '',
    'trials': 0,
}

VALID_EXPECT = ['', 'ACCEPT', 'REJECT']


##############################################################
# Helper Functions
##############################################################

def batch_read(key_list=[], reader_function=None, key_dir='', existing_dict=None):
    """
    Read one set of keys into a single dictionary.
    """

    if existing_dict is None:
        output_dict = {}
    else:
        output_dict = existing_dict

    for this_key in key_list:
        this_fname = os.path.join(key_dir, this_key)
        if os.path.isfile(this_fname) is False:
            logger.error("I tried to read key " + this_fname + " but it does not exist.")
            continue
        output_dict = reader_function(fname=this_fname, existing_dict=output_dict)

    return output_dict


def skip_line(line='', comment='#', delim=None, expected_words=None, expected_format=None,
              maxsplit=-1):
    if len(line.strip()) == 0:
        return True
    if line.lstrip()[0] == comment:
        return True
    if expected_words is not None:
        words = parse_one_line(line, delim=delim, maxsplit=maxsplit)
        if len(words) != expected_words:
            logger.warning("Skipping line because it does not match expected format.")
            logger.warning("Expected " + str(expected_words) + " entries. Got " + str(len(words)))
            if expected_format is not None:
                logger.warning("Expected format is: " + expected_format)
            logger.warning("Line is: ")
            logger.warning(line)
            return True
    return False


def parse_one_line(line='', delim=None, maxsplit=-1):
    return [word.strip() for word in line.strip().split(delim, maxsplit)]


def _open_key(fname):
    if os.path.isfile(fname) is False:
        logger.error("I tried to read key " + fname + " but it does not exist.")
        raise ArgumentError("Key " + fname + " does not exist.")
    logger.info("Reading: " + fname)
    with open(fname, 'r') as infile:
        return infile.readlines()


##############################################################
# Guard Key
##############################################################

def read_guard_key(fname='', existing_dict=None, delim=None):
    """
    Read a guard key: "guard_name value" lines. Values are python
    literals of the same type as the default.
    """

    if existing_dict is None:
        out_dict = {}
    else:
        out_dict = existing_dict

    expected_words = 2
    expected_format = "guard_name value"

    lines_read = 0
    for line in _open_key(fname):
        if skip_line(line, expected_words=expected_words, delim=delim,
                     expected_format=expected_format):
            continue

        this_guard, this_value = parse_one_line(line, delim=delim)

        if this_guard not in DEFAULT_GUARDS:
            logger.error("Got an unknown guard " + this_guard + ". Line is:")
            logger.error(line)
            continue

        try:
            this_value = ast.literal_eval(this_value)
        except (ValueError, SyntaxError):
            logger.error("Could not parse guard value. Line is:")
            logger.error(line)
            continue

        if type(this_value) != type(DEFAULT_GUARDS[this_guard]):
            logger.error("Got an unexpected type for guard " + this_guard + ". Line is:")
            logger.error(line)
            continue

        if this_guard in out_dict:
            logger.debug("Guard " + this_guard + " repeats. Using the latest value.")

        out_dict[this_guard] = this_value
        lines_read += 1

    logger.info("Read " + str(lines_read) + " lines into the guard dictionary.")

    return out_dict


##############################################################
# Sentence Key
##############################################################

def read_sentence_key(fname='', existing_dict=None, delim=None):
    """
    Read a sentence key: "name c d hnf_file" lines. A file with the same
    stem and suffix .fo next to the HNF file is recorded as the source
    sentence.
    """

    if existing_dict is None:
        out_dict = {}
    else:
        out_dict = existing_dict

    expected_words = 4
    expected_format = "sentence_name c d hnf_file"

    lines_read = 0
    for line in _open_key(fname):
        if skip_line(line, expected_words=expected_words, delim=delim,
                     expected_format=expected_format):
            continue

        this_name, this_c, this_d, this_file = parse_one_line(line, delim=delim)

        try:
            this_c, this_d = int(this_c), int(this_d)
        except ValueError:
            logger.error("Could not parse c and d as integers. Line is:")
            logger.error(line)
            continue

        if this_name in out_dict:
            logger.warning("Sentence " + this_name + " defined twice. Using the latest entry.")

        if this_file.endswith('.hnf.json'):
            this_sentence = this_file[:-len('.hnf.json')] + '.fo'
        else:
            this_sentence = os.path.splitext(this_file)[0] + '.fo'

        out_dict[this_name] = {
            'c': this_c,
            'd': this_d,
            'hnf_file': this_file,
            'sentence_file': this_sentence,
        }
        lines_read += 1

    logger.info("Read " + str(lines_read) + " lines into the sentence dictionary.")

    return out_dict


##############################################################
# Experiment Key
##############################################################

def read_experiment_key(fname='', existing_dict=None, delim=None):
    """
    Read an experiment key: "experiment_name param value" lines, several
    lines per experiment. Values are python literals checked against
    EXPERIMENT_PARAMS.
    """

    if existing_dict is None:
        out_dict = {}
    else:
        out_dict = existing_dict

    expected_words = 3
    expected_format = "experiment_name param value"

    lines_read = 0
    for line in _open_key(fname):
        if skip_line(line, expected_words=expected_words, delim=delim,
                     expected_format=expected_format, maxsplit=2):
            continue

        this_name, this_param, this_value = parse_one_line(line, delim=delim, maxsplit=2)

        if this_name not in out_dict:
            out_dict[this_name] = {}

        if this_param not in EXPERIMENT_PARAMS:
            logger.error('Got an unexpected parameter key. Line is:')
            logger.error(line)
            continue

        try:
            this_value = ast.literal_eval(this_value)
        except (ValueError, SyntaxError):
            logger.error("Could not parse the parameter value. Line is: ")
            logger.error(line)
            continue

        expected = EXPERIMENT_PARAMS[this_param]
        if isinstance(expected, list) and isinstance(this_value, tuple):
            this_value = list(this_value)
        if type(this_value) != type(expected):
            logger.error('Got an unexpected parameter type for parameter ' + this_param +
                         '. Line is:')
            logger.error(line)
            continue

        if this_param == 'expect':
            this_value = this_value.upper()
            if this_value not in VALID_EXPECT:
                logger.error('Expectation must be one of ' + str(VALID_EXPECT) + '. Line is:')
                logger.error(line)
                continue

        if this_param in out_dict[this_name]:
            logger.debug("Parameter " + this_param + " repeats for " + this_name +
                         ". Using the latest value.")

        out_dict[this_name][this_param] = this_value
        lines_read += 1

    logger.info("Read " + str(lines_read) + " lines into the experiment dictionary.")

    return out_dict


def complete_experiment(params):
    """
    Fill missing parameters with defaults and check the required ones.
    """
    out = dict(EXPERIMENT_PARAMS)
    out.update(params)
    for required in ['sentence', 'family', 'n_list', 'epsilon_list']:
        if not out[required]:
            raise ArgumentError('Experiment needs a value for ' + required)
    if out['repeats'] < 1:
        out['repeats'] = 1
    return out
