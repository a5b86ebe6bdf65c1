"""
Batch compilation of the sentences listed in the sentence keys into
template files.

Example:
    from fomodTester import handlerKeys as kh
    from fomodTester import handlerCompile as hc
    this_kh = kh.KeyHandler(master_key='fomod_keys/master_key.txt')
    this_ch = hc.CompileHandler(key_handler=this_kh)
    this_ch.set_sentences(only=['psi'])
    this_ch.loop_compile_sentences()
"""

import logging
import os

from .handlerTemplate import HandlerTemplate
from .hnfCompiler import check_equivalence, compile_hnf, write_templates
from .logicAst import eval_exact, read_hnf_file, read_sentence_file
from .testerLogger import log_banner
from .utilsErrors import ArgumentError, InternalInvariantError
from .utilsKeyReaders import DEFAULT_GUARDS

logger = logging.getLogger(__name__)
logger.setLevel(logging.DEBUG)


def hnf_companion(sentence_file):
    """
    <stem>.hnf.json next to a sentence file <stem>.fo.
    """
    stem = os.path.splitext(sentence_file)[0]
    return stem + '.hnf.json'


def compile_sentence_file(hnf_file, catalog=None, sentence_file=None, certify_max_n=0,
                          guards=None):
    """
    Compile an HNF file. When a sentence file is given the templates are
    checked against direct evaluation on every graph with at most
    certify_max_n vertices; a mismatch raises InternalInvariantError.

    Returns (compiled, catalog).
    """
    if guards is None:
        guards = DEFAULT_GUARDS
    h, catalog = read_hnf_file(hnf_file, catalog=catalog,
                               canonical_cap=guards['canonical_cap'],
                               type_guard=guards['type_guard'])
    compiled = compile_hnf(h, catalog, clause_guard=guards['clause_guard'],
                           tuple_guard=guards['tuple_guard'])
    if sentence_file is not None and certify_max_n > 0:
        sentence = read_sentence_file(sentence_file)
        max_n = min(certify_max_n, guards['eval_cap'])
        logger.info('... certifying against ' + sentence_file + ' up to ' + str(max_n) +
                    ' vertices')
        mismatches = check_equivalence(lambda g: eval_exact(g, sentence, cap=guards['eval_cap']),
                                       compiled, catalog, max_n)
        if mismatches:
            raise InternalInvariantError('Templates from ' + hnf_file + ' disagree with ' +
                                         sentence_file + ' on chv ' +
                                         str(tuple(mismatches[0])))
    return compiled, catalog


class CompileHandler(HandlerTemplate):
    """
    Compiles every selected sentence and writes <name>.templates.json
    under the output root.
    """

    def __init__(
        self,
        key_handler = None,
        dry_run = False,
        certify_max_n = 8,
        ):
        HandlerTemplate.__init__(self, key_handler=key_handler, dry_run=dry_run)
        self._certify_max_n = certify_max_n

    def task_compile_sentence(self, sentence=None, overwrite=True):
        """
        Compile one sentence from the sentence keys.
        """
        if self._kh is None:
            raise ArgumentError('CompileHandler needs a key handler.')
        info = self._kh.get_sentence_info(sentence)
        outfile = self._kh.get_templates_file(sentence)
        if os.path.isfile(outfile) and not overwrite:
            logger.info('... ' + outfile + ' exists, skipping')
            return outfile
        if self._dry_run:
            logger.info('... dry run, would compile ' + sentence + ' to ' + outfile)
            return None
        catalog = self.get_catalog(info['c'], info['d'])
        compiled, _ = compile_sentence_file(self._kh.get_hnf_file(sentence), catalog=catalog,
                                            sentence_file=self._kh.get_sentence_file(sentence),
                                            certify_max_n=self._certify_max_n,
                                            guards=self.get_guards())
        self._kh.make_output_root()
        return write_templates(compiled, outfile)

    def loop_compile_sentences(self, overwrite=True):
        """
        Compile all selected sentences. Returns {sentence: file or None};
        failures are logged and give None.
        """
        log_banner(logger, 'Compiling ' + str(len(self.get_sentences())) + ' sentences')
        results = {}
        for this_sentence in self.looper(do_sentences=True):
            logger.info('Sentence ' + this_sentence)
            try:
                results[this_sentence] = self.task_compile_sentence(this_sentence,
                                                                    overwrite=overwrite)
            except (ArgumentError, InternalInvariantError) as err:
                logger.error('Could not compile ' + this_sentence + ': ' + str(err))
                results[this_sentence] = None
        return results
