#!/usr/bin/env python
#
# Compile the sentences in fomod_keys/ and run the experiment sweeps.
# Run from the repository root in an environment with fomodTester
# installed.
#
##############################################################################
# Load routines, initialize handlers
##############################################################################

import os

# Location of the master key. Set this to the master key that points
# to all of the keys for your project.

key_file = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'fomod_keys',
                        'master_key.txt')

# Import the logger and initialize the logging. You can change the
# level of message that you want to see by changing "level" here or
# save to a logfile with the keyword.

from fomodTester import testerLogger as tl
tl.setup_logger(level='INFO', logfile=None)

from fomodTester import handlerKeys as kh
from fomodTester import handlerCompile as hc
from fomodTester import handlerExperiment as he

# The KeyHandler reads the master key and the keys it links. The other
# handlers take it and run the actual work.

this_kh = kh.KeyHandler(master_key=key_file)
this_ch = hc.CompileHandler(key_handler=this_kh, certify_max_n=8)
this_eh = he.ExperimentHandler(key_handler=this_kh)

##############################################################################
# Set up what we do this run
##############################################################################

# Called with no arguments every sentence and experiment is used; only=
# and skip= restrict the lists.

this_ch.set_sentences()
# this_ch.set_sentences(only=['psi'])

this_eh.set_experiments()
# this_eh.set_experiments(only=['psi_edges_accept', 'psi_odd_reject'])

do_compile = True
do_experiments = True

##############################################################################
# Step through the run
##############################################################################

# Compile every sentence to <name>.templates.json under output_root,
# certifying it against its FO+MOD source on all small graphs.

if do_compile:
    this_ch.loop_compile_sentences()

# Run the sweeps and write <name>.report.json and <name>.report.txt.

if do_experiments:
    this_eh.loop_experiments()
