# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Command line interface.

    ccgwl [-v|-q] generate --out PATH [--seed N] [--train N] [--test N] ...
    ccgwl [-v|-q] train --dataset PATH [--mode base|overhyp] [--seed N]
                        [--log PATH] [--state PATH] [--config PATH]
    ccgwl [-v|-q] experiment [--config PATH] [--out DIR] [--restarts N]
                             [--jobs K]
    ccgwl [-v|-q] probe --state PATH [--frame modifier|noun]
    ccgwl [-v|-q] check [--config PATH] [--restarts N] [CHECK ...]
    ccgwl [-v|-q] parse --state PATH WORD ...

Each command is a pair of functions: cmd_NAME_getopt(parser) adds the
command's options, and cmd_NAME(options, args) runs it and returns the exit
status.
'''

import io
import sys
import json
import random
import logging
import optparse
from ccgwl import __version__
from ccgwl.input import InputError
from ccgwl.config import (ConfigError, DatasetConfig, Mode, seed_from_environ,
                          load_experiment_config)
from ccgwl.scene import Dataset, generate_dataset
from ccgwl.grammar import GrammarError, parse_distribution
from ccgwl.overhypothesis import PropertyOntology
from ccgwl.learner import (LearnerState, observe, FRAMES, probe_novel_word,
                           save_state, load_state)
from ccgwl.experiment import online_accuracy, run_experiment
from ccgwl.reports import emit_report
from ccgwl.output import format_distribution
from ccgwl.acceptance import CHECKS, run_checks

__all__ = ['main']

logger = logging.getLogger(__name__)

def cmd_generate_getopt(parser):
    defaults = DatasetConfig()
    for name in ('colors', 'shapes', 'materials', 'sizes', 'train', 'test',
                 'seed'):
        parser.add_option('--' + name, action='store', type='int', dest=name,
                          default=getattr(defaults, name),
                          help='%s (default %%default)' % name)
    parser.add_option('--test-known-words-only', action='store_true',
                      dest='known_words_only', default=False,
                      help='draw test trials only from words seen in training')
    parser.add_option('-o', '--out', action='store', type='string',
                      dest='out', metavar='PATH', help='write dataset to PATH')

def cmd_generate(options, args):
    if not options.out:
        raise ConfigError('missing --out')
    config = DatasetConfig(colors=options.colors, shapes=options.shapes,
                           materials=options.materials, sizes=options.sizes,
                           train=options.train, test=options.test,
                           seed=options.seed,
                           known_words_only=options.known_words_only)
    dataset = generate_dataset(random.Random(config.seed), config)
    dataset.save(options.out)
    print('wrote %d train and %d test trials to %s' % (len(dataset.train),
          len(dataset.test), options.out))
    return 0

def cmd_train_getopt(parser):
    parser.add_option('-d', '--dataset', action='store', type='string',
                      dest='dataset', metavar='PATH', help='dataset to train on')
    parser.add_option('-m', '--mode', action='store', type='choice',
                      dest='mode', choices=['base', 'overhyp', 'overhypothesis'],
                      default='overhyp', help='learner (default %default)')
    parser.add_option('-s', '--seed', action='store', type='int', dest='seed',
                      help='learner seed (default: the configured seed)')
    parser.add_option('-c', '--config', action='store', type='string',
                      dest='config', metavar='PATH',
                      help='take learner settings from PATH')
    parser.add_option('-l', '--log', action='store', type='string',
                      dest='log', metavar='PATH',
                      help='write one JSON record per trial to PATH')
    parser.add_option('--state', action='store', type='string',
                      dest='state', metavar='PATH',
                      help='save the trained learner to PATH')

def learner_seed(given, configured, environ=None):
    r'''Return the learner seed for a command: an explicit --seed wins over
    CCGWL_SEED, which wins over the configured seed.

        >>> learner_seed(5, 0, {'CCGWL_SEED': '11'})
        5
        >>> learner_seed(None, 0, {'CCGWL_SEED': '11'})
        11
        >>> learner_seed(None, 3, {})
        3
    '''
    if given is not None:
        return given
    return seed_from_environ(configured, environ)

def cmd_train(options, args):
    if not options.dataset:
        raise ConfigError('missing --dataset')
    config = load_experiment_config(options.config)
    seed = learner_seed(options.seed, config.learner.seed)
    dataset = Dataset.load(options.dataset)
    order = list(dataset.train)
    random.Random('%d/shuffle' % seed).shuffle(order)
    state = LearnerState(config.learner.replace(mode=Mode.parse(options.mode),
                                                seed=seed),
                         PropertyOntology(dataset.inventory))
    log = io.open(options.log, 'w', encoding='utf8') if options.log else None
    try:
        for trial in order:
            outcome = observe(trial, state)
            if log is not None:
                log.write(json.dumps(outcome.as_record(), sort_keys=True)
                          + '\n')
    finally:
        if log is not None:
            log.close()
    if options.state:
        with io.open(options.state, 'w', encoding='utf8') as f:
            save_state(state, f)
    print('trials %d' % state.trial)
    print('lexicon %d' % len(state.lexicon))
    if dataset.test:
        print('accuracy %.4f' % online_accuracy(state, dataset.test))
    print('belief %.4f' % state.belief())
    return 0

def cmd_experiment_getopt(parser):
    parser.add_option('-c', '--config', action='store', type='string',
                      dest='config', metavar='PATH',
                      help='read experiment settings from PATH')
    parser.add_option('-o', '--out', action='store', type='string',
                      dest='out', metavar='DIR', help='write reports to DIR')
    parser.add_option('-r', '--restarts', action='store', type='int',
                      dest='restarts', help='restarts per learner')
    parser.add_option('-j', '--jobs', action='store', type='int',
                      dest='jobs', help='worker processes')

def cmd_experiment(options, args):
    config = load_experiment_config(options.config, restarts=options.restarts,
                                    jobs=options.jobs, out=options.out)
    result = run_experiment(config)
    emit_report(result, config.out)
    for key, value in result.summary():
        print('%s %s' % (key, value))
    return 0

def cmd_probe_getopt(parser):
    parser.add_option('--state', action='store', type='string',
                      dest='state', metavar='PATH', help='saved learner')
    parser.add_option('-f', '--frame', action='store', type='choice',
                      dest='frame', choices=sorted(FRAMES),
                      default='modifier', help='frame (default %default)')

def cmd_probe(options, args):
    if not options.state:
        raise ConfigError('missing --state')
    state = load_state(options.state)
    for t, p in probe_novel_word(options.frame, state).items():
        print('%s %.6f' % (t, p))
    return 0

def cmd_check_getopt(parser):
    parser.add_option('-c', '--config', action='store', type='string',
                      dest='config', metavar='PATH',
                      help='read experiment settings from PATH')
    parser.add_option('-r', '--restarts', action='store', type='int',
                      dest='restarts', help='restarts per learner')
    parser.add_option('-j', '--jobs', action='store', type='int',
                      dest='jobs', help='worker processes')

def cmd_check(options, args):
    config = load_experiment_config(options.config, restarts=options.restarts,
                                    jobs=options.jobs)
    results = run_checks(config, names=args or CHECKS, seed=config.seed)
    for r in results:
        print(r)
    return 0 if all(r.passed for r in results) else 1

def cmd_parse_getopt(parser):
    parser.add_option('--state', action='store', type='string',
                      dest='state', metavar='PATH', help='saved learner')

def cmd_parse(options, args):
    if not options.state:
        raise ConfigError('missing --state')
    if not args:
        raise ConfigError('missing utterance')
    state = load_state(options.state)
    sys.stdout.write(format_distribution(parse_distribution(args,
                                                            state.lexicon)))
    return 0

COMMANDS = {
    'generate': (cmd_generate_getopt, cmd_generate),
    'train': (cmd_train_getopt, cmd_train),
    'experiment': (cmd_experiment_getopt, cmd_experiment),
    'probe': (cmd_probe_getopt, cmd_probe),
    'check': (cmd_check_getopt, cmd_check),
    'parse': (cmd_parse_getopt, cmd_parse),
}

def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = optparse.OptionParser(
            usage='%%prog [options] {%s} [command options]' %
                  '|'.join(sorted(COMMANDS)),
            version='%prog ' + __version__)
    parser.disable_interspersed_args()
    parser.add_option('-v', '--verbose', action='store_true', dest='verbose',
                      default=False, help='log debugging detail')
    parser.add_option('-q', '--quiet', action='store_true', dest='quiet',
                      default=False, help='log warnings only')
    options, args = parser.parse_args(argv)
    if not args or args[0] not in COMMANDS:
        parser.error('expecting a command: %s' % ', '.join(sorted(COMMANDS)))
    level = logging.INFO
    if options.quiet:
        level = logging.WARNING
    elif options.verbose:
        level = logging.DEBUG
    logging.basicConfig(level=level,
                        format='%(name)s: %(levelname)s: %(message)s')
    getopt, command = COMMANDS[args[0]]
    sub = optparse.OptionParser(usage='%%prog %s [options]' % args[0])
    getopt(sub)
    sub_options, sub_args = sub.parse_args(args[1:])
    try:
        return command(sub_options, sub_args)
    except (InputError, GrammarError, OSError) as e:
        print('%s: %s' % (parser.get_prog_name(), e), file=sys.stderr)
        return 1

if __name__ == '__main__':
    sys.exit(main())
