# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''The restart harness.  Each restart trains one learner of each mode on the
same shuffled train split, measuring accuracy on the fixed test split as it
goes.  The restarts are then aggregated into mean curves with bootstrap
confidence intervals:

    accuracy_base     accuracy of the base learners
    accuracy_overhyp  accuracy of the overhypothesis learners
    gap               paired difference, overhyp minus base
    belief            the overhypothesis learners' belief that a modifier
                      denotes a color
'''

import random
import logging
from collections import namedtuple
from multiprocessing import Pool
import numpy as np
from ccgwl.config import ConfigError, Mode
from ccgwl.scene import generate_dataset
from ccgwl.overhypothesis import PropertyOntology
from ccgwl.learner import (LearnerState, observe, predict_with,
                           probe_novel_word, FRAMES)

__all__ = [
        'CurvePoint', 'RunRecord', 'ExperimentResult', 'AccuracyMonitor',
        'online_accuracy', 'checkpoints', 'restart_seed', 'run_restart',
        'run_experiment', 'bootstrap_curve', 'dataset_for', 'CURVES',
    ]

logger = logging.getLogger(__name__)

CURVES = ('accuracy_base', 'accuracy_overhyp', 'gap', 'belief')

class CurvePoint(namedtuple('CurvePoint', 'trial mean ci_low ci_high')):

    r'''One point of an aggregated curve: the mean over restarts after a given
    number of training trials, and its bootstrap 95% confidence interval.
    '''

    __slots__ = ()

    def as_row(self):
        return (self.trial, '%.6f' % self.mean, '%.6f' % self.ci_low,
                '%.6f' % self.ci_high)

def online_accuracy(state, test):
    r'''Return the fraction of test trials whose referent the learner
    predicts.  The learner is not changed.

        >>> from ccgwl.config import LearnerConfig, DatasetConfig
        >>> from ccgwl.learner import oracle_lexicon
        >>> config = DatasetConfig(colors=3, shapes=3, materials=2, sizes=2,
        ...                        train=0, test=20)
        >>> d = generate_dataset(random.Random(1), config)
        >>> ont = PropertyOntology(d.inventory)
        >>> online_accuracy(LearnerState(LearnerConfig(), ont), d.test)
        0.0
        >>> online_accuracy(LearnerState(LearnerConfig(), ont,
        ...                              lexicon=oracle_lexicon(ont)), d.test)
        1.0
        >>> online_accuracy(LearnerState(LearnerConfig(), ont), [])
        Traceback (most recent call last):
        ccgwl.config.ConfigError: empty test set
    '''
    return AccuracyMonitor(test)(state.lexicon)

class AccuracyMonitor(object):

    r'''Measures accuracy on a fixed test set, repeatedly, against one
    lexicon as it learns.  A test trial's prediction depends only on the
    entries of its words, so it is recomputed only when one of those words
    has changed since it was last computed.
    '''

    def __init__(self, test):
        self.test = list(test)
        if not self.test:
            raise ConfigError('empty test set')
        self._cache = [None] * len(self.test)
        self.hits = 0

    def predictions(self, lexicon):
        r'''Return the predicted referent (or None) of every test trial.'''
        result = []
        for i, trial in enumerate(self.test):
            key = tuple(lexicon.revision(w) for w in trial.utterance)
            cached = self._cache[i]
            if cached is not None and cached[0] == key:
                self.hits += 1
                result.append(cached[1])
                continue
            predicted = predict_with(lexicon, trial.utterance, trial.scene)
            self._cache[i] = (key, predicted)
            result.append(predicted)
        return result

    def __call__(self, lexicon):
        correct = sum(1 for trial, p in zip(self.test,
                                            self.predictions(lexicon))
                      if p == trial.referent)
        return correct / len(self.test)

def checkpoints(count, cadence):
    r'''Return the trial counts after which accuracy is measured: before any
    training, after every cadence'th trial, and after the last.

        >>> checkpoints(5, 1)
        [0, 1, 2, 3, 4, 5]
        >>> checkpoints(7, 3)
        [0, 3, 6, 7]
        >>> checkpoints(0, 2)
        [0]
    '''
    ts = list(range(0, count + 1, cadence))
    if ts[-1] != count:
        ts.append(count)
    return ts

def restart_seed(master, restart):
    r'''Return the seed of one restart.  Both modes share it, so paired
    restarts see the same train order.

        >>> restart_seed(0, 3) == restart_seed(0, 3) != restart_seed(0, 4)
        True
    '''
    return random.Random('%d/restart/%d' % (master, restart)).getrandbits(32)

class RunRecord(object):

    r'''The measurements of one learner over one restart.'''

    def __init__(self, mode, restart, seed, trials, accuracy, belief, probes,
                 lexicon_size, skipped):
        self.mode = mode
        self.restart = restart
        self.seed = seed
        self.trials = trials
        self.accuracy = accuracy
        self.belief = belief
        self.probes = probes
        self.lexicon_size = lexicon_size
        self.skipped = skipped

    def __repr__(self):
        return '<%s %s restart=%d final=%.3f>' % (self.__class__.__name__,
                self.mode, self.restart, self.accuracy[-1])

def run_restart(config, dataset, mode, restart):
    r'''Train one learner on the dataset's train split, shuffled with the
    restart's seed, and return its RunRecord.

        >>> from ccgwl.config import ExperimentConfig, DatasetConfig
        >>> config = ExperimentConfig(restarts=1, cadence=5,
        ...     dataset=DatasetConfig(colors=3, shapes=3, materials=3, sizes=3,
        ...                           train=12, test=10))
        >>> d = dataset_for(config)
        >>> r = run_restart(config, d, Mode.OVERHYPOTHESIS, 0)
        >>> r.trials, r.accuracy[0], r.belief[0]
        ([0, 5, 10, 12], 0.0, 0.5)
        >>> all(0.0 <= a <= 1.0 for a in r.accuracy)
        True
        >>> again = run_restart(config, d, Mode.OVERHYPOTHESIS, 0)
        >>> again.accuracy == r.accuracy and again.belief == r.belief
        True
    '''
    seed = restart_seed(config.seed, restart)
    order = list(dataset.train)
    random.Random('%d/shuffle' % seed).shuffle(order)
    state = LearnerState(config.learner.replace(mode=mode, seed=seed),
                         PropertyOntology(dataset.inventory))
    monitor = AccuracyMonitor(dataset.test)
    marks = set(checkpoints(len(order), config.cadence))
    trials = [0]
    accuracy = [monitor(state.lexicon)]
    belief = [state.belief()]
    skipped = 0
    for t, trial in enumerate(order, 1):
        outcome = observe(trial, state)
        skipped += outcome.skipped
        if t in marks:
            trials.append(t)
            accuracy.append(monitor(state.lexicon))
            belief.append(outcome.belief)
    probes = dict((frame, probe_novel_word(frame, state)) for frame in FRAMES)
    logger.info('restart=%d mode=%s seed=%d final_accuracy=%.4f lexicon=%d '
                'skipped=%d cache_hits=%d', restart, mode, seed, accuracy[-1],
                len(state.lexicon), skipped, monitor.hits)
    return RunRecord(mode, restart, seed, trials, accuracy, belief, probes,
                     len(state.lexicon), skipped)

def _run(args):
    return run_restart(*args)

def bootstrap_curve(trials, matrix, resamples, seed):
    r'''Aggregate a restarts by checkpoints matrix into CurvePoints.  The
    confidence interval is the 2.5 and 97.5 percentiles of the means of
    restarts resampled with replacement.

        >>> m = np.array([[0.0, 0.5, 1.0]])
        >>> [tuple(p) for p in bootstrap_curve([0, 1, 2], m, 100, 0)]
        [(0, 0.0, 0.0, 0.0), (1, 0.5, 0.5, 0.5), (2, 1.0, 1.0, 1.0)]
        >>> m = np.array([[0.0, 1.0], [0.5, 1.0], [1.0, 1.0]])
        >>> p = bootstrap_curve([0, 1], m, 2000, 0)
        >>> p[0].ci_low <= p[0].mean <= p[0].ci_high, p[0].ci_low < p[0].ci_high
        (True, True)
        >>> p[1].ci_low == p[1].mean == p[1].ci_high == 1.0
        True
    '''
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    mean = matrix.mean(axis=0)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n, np.full(n, 1.0 / n), size=resamples)
    means = counts @ matrix / n
    low, high = np.percentile(means, [2.5, 97.5], axis=0)
    low = np.minimum(low, mean)
    high = np.maximum(high, mean)
    return [CurvePoint(t, float(m), float(lo), float(hi))
            for t, m, lo, hi in zip(trials, mean, low, high)]

class ExperimentResult(object):

    r'''The run records of both modes and the curves aggregated from them.'''

    def __init__(self, config, dataset, records, curves):
        self.config = config
        self.dataset = dataset
        self.records = records
        self.curves = curves

    def runs(self, mode):
        return [r for r in self.records if r.mode is mode]

    def peak_gap(self, within=None):
        r'''Return the (trial, gap) point of largest mean gap, considering
        only trials up to 'within' if given.
        '''
        points = [p for p in self.curves['gap']
                  if within is None or p.trial <= within]
        best = max(points, key=lambda p: p.mean)
        return best.trial, best.mean

    def probe_rate(self, frame, winner, loser):
        r'''Return the fraction of overhypothesis restarts whose probe of the
        frame gives 'winner' more probability than 'loser'.
        '''
        runs = self.runs(Mode.OVERHYPOTHESIS)
        return sum(1 for r in runs
                   if r.probes[frame][winner] > r.probes[frame][loser]) / len(runs)

    def summary(self):
        r'''Return an ordered list of (key, value) pairs.'''
        peak_trial, peak = self.peak_gap()
        early_trial, early = self.peak_gap(within=100)
        final = dict((c, self.curves[c][-1].mean) for c in CURVES)
        return [
            ('restarts', self.config.restarts),
            ('train', len(self.dataset.train)),
            ('test', len(self.dataset.test)),
            ('seed', self.config.seed),
            ('final_accuracy_base', '%.6f' % final['accuracy_base']),
            ('final_accuracy_overhyp', '%.6f' % final['accuracy_overhyp']),
            ('final_gap', '%.6f' % final['gap']),
            ('final_belief', '%.6f' % final['belief']),
            ('peak_gap', '%.6f' % peak),
            ('peak_gap_trial', peak_trial),
            ('peak_gap_first_100', '%.6f' % early),
            ('peak_gap_first_100_trial', early_trial),
            ('probe_modifier_color', '%.4f' %
                    self.probe_rate('modifier', 'color', 'shape')),
            ('probe_noun_shape', '%.4f' %
                    self.probe_rate('noun', 'shape', 'color')),
            ('mean_lexicon_size_overhyp', '%.2f' % np.mean(
                    [r.lexicon_size for r in self.runs(Mode.OVERHYPOTHESIS)])),
        ]

def dataset_for(config):
    r'''Generate the dataset an experiment configuration describes.'''
    return generate_dataset(random.Random(config.dataset.seed), config.dataset)

def run_experiment(config, dataset=None):
    r'''Run every restart of both modes and aggregate the curves.  With jobs
    greater than one, restarts run in a pool of worker processes; the result
    does not depend on the number of jobs.

        >>> from ccgwl.config import ExperimentConfig, DatasetConfig
        >>> config = ExperimentConfig(restarts=2, bootstrap=200, cadence=4,
        ...     dataset=DatasetConfig(colors=3, shapes=3, materials=3, sizes=3,
        ...                           train=8, test=6))
        >>> result = run_experiment(config)
        >>> [p.trial for p in result.curves['gap']]
        [0, 4, 8]
        >>> result.curves['belief'][0].mean
        0.5
        >>> all(p.ci_low <= p.mean <= p.ci_high for c in CURVES
        ...     for p in result.curves[c])
        True
        >>> base = [r.accuracy for r in result.runs(Mode.BASE)]
        >>> over = [r.accuracy for r in result.runs(Mode.OVERHYPOTHESIS)]
        >>> gap = np.mean(np.array(over) - np.array(base), axis=0)
        >>> np.allclose([p.mean for p in result.curves['gap']], gap)
        True
    '''
    if dataset is None:
        dataset = dataset_for(config)
    if not dataset.test:
        raise ConfigError('empty test set')
    tasks = [(config, dataset, mode, r) for r in range(config.restarts)
             for mode in (Mode.BASE, Mode.OVERHYPOTHESIS)]
    logger.info('experiment restarts=%d train=%d test=%d jobs=%d',
                config.restarts, len(dataset.train), len(dataset.test),
                config.jobs)
    if config.jobs > 1:
        with Pool(processes=config.jobs) as pool:
            records = pool.map(_run, tasks)
    else:
        records = [_run(task) for task in tasks]
    base = [r for r in records if r.mode is Mode.BASE]
    over = [r for r in records if r.mode is Mode.OVERHYPOTHESIS]
    trials = base[0].trials
    acc_base = np.array([r.accuracy for r in base])
    acc_over = np.array([r.accuracy for r in over])
    matrices = {
        'accuracy_base': acc_base,
        'accuracy_overhyp': acc_over,
        'gap': acc_over - acc_base,
        'belief': np.array([r.belief for r in over]),
    }
    curves = {}
    for name in CURVES:
        seed = random.Random('%d/bootstrap/%s' % (config.seed, name)) \
                     .getrandbits(64)
        curves[name] = bootstrap_curve(trials, matrices[name],
                                       config.bootstrap, seed)
    return ExperimentResult(config, dataset, records, curves)
