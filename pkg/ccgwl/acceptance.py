# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Acceptance checks.  Each check returns a CheckResult; run_checks() runs
them all.  The property checks (parser, distribution, concentrations,
perceptron) are cheap; the experiment checks train full restart pools and
take minutes at the default configuration.
'''

import io
import math
import time
import random
import logging
import itertools
from collections import namedtuple, Counter
import numpy as np
from ccgwl.config import ConfigError, ExperimentConfig
from ccgwl.logic import (PropertyDescriptor, noun_meaning, modifier_meaning,
                         determiner_meaning)
from ccgwl.scene import Scene, SceneObject
from ccgwl.grammar import (NP, NP_NP, Lexicon, LexicalEntry, LexiconError,
                           CompositionError, forward_apply, parse_all,
                           parse_distribution)
from ccgwl.overhypothesis import PropertyOntology, compute_concentrations
from ccgwl.learner import bootstrap_lexicon, perceptron_update
from ccgwl.experiment import run_experiment, CURVES
from ccgwl.reports.curves import dump_curve

__all__ = [
        'CheckResult', 'brute_force_parses',
        'check_parser', 'check_distribution', 'check_belief', 'check_gap',
        'check_probes', 'check_concentrations', 'check_perceptron',
        'check_determinism', 'run_checks', 'CHECKS',
    ]

logger = logging.getLogger(__name__)

class CheckResult(namedtuple('CheckResult', 'name passed detail')):

    __slots__ = ()

    def __str__(self):
        return '%s %s %s' % ('PASS' if self.passed else 'FAIL', self.name,
                             self.detail)

_Item = namedtuple('_Item', 'category meaning')

def _combinations(entries, cache):
    r'''Every (category, meaning) that some bracketing of the entries reduces
    to.  Results are cached by the tuple of entry indices, so spans shared
    between entry choices and utterances are reduced once per lexicon.
    '''
    key = tuple(e.index for e in entries)
    try:
        return cache[key]
    except KeyError:
        pass
    if len(entries) == 1:
        results = [_Item(entries[0].category, entries[0].meaning)]
    else:
        results = []
        for k in range(1, len(entries)):
            for left in _combinations(entries[:k], cache):
                for right in _combinations(entries[k:], cache):
                    try:
                        r = forward_apply(left, right)
                    except CompositionError:
                        continue
                    if r is not None:
                        results.append(_Item(*r))
    cache[key] = results
    return results

def brute_force_parses(tokens, lexicon, cache=None):
    r'''Enumerate every choice of entries for the tokens and every bracketing
    of each choice, independently of the chart parser.  Return a Counter of
    (leaf indices, root meaning) over the NP results.  Pass the same cache
    for every utterance over one lexicon.

        >>> lex = Lexicon([LexicalEntry('the', NP_NP, determiner_meaning()),
        ...     LexicalEntry('red', NP_NP, modifier_meaning(PropertyDescriptor('color', 'red'))),
        ...     LexicalEntry('red', NP, noun_meaning(PropertyDescriptor('color', 'red')))])
        >>> sorted(brute_force_parses(['the', 'red', 'red'], lex).items())
        [(((0, 1, 2), 'iota(and(red(x),red(x)))'), 1)]

    A second pass over the same lexicon reduces nothing new and finds the
    same parses:

        >>> cache = {}
        >>> first = brute_force_parses(['the', 'red', 'red'], lex, cache)
        >>> size = len(cache)
        >>> brute_force_parses(['the', 'red', 'red'], lex, cache) == first
        True
        >>> len(cache) == size
        True
    '''
    if cache is None:
        cache = {}
    found = Counter()
    for choice in itertools.product(*[lexicon.get(t) for t in tokens]):
        for r in _combinations(choice, cache):
            if r.category == NP:
                found[tuple(e.index for e in choice), str(r.meaning)] += 1
    return found

def _random_entry(rng, word, descriptors):
    kind = rng.randrange(3)
    weight = rng.uniform(-2.0, 2.0)
    if kind == 0:
        return LexicalEntry(word, NP_NP, determiner_meaning(), weight)
    d = rng.choice(descriptors)
    if kind == 1:
        return LexicalEntry(word, NP, noun_meaning(d), weight)
    return LexicalEntry(word, NP_NP, modifier_meaning(d), weight)

def _random_lexicon(rng, words, descriptors, per_word=3):
    lexicon = Lexicon()
    for word in words:
        for i in range(rng.randint(1, per_word)):
            try:
                lexicon.add(_random_entry(rng, word, descriptors))
            except LexiconError:
                pass
    return lexicon

DESCRIPTORS = [PropertyDescriptor('color', 'red'),
               PropertyDescriptor('color', 'blue'),
               PropertyDescriptor('shape', 'cube'),
               PropertyDescriptor('shape', 'sphere')]

def check_parser(rng, lexicons=1000, max_length=4):
    r'''The chart parser finds exactly the derivations that exhaustive
    enumeration of entries and bracketings finds.  The detail reports the
    time spent in the chart parser and in the enumeration separately.

        >>> check_parser(random.Random(0), lexicons=10).passed
        True
    '''
    words = ('a', 'b', 'c')
    utterances = [u for n in range(1, max_length + 1)
                  for u in itertools.product(words, repeat=n)]
    chart_time = oracle_time = 0.0
    for i in range(lexicons):
        lexicon = _random_lexicon(rng, words, DESCRIPTORS)
        cache = {}
        for u in utterances:
            start = time.perf_counter()
            chart = Counter((d.order_key, str(d.meaning))
                            for d in parse_all(u, lexicon))
            middle = time.perf_counter()
            found = brute_force_parses(u, lexicon, cache)
            chart_time += middle - start
            oracle_time += time.perf_counter() - middle
            if chart != found:
                return CheckResult('parser', False, 'lexicon %d utterance %r'
                                   % (i, ' '.join(u)))
    return CheckResult('parser', True, '%d lexicons x %d utterances '
                       'chart %.1fs enumeration %.1fs' %
                       (lexicons, len(utterances), chart_time, oracle_time))

def check_distribution(rng, lexicons=100):
    r'''Derivation probabilities sum to one, do not change when a constant
    is added to every weight, and match a hand computation.

        >>> check_distribution(random.Random(0), lexicons=10).passed
        True
    '''
    lex = Lexicon([LexicalEntry('the', NP_NP, determiner_meaning()),
                   LexicalEntry('dax', NP, noun_meaning(DESCRIPTORS[2]), 1.0),
                   LexicalEntry('dax', NP, noun_meaning(DESCRIPTORS[3]), 0.0)])
    probs = [p for d, p in parse_distribution(['the', 'dax'], lex)]
    if abs(probs[0] - 0.7311) > 1e-4 or abs(probs[1] - 0.2689) > 1e-4:
        return CheckResult('distribution', False, 'two-parse case %r' % probs)
    words = ('a', 'b')
    for i in range(lexicons):
        lexicon = _random_lexicon(rng, words, DESCRIPTORS)
        shift = rng.uniform(-5.0, 5.0)
        shifted = lexicon.copy()
        for e in shifted:
            shifted.adjust(e.index, shift)
        for u in itertools.product(words, repeat=3):
            if not parse_all(u, lexicon):
                continue
            p = [x for d, x in parse_distribution(u, lexicon)]
            q = [x for d, x in parse_distribution(u, shifted)]
            if abs(sum(p) - 1.0) > 1e-9 or not np.allclose(p, q, atol=1e-9):
                return CheckResult('distribution', False,
                                   'lexicon %d utterance %r' % (i, ' '.join(u)))
    return CheckResult('distribution', True, 'two-parse case %.4f %.4f' %
                       tuple(probs))

def _naive_concentrations(lexicon, ontology, tau):
    alpha_s = {}
    for t in ontology.types:
        raw = {}
        for s in ontology.syntactic:
            total = 0.0
            for e in lexicon:
                if e.property is not None and e.property.type == t and \
                        e.category == s:
                    total += e.weight
            raw[s] = math.exp(total / tau)
        for s in ontology.syntactic:
            alpha_s[s, t] = raw[s] / sum(raw.values())
    words = lexicon.words()
    alpha_w = {}
    for d in ontology.descriptors():
        raw = {}
        for w in words:
            total = 0.0
            for e in lexicon.get(w):
                if e.property == d:
                    total += e.weight
            raw[w] = math.exp(total / tau)
        for w in words:
            alpha_w[w, d.value] = raw[w] / sum(raw.values())
    return alpha_s, alpha_w

def check_concentrations(rng, lexicons=100):
    r'''Concentrations match a direct loop over the lexicon entries.

        >>> check_concentrations(random.Random(0), lexicons=10).passed
        True
    '''
    ontology = PropertyOntology({'color': ('red', 'blue'),
                                 'shape': ('cube', 'sphere')})
    worst = 0.0
    for i in range(lexicons):
        lexicon = _random_lexicon(rng, ('a', 'b', 'c', 'd'), DESCRIPTORS)
        tau = rng.choice((0.5, 1.0, 2.0))
        table = compute_concentrations(lexicon, ontology, tau)
        alpha_s, alpha_w = _naive_concentrations(lexicon, ontology, tau)
        for (s, t), a in alpha_s.items():
            worst = max(worst, abs(table.alpha_s_given_t(s, t) - a))
        for (w, v), a in alpha_w.items():
            worst = max(worst, abs(table.alpha_w_given_v(w, v) - a))
    return CheckResult('concentrations', worst < 1e-12,
                       'max deviation %.3g' % worst)

def check_perceptron(rng, cases=100, margin=1.0):
    r'''A single violating pair's margin grows by exactly the squared norm of
    its feature difference; an update with nothing to do changes nothing.

        >>> check_perceptron(random.Random(0), cases=20).passed
        True
    '''
    scene = Scene([SceneObject(0, 'red', 'cube', 'wax', 'big'),
                   SceneObject(1, 'blue', 'cube', 'wax', 'big')])
    tokens = ['the', 'red', 'cube']
    for i in range(cases):
        lex = bootstrap_lexicon()
        lex.add(LexicalEntry('red', NP_NP, modifier_meaning(DESCRIPTORS[0]),
                             rng.uniform(-2.0, 2.0)))
        lex.add(LexicalEntry('red', NP_NP, modifier_meaning(DESCRIPTORS[1]),
                             rng.uniform(-2.0, 2.0)))
        lex.add(LexicalEntry('cube', NP, noun_meaning(DESCRIPTORS[2]),
                             rng.uniform(-2.0, 2.0)))
        before = lex.weights()
        good, bad = sorted(parse_all(tokens, lex),
                           key=lambda d: d.order_key)
        gap = good.score - bad.score
        phi = good.features()
        phi.subtract(bad.features())
        norm2 = sum(x * x for x in phi.values())
        report = perceptron_update(tokens, 0, scene, lex, margin)
        after = dict((d.order_key, d.current_score())
                     for d in parse_all(tokens, lex))
        new_gap = after[good.order_key] - after[bad.order_key]
        if gap < margin:
            if report.violations != 1 or abs(new_gap - gap - norm2) > 1e-9:
                return CheckResult('perceptron', False,
                                   'case %d: margin %r -> %r' % (i, gap, new_gap))
        elif report or lex.weights() != before:
            return CheckResult('perceptron', False,
                               'case %d: no-op update changed weights' % i)
    return CheckResult('perceptron', True, '%d cases' % cases)

def _smooth(values, window):
    if len(values) < window:
        return np.asarray(values, dtype=float)
    return np.convolve(values, np.ones(window) / window, mode='valid')

def check_belief(result, window=10):
    r'''The mean belief starts at one half, passes 0.9 by trial 50, and never
    falls once smoothed.
    '''
    points = result.curves['belief']
    start = points[0].mean
    by50 = [p.mean for p in points if p.trial <= 50]
    smoothed = _smooth([p.mean for p in points], window)
    monotone = bool(np.all(np.diff(smoothed) >= -1e-12))
    passed = abs(start - 0.5) <= 0.01 and max(by50) > 0.9 and monotone
    return CheckResult('belief', passed, 'start %.4f max_by_50 %.4f '
                       'monotone %s' % (start, max(by50), monotone))

def check_gap(result, within=100, low=0.05, high=0.20):
    r'''The gap peaks early at between five and twenty points, and has
    narrowed by the last trial.
    '''
    trial, peak = result.peak_gap(within=within)
    final = result.curves['gap'][-1].mean
    passed = low <= peak <= high and final < peak
    return CheckResult('gap', passed, 'peak %.4f at %d final %.4f' %
                       (peak, trial, final))

def check_probes(result, rate=0.95):
    r'''Trained learners read a novel modifier as a color and a novel noun
    as a shape.
    '''
    modifier = result.probe_rate('modifier', 'color', 'shape')
    noun = result.probe_rate('noun', 'shape', 'color')
    return CheckResult('probes', modifier >= rate and noun >= rate,
                       'modifier_color %.3f noun_shape %.3f' % (modifier, noun))

def _tables(result):
    tables = []
    for name in CURVES:
        f = io.StringIO()
        dump_curve(result.curves[name], f)
        tables.append(f.getvalue())
    return tables

def check_determinism(config, result=None):
    r'''Two runs of one configuration write identical curve tables.

        >>> from ccgwl.config import DatasetConfig
        >>> config = ExperimentConfig(restarts=2, bootstrap=100,
        ...     dataset=DatasetConfig(colors=3, shapes=3, materials=3, sizes=3,
        ...                           train=6, test=5))
        >>> check_determinism(config).passed
        True
    '''
    if result is None:
        result = run_experiment(config)
    again = run_experiment(config)
    same = _tables(result) == _tables(again)
    return CheckResult('determinism', same, 'curves %s' %
                       ('identical' if same else 'differ'))

CHECKS = ('parser', 'distribution', 'concentrations', 'perceptron', 'belief',
          'gap', 'probes', 'determinism')

def run_checks(config, names=CHECKS, seed=0):
    r'''Run the named checks and return their CheckResults.  The experiment
    checks share one experiment run; the belief and gap checks need at least
    20 and 50 restarts.
    '''
    for name in names:
        if name not in CHECKS:
            raise ConfigError('unknown check %r' % name)
    rng = random.Random('%d/checks' % seed)
    results = []
    simple = {
        'parser': lambda: check_parser(rng),
        'distribution': lambda: check_distribution(rng),
        'concentrations': lambda: check_concentrations(rng),
        'perceptron': lambda: check_perceptron(rng),
    }
    result = None
    for name in names:
        if name in simple:
            r = simple[name]()
        else:
            if result is None:
                result = run_experiment(config)
            if name == 'belief':
                r = check_belief(result)
            elif name == 'gap':
                r = check_gap(result)
            elif name == 'probes':
                r = check_probes(result)
            else:
                r = check_determinism(config, result)
        logger.info('%s', r)
        results.append(r)
    return results
