# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''The online learner.

Each observed trial runs the same four steps:

 1. if the lexicon cannot parse the utterance to the referent, induce
    candidate entries for its words;
 2. give every candidate an initial weight, either drawn at random (the base
    learner) or set from the overhypothesis' predictive distribution (the
    overhypothesis learner);
 3. parse with the candidates added, take the best derivation that denotes
    the referent, and keep the candidate entries it used;
 4. make a margin perceptron update separating derivations that denote the
    referent from those that do not.  Entries added in step 3 keep their
    initial weight through this update.

The two learners differ only in step 2.
'''

import io
import json
import random
import hashlib
import logging
from collections import Counter
import numpy as np
from ccgwl.input import InputError, iloc
from ccgwl.config import (ConfigError, Mode, LearnerConfig, lines, blocks,
                          controls, remove_comments)
from ccgwl.logic import determiner_meaning, noun_meaning, modifier_meaning
from ccgwl.scene import DETERMINER, ATTRIBUTES, validate
from ccgwl.grammar import (NP, NP_NP, Lexicon, LexicalEntry, UnknownWordError,
                           NoParseError, parse_all, best_parse, best_of)
from ccgwl.induction import InductionError, generate_candidates
from ccgwl.overhypothesis import (PropertyOntology, compute_concentrations,
                                  predictive, belief_color_given_modifier)
from ccgwl.output import format_derivation

__all__ = [
        'LearnerState', 'TrialOutcome', 'UpdateReport',
        'bootstrap_lexicon', 'oracle_lexicon',
        'observe', 'perceptron_update', 'predict_referent', 'predict_with',
        'probe_novel_word', 'fresh_word', 'FRAMES',
        'random_initializer', 'prior_initializer', 'INITIALIZERS',
        'save_state', 'load_state', 'trajectory_digest',
    ]

logger = logging.getLogger(__name__)

FRAMES = {'modifier': NP_NP, 'noun': NP}

def bootstrap_lexicon():
    r'''The initial lexicon, holding only the determiner.'''
    return Lexicon([LexicalEntry(DETERMINER, NP_NP, determiner_meaning())])

def oracle_lexicon(ontology, weight=1.0):
    r'''The target lexicon: the determiner, every color as a modifier and
    every shape as a noun.
    '''
    lexicon = bootstrap_lexicon()
    for d in ontology.descriptors():
        if d.type == 'color':
            lexicon.add(LexicalEntry(d.value, NP_NP, modifier_meaning(d),
                                     weight=weight))
        elif d.type == 'shape':
            lexicon.add(LexicalEntry(d.value, NP, noun_meaning(d),
                                     weight=weight))
    return lexicon

class LearnerState(object):

    r'''The learner's lexicon, trial counter, concentration table and random
    streams.  Candidate ordering and base-learner initial weights draw from
    separate streams, so both learners see the same candidate orders.

        >>> from ccgwl.scene import attribute_inventory
        >>> state = LearnerState(LearnerConfig(mode='overhyp'),
        ...                      PropertyOntology(attribute_inventory()))
        >>> len(state.lexicon), state.trial, state.belief()
        (1, 0, 0.5)
    '''

    def __init__(self, config, ontology, lexicon=None, trial=0):
        self.config = config
        self.ontology = ontology
        self.lexicon = bootstrap_lexicon() if lexicon is None else lexicon
        self.trial = trial
        self.fixed_words = (DETERMINER,)
        self.order_rng = random.Random('%d/order/%d' % (config.seed, trial))
        self.init_rng = random.Random('%d/init/%d' % (config.seed, trial))
        self.refresh()

    @property
    def mode(self):
        return self.config.mode

    def refresh(self):
        r'''Recompute the concentration table from the current lexicon.'''
        self.table = compute_concentrations(self.lexicon, self.ontology,
                                            self.config.tau,
                                            self.config.rho_s,
                                            self.config.rho_w)

    def belief(self):
        r'''P(color | modifier).  The target lexicon with every entry at the
        first-trial seed of a quarter already puts it above 0.9:

            >>> from ccgwl.scene import attribute_inventory
            >>> ont = PropertyOntology(attribute_inventory())
            >>> state = LearnerState(LearnerConfig(mode='overhyp'), ont,
            ...                      lexicon=oracle_lexicon(ont, weight=0.25))
            >>> round(state.belief(), 4)
            0.9241
        '''
        return belief_color_given_modifier(self.table)

class UpdateReport(object):

    r'''What a perceptron update did: weight deltas by entry index, and the
    sizes of the correct, incorrect and violating sets.
    '''

    def __init__(self):
        self.delta = {}
        self.good = 0
        self.bad = 0
        self.violations = 0

    @property
    def norm(self):
        return float(np.linalg.norm(list(self.delta.values()))) \
               if self.delta else 0.0

    def __bool__(self):
        return bool(self.delta)

    def __repr__(self):
        return '<%s good=%d bad=%d violations=%d norm=%.4f>' % (
                self.__class__.__name__, self.good, self.bad,
                self.violations, self.norm)

class TrialOutcome(object):

    r'''The result of observing one trial.  'correct' is the prediction made
    before any learning on the trial.
    '''

    def __init__(self, index, trial, predicted):
        self.index = index
        self.trial = trial
        self.predicted = predicted
        self.correct = predicted == trial.referent
        self.skipped = False
        self.induced = {}
        self.winner = None
        self.added = []
        self.update = UpdateReport()
        self.belief = None

    def as_record(self):
        return {
            'trial': self.index,
            'utterance': ' '.join(self.trial.utterance),
            'referent': self.trial.referent,
            'predicted': self.predicted,
            'correct': self.correct,
            'skipped': self.skipped,
            'induced': self.induced,
            'winner': None if self.winner is None else str(self.winner.meaning),
            'added': [str(e) for e in self.added],
            'update_norm': self.update.norm,
            'violations': self.update.violations,
            'belief': self.belief,
        }

def random_initializer(state, pool):
    r'''Base learner: weights uniform on [0, epsilon).'''
    epsilon = state.config.epsilon
    return lambda candidate: state.init_rng.uniform(0.0, epsilon)

def prior_initializer(state, pool):
    r'''Overhypothesis learner: kappa times the predictive probability of the
    candidate's property given its category and word, conditioned on the
    property values on offer for that word and category in the pool.  Only
    the referent's values are ever on offer, so the seeds of one word and
    category sum to kappa.

    On the first trial every type is equally likely, so each of the four
    values of the referent gets a quarter:

        >>> from ccgwl.scene import Scene, SceneObject
        >>> ont = PropertyOntology({'color': ('red', 'blue'), 'shape': ('cube', 'sphere'),
        ...                         'material': ('wax', 'clay'), 'size': ('big', 'small')})
        >>> state = LearnerState(LearnerConfig(mode='overhyp'), ont)
        >>> scene = Scene([SceneObject(0, 'red', 'cube', 'wax', 'big'),
        ...                SceneObject(1, 'blue', 'sphere', 'wax', 'big')])
        >>> found = generate_candidates(['the', 'red', 'cube'], 0, scene,
        ...                             state.lexicon, ont)
        >>> pool = [c for cs in found.values() for c in cs]
        >>> len(pool)
        8
        >>> seed = prior_initializer(state, pool)
        >>> sorted(set(round(seed(c), 12) for c in pool))
        [0.25]

    Once modifiers are known to be colors, the color reading of a new
    modifier is seeded highest:

        >>> state = LearnerState(LearnerConfig(mode='overhyp'), ont,
        ...                      lexicon=oracle_lexicon(ont, weight=1.0))
        >>> scene = Scene([SceneObject(0, 'red', 'cube', 'wax', 'big'),
        ...                SceneObject(1, 'blue', 'cube', 'clay', 'small')])
        >>> found = generate_candidates(['the', 'dax', 'cube'], 0, scene,
        ...                             state.lexicon, ont)
        >>> seed = prior_initializer(state, found['dax'])
        >>> max(found['dax'], key=seed).property
        PropertyDescriptor(type='color', value='red')
        >>> abs(sum(seed(c) for c in found['dax']) - 1.0) < 1e-9
        True
    '''
    kappa = state.config.kappa
    posteriors = {}
    totals = Counter()
    for c in pool:
        key = (c.category, c.word)
        if key not in posteriors:
            posteriors[key] = predictive(c.category, c.word, state.table,
                                         state.ontology)
        totals[key] += posteriors[key].probability(c.property.type,
                                                   c.property.value)
    def weight(candidate):
        key = (candidate.category, candidate.word)
        if key not in posteriors:
            posteriors[key] = predictive(candidate.category, candidate.word,
                                         state.table, state.ontology)
        d = candidate.property
        p = posteriors[key].probability(d.type, d.value)
        return kappa * p / totals[key] if totals[key] > 0 else kappa * p
    return weight

INITIALIZERS = {
    Mode.BASE: random_initializer,
    Mode.OVERHYPOTHESIS: prior_initializer,
}

def predict_with(lexicon, tokens, scene):
    r'''Return the referent id the best parse picks out, or None if there is
    no parse or its denotation is not a single object.
    '''
    try:
        derivation = best_parse(tokens, lexicon)
    except (UnknownWordError, NoParseError):
        return None
    denotation = validate(derivation.meaning, scene)
    if len(denotation) != 1:
        return None
    return next(iter(denotation))

def predict_referent(tokens, scene, state):
    r'''Predict the referent of an utterance without learning.

        >>> from ccgwl.scene import Scene, SceneObject
        >>> ont = PropertyOntology({'color': ('red', 'blue'), 'shape': ('cube', 'sphere')})
        >>> state = LearnerState(LearnerConfig(), ont, lexicon=oracle_lexicon(ont))
        >>> scene = Scene([SceneObject(0, 'red', 'sphere', 'wax', 'big'),
        ...                SceneObject(1, 'blue', 'sphere', 'wax', 'big')])
        >>> predict_referent(['the', 'blue', 'sphere'], scene, state)
        1
        >>> predict_referent(['the', 'blue', 'dax'], scene, state) is None
        True
        >>> predict_referent(['the', 'sphere'], scene, state) is None
        True
    '''
    return predict_with(state.lexicon, tokens, scene)

def perceptron_update(tokens, referent, scene, lexicon, margin=1.0,
                      frozen=()):
    r'''Separate derivations denoting exactly the referent from the others.
    Every pair (g, b) of a correct and an incorrect derivation whose score
    difference falls short of the margin is a violation; the weights move by
    the mean feature vector of the violating correct derivations minus that
    of the violating incorrect ones.  Entries whose index is in frozen keep
    their weight.

        >>> from ccgwl.logic import PropertyDescriptor as P
        >>> from ccgwl.scene import Scene, SceneObject
        >>> scene = Scene([SceneObject(0, 'red', 'cube', 'wax', 'big'),
        ...                SceneObject(1, 'blue', 'cube', 'wax', 'big')])
        >>> lex = bootstrap_lexicon()
        >>> good = lex.add(LexicalEntry('red', NP_NP, modifier_meaning(P('color', 'red'))))
        >>> bad = lex.add(LexicalEntry('red', NP_NP, modifier_meaning(P('color', 'blue')), 1.0))
        >>> cube = lex.add(LexicalEntry('cube', NP, noun_meaning(P('shape', 'cube'))))
        >>> r = perceptron_update(['the', 'red', 'cube'], 0, scene, lex)
        >>> r.good, r.bad, r.violations, sorted(r.delta.items())
        (1, 1, 1, [(1, 1.0), (2, -1.0)])
        >>> [e.weight for e in lex]
        [0.0, 1.0, 0.0, 0.0]

    The margin difference grew by the squared norm of the feature difference
    (2.0); now it is exactly the margin, so there is nothing left to do:

        >>> perceptron_update(['the', 'red', 'cube'], 0, scene, lex).delta
        {}
    '''
    report = UpdateReport()
    try:
        derivations = parse_all(tokens, lexicon)
    except UnknownWordError:
        return report
    target = frozenset([referent])
    good = []
    bad = []
    for d in derivations:
        (good if validate(d.meaning, scene) == target else bad).append(d)
    report.good = len(good)
    report.bad = len(bad)
    if not good or not bad:
        return report
    good_hit = [False] * len(good)
    bad_hit = [False] * len(bad)
    for i, g in enumerate(good):
        for j, b in enumerate(bad):
            if g.score - b.score < margin:
                good_hit[i] = bad_hit[j] = True
                report.violations += 1
    if not report.violations:
        return report
    gv = [g for g, hit in zip(good, good_hit) if hit]
    bv = [b for b, hit in zip(bad, bad_hit) if hit]
    plus = Counter()
    minus = Counter()
    for g in gv:
        plus.update(g.features())
    for b in bv:
        minus.update(b.features())
    for index in sorted(set(plus) | set(minus)):
        delta = plus[index] / len(gv) - minus[index] / len(bv)
        if delta != 0.0 and index not in frozen:
            lexicon.adjust(index, delta)
            report.delta[index] = delta
    return report

def observe(trial, state, initializer=None):
    r'''Learn from one trial and return its TrialOutcome.  The initializer
    defaults to the one for the learner's mode.

        >>> from ccgwl.scene import Scene, SceneObject, ReferenceTrial
        >>> ont = PropertyOntology({'color': ('red', 'blue'), 'shape': ('cube', 'sphere'),
        ...                         'material': ('wax',), 'size': ('big',)})
        >>> state = LearnerState(LearnerConfig(mode='overhyp'), ont)
        >>> scene = Scene([SceneObject(0, 'red', 'sphere', 'wax', 'big'),
        ...                SceneObject(1, 'blue', 'sphere', 'wax', 'big'),
        ...                SceneObject(2, 'blue', 'cube', 'wax', 'big')])
        >>> out = observe(ReferenceTrial(scene, ['the', 'blue', 'sphere'], 1), state)
        >>> out.correct, out.skipped, sorted(out.induced)
        (False, False, ['blue', 'sphere'])
        >>> [e.word for e in out.added]
        ['blue', 'sphere']
        >>> predict_referent(['the', 'blue', 'sphere'], scene, state)
        1
        >>> sorted(validate(out.winner.meaning, scene))
        [1]

    A trial the lexicon already handles adds nothing:

        >>> again = observe(ReferenceTrial(scene, ['the', 'blue', 'sphere'], 1), state)
        >>> again.correct, again.induced, again.added
        (True, {}, [])

    Entries added on a trial keep their seeded weight through that trial's
    update, so refuting a size reading lowers the size concentration even
    when its replacement is another size:

        >>> from ccgwl.logic import PropertyDescriptor as P
        >>> ont = PropertyOntology({'color': ('red', 'blue'), 'shape': ('cube',),
        ...                         'material': ('wax',), 'size': ('big', 'small')})
        >>> lex = bootstrap_lexicon()
        >>> big = lex.add(LexicalEntry('red', NP_NP, modifier_meaning(P('size', 'big')), 0.25))
        >>> cube = lex.add(LexicalEntry('cube', NP, noun_meaning(P('shape', 'cube')), 0.25))
        >>> state = LearnerState(LearnerConfig(mode='overhyp'), ont, lexicon=lex)
        >>> round(state.table.alpha_s_given_t(NP_NP, 'size'), 4)
        0.5622
        >>> scene = Scene([SceneObject(0, 'red', 'cube', 'wax', 'small'),
        ...                SceneObject(1, 'blue', 'cube', 'wax', 'big')])
        >>> def prefer_small(state, pool):
        ...     return lambda c: 0.25 if (c.word, c.property.value) == ('red', 'small') else 0.0
        >>> out = observe(ReferenceTrial(scene, ['the', 'red', 'cube'], 0), state,
        ...               prefer_small)
        >>> [str(e.meaning) for e in out.added]
        ['lambda p. lambda x. and(p(x),small(x))']
        >>> out.update.delta
        {1: -1.0}
        >>> [e.weight for e in state.lexicon]
        [0.0, -0.75, 0.25, 0.25]
        >>> round(state.table.alpha_s_given_t(NP_NP, 'size'), 4)
        0.3775
    '''
    tokens = trial.utterance
    scene = trial.scene
    target = frozenset([trial.referent])
    outcome = TrialOutcome(state.trial, trial, predict_referent(tokens, scene,
                                                                state))
    try:
        candidates = generate_candidates(tokens, trial.referent, scene,
                                         state.lexicon, state.ontology,
                                         fixed=state.fixed_words)
    except InductionError as e:
        logger.info('trial=%d skipped: %s', state.trial, e)
        outcome.skipped = True
        outcome.belief = state.belief()
        state.trial += 1
        return outcome
    if candidates:
        if initializer is None:
            initializer = INITIALIZERS[state.mode]
        pool = [c for token in candidates for c in candidates[token]]
        state.order_rng.shuffle(pool)
        seed = initializer(state, pool)
        augmented = state.lexicon.copy()
        proposed = set()
        for c in pool:
            proposed.add(augmented.add(c.lexical_entry(weight=seed(c))).index)
        valid = [d for d in parse_all(tokens, augmented)
                 if validate(d.meaning, scene) == target]
        assert valid, 'surviving candidates must yield a valid derivation'
        winner = best_of(valid)
        for leaf in winner.leaves:
            if leaf.index in proposed and state.lexicon.find(leaf.key) is None:
                outcome.added.append(state.lexicon.add(leaf.copy()))
        outcome.induced = dict((t, len(cs)) for t, cs in candidates.items())
        outcome.winner = winner
        logger.info('trial=%d utterance=%r candidates=%d winner=%s added=%d',
                    state.trial, ' '.join(tokens), len(pool), winner.meaning,
                    len(outcome.added))
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug('winning derivation:\n%s', format_derivation(winner))
    frozen = [e.index for e in outcome.added]
    outcome.update = perceptron_update(tokens, trial.referent, scene,
                                       state.lexicon, state.config.margin,
                                       frozen)
    state.refresh()
    outcome.belief = state.belief()
    state.trial += 1
    return outcome

def fresh_word(lexicon, stem='dax'):
    r'''Return a word the lexicon has no entry for.'''
    word = stem
    n = 1
    while word in lexicon:
        word = '%s%d' % (stem, n)
        n += 1
    return word

def probe_novel_word(frame, state):
    r'''Return the distribution over property types that the learner
    assigns a novel word heard in a modifier frame ("a dax one") or a noun
    frame ("a dax").  The base learner has no overhypothesis to consult and
    answers uniformly.

        >>> ont = PropertyOntology({'color': ('red', 'blue'), 'shape': ('cube', 'sphere')})
        >>> state = LearnerState(LearnerConfig(mode='overhyp'), ont)
        >>> sorted((t, round(p, 9)) for t, p in probe_novel_word('modifier', state).items())
        [('color', 0.5), ('shape', 0.5)]
        >>> trained = LearnerState(LearnerConfig(mode='overhyp'), ont,
        ...                        lexicon=oracle_lexicon(ont, weight=2.0))
        >>> p = probe_novel_word('modifier', trained)
        >>> p['color'] > p['shape']
        True
        >>> p = probe_novel_word('noun', trained)
        >>> p['shape'] > p['color']
        True
        >>> probe_novel_word('noun', LearnerState(LearnerConfig(), ont))
        {'color': 0.5, 'shape': 0.5}
        >>> probe_novel_word('verb', state)
        Traceback (most recent call last):
        ccgwl.config.ConfigError: unknown frame 'verb' (expecting modifier or noun)
    '''
    try:
        category = FRAMES[frame]
    except KeyError:
        raise ConfigError('unknown frame %r (expecting modifier or noun)' %
                          frame)
    types = state.ontology.types
    if state.mode is Mode.BASE:
        return dict((t, 1.0 / len(types)) for t in types)
    word = fresh_word(state.lexicon)
    return predictive(category, word, state.table,
                      state.ontology).type_marginal()

STATE_FORMAT = 'ccgwl-state 1'

def save_state(state, f):
    r'''Write a learner state: a block of control lines holding the settings,
    trial counter and ontology, a blank line, then the lexicon records.

        >>> ont = PropertyOntology({'color': ('red', 'blue'), 'shape': ('cube',),
        ...                         'material': ('wax',), 'size': ('big',)})
        >>> state = LearnerState(LearnerConfig(mode='overhyp', tau=0.5), ont,
        ...                      lexicon=oracle_lexicon(ont, weight=0.1), trial=7)
        >>> f = io.StringIO()
        >>> save_state(state, f)
        >>> again = load_state(io.StringIO(f.getvalue()))
        >>> again.config == state.config, again.trial, again.ontology == ont
        (True, 7, True)
        >>> [e.weight for e in again.lexicon] == [e.weight for e in state.lexicon]
        True
    '''
    f.write('%%format %s\n' % STATE_FORMAT)
    for name, _, _ in LearnerConfig.fields:
        f.write('%%%s %s\n' % (name, getattr(state.config, name)))
    f.write('%%trial %d\n' % state.trial)
    for t in state.ontology.types:
        f.write('%%values %s %s\n' % (t, ' '.join(state.ontology.values_of[t])))
    f.write('\n')
    state.lexicon.dump(f)

def load_state(source, path=None):
    r'''Read a learner state written by save_state().'''
    header = None
    body = []
    for block in blocks(remove_comments(lines(source, path=path))):
        if header is None:
            header = block
        else:
            body.extend(block)
    if header is None:
        raise InputError('empty state file', loc=iloc(path=path))
    settings = {}
    values_of = {}
    trial = []
    def setting(name):
        def store(value):
            settings[name] = str(value)
        return store
    def check_format(value):
        if str(value).strip() != STATE_FORMAT:
            raise InputError('unsupported state format %r' % str(value),
                             char=value)
    def add_values(text):
        spl = text.split()
        values_of[str(spl[0])] = tuple(str(v) for v in spl[1:])
    dispatch = dict((name, setting(name)) for name, _, _ in LearnerConfig.fields)
    dispatch['format'] = check_format
    dispatch['trial'] = lambda text: trial.append(int(text))
    dispatch['values'] = add_values
    controls(header, dispatch)
    config = LearnerConfig(**settings)
    ontology = PropertyOntology(dict((t, values_of[t]) for t in ATTRIBUTES
                                     if t in values_of))
    lexicon = Lexicon.parse(body, ontology.value_types())
    return LearnerState(config, ontology, lexicon=lexicon,
                        trial=trial[-1] if trial else 0)

def trajectory_digest(outcomes, lexicon):
    r'''Return a hex digest of a sequence of trial outcomes and the final
    lexicon, for comparing runs.

    Given the same initializer, the two modes make identical transitions,
    and a replay reproduces a run exactly:

        >>> from ccgwl.config import DatasetConfig
        >>> from ccgwl.scene import generate_dataset
        >>> d = generate_dataset(random.Random(2), DatasetConfig(
        ...         colors=3, shapes=3, materials=3, sizes=3, train=15, test=0))
        >>> ont = PropertyOntology(d.inventory)
        >>> def run(mode, initializer=None):
        ...     state = LearnerState(LearnerConfig(mode=mode, seed=4), ont)
        ...     outcomes = [observe(t, state, initializer) for t in d.train]
        ...     return trajectory_digest(outcomes, state.lexicon)
        >>> run('base', random_initializer) == run('overhyp', random_initializer)
        True
        >>> run('overhyp', prior_initializer) == run('base', prior_initializer)
        True
        >>> run('overhyp') == run('overhyp')
        True
    '''
    h = hashlib.sha256()
    for outcome in outcomes:
        h.update(json.dumps(outcome.as_record(), sort_keys=True).encode('utf8'))
    buf = io.StringIO()
    lexicon.dump(buf)
    h.update(buf.getvalue().encode('utf8'))
    return h.hexdigest()
