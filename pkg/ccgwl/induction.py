# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Lexical induction: propose candidate lexical entries for the words of an
utterance that the current lexicon cannot parse to the referent.

Candidates come from two templates, one per syntactic slot:

    NP    : lambda x. v(x)                       (a noun)
    NP/NP : lambda p. lambda x. and(p(x),v(x))    (a prenominal modifier)

instantiated with every property value v, and then filtered jointly: a
candidate survives only if some complete derivation that uses it denotes
exactly the referent.
'''

import logging
from ccgwl.scene import DETERMINER, validate
from ccgwl.logic import noun_meaning, modifier_meaning
from ccgwl.grammar import NP, NP_NP, LexicalEntry, parse_all

__all__ = [
        'InductionError', 'CandidateEntry', 'TEMPLATES',
        'syntactic_slot', 'generate_candidates',
    ]

logger = logging.getLogger(__name__)

TEMPLATES = ((NP, noun_meaning), (NP_NP, modifier_meaning))

class InductionError(Exception):

    def __init__(self, tokens, msg=None):
        Exception.__init__(self, msg or 'no candidate meanings for %r denote '
                           'the referent' % ' '.join(tokens))
        self.tokens = tuple(tokens)

class CandidateEntry(object):

    r'''A proposed (word, category, meaning) triple with the property value it
    was instantiated with.  Its weight is zero until the learner seeds it.
    '''

    __slots__ = ('word', 'category', 'meaning', 'property')

    def __init__(self, word, category, meaning, property):
        self.word = word
        self.category = category
        self.meaning = meaning
        self.property = property

    @property
    def key(self):
        return (self.word, self.category, self.meaning)

    @property
    def weight(self):
        return 0.0

    def lexical_entry(self, weight=0.0):
        return LexicalEntry(self.word, self.category, self.meaning,
                            weight=weight)

    def __eq__(self, other):
        if not isinstance(other, CandidateEntry):
            return NotImplemented
        return self.key == other.key

    def __ne__(self, other):
        ret = self.__eq__(other)
        return ret if ret is NotImplemented else not ret

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return '<%s := %s : %s>' % (self.word, self.category, self.meaning)

def _derives_np(categories):
    r'''Return true if some choice of one category per position combines into
    NP by forward application.
    '''
    n = len(categories)
    chart = {}
    for i, cats in enumerate(categories):
        chart[i, i + 1] = set(cats)
    for width in range(2, n + 1):
        for i in range(0, n - width + 1):
            j = i + width
            cell = set()
            for k in range(i + 1, j):
                for left in chart[i, k]:
                    if not left.is_slash:
                        continue
                    for right in chart[k, j]:
                        result = left.apply(right)
                        if result is not None:
                            cell.add(result)
            chart[i, j] = cell
    return n > 0 and NP in chart[0, n]

def syntactic_slot(tokens, position, lexicon=None, gaps=None):
    r'''Return the template categories that the token at the given position
    can take in some derivation of the whole utterance to NP.  Other tokens
    take the categories of their lexicon entries, or any template category if
    they are unknown or listed among the gaps.

        >>> syntactic_slot(['the', 'blue', 'ball'], 1)
        [NP/NP]
        >>> syntactic_slot(['the', 'blue', 'ball'], 2)
        [NP]
        >>> syntactic_slot(['ball'], 0)
        [NP]
    '''
    templated = [c for c, _ in TEMPLATES]
    categories = []
    for i, token in enumerate(tokens):
        if i == position:
            categories.append(None)
        elif lexicon is not None and token in lexicon and \
                (gaps is None or token not in gaps):
            categories.append(set(e.category for e in lexicon.get(token)))
        else:
            categories.append(set(templated))
    slots = []
    for category in templated:
        categories[position] = set([category])
        if _derives_np(categories):
            slots.append(category)
    return slots

def _instantiate(tokens, gaps, lexicon, descriptors):
    candidates = []
    for token in gaps:
        categories = set()
        for i, t in enumerate(tokens):
            if t == token:
                categories.update(syntactic_slot(tokens, i, lexicon, gaps))
        for category, template in TEMPLATES:
            if category not in categories:
                continue
            for d in descriptors:
                c = CandidateEntry(token, category, template(d), d)
                if lexicon.find(c.key) is None:
                    candidates.append(c)
    return candidates

def _filter(tokens, referent, scene, lexicon, candidates):
    target = frozenset([referent])
    temp = lexicon.copy()
    proposed = {}
    for c in candidates:
        proposed[temp.add(c.lexical_entry()).index] = c
    used = set()
    for d in parse_all(tokens, temp):
        if validate(d.meaning, scene) == target:
            used.update(e.index for e in d.leaves if e.index in proposed)
    found = {}
    for index in sorted(used):
        c = proposed[index]
        found.setdefault(c.word, []).append(c)
    return found

def generate_candidates(tokens, referent, scene, lexicon, ontology,
                        fixed=(DETERMINER,), restrict=True):
    r'''Return a dict mapping gap tokens to their surviving CandidateEntry
    lists, or an empty dict if the lexicon already parses the utterance to
    the referent.  Raise InductionError if nothing survives.

    Unknown tokens are tried as gaps first, alongside the existing entries of
    known tokens; if that fails, every token except the fixed ones becomes a
    gap.  With restrict, candidate values are limited to those the referent
    carries, which never removes a survivor because meanings are conjunctions
    of properties and must all hold of the referent.

        >>> import random
        >>> from ccgwl.scene import Scene, SceneObject
        >>> from ccgwl.learner import bootstrap_lexicon
        >>> from ccgwl.overhypothesis import PropertyOntology
        >>> ont = PropertyOntology({'color': ('red', 'blue'), 'shape': ('sphere', 'cube'),
        ...                         'material': ('metal',), 'size': ('small',)})
        >>> scene = Scene([SceneObject(0, 'blue', 'sphere', 'metal', 'small'),
        ...                SceneObject(1, 'red', 'sphere', 'metal', 'small'),
        ...                SceneObject(2, 'blue', 'cube', 'metal', 'small')])
        >>> found = generate_candidates(['the', 'blue', 'sphere'], 0, scene,
        ...                             bootstrap_lexicon(), ont)
        >>> sorted(found)
        ['blue', 'sphere']
        >>> [str(c.meaning) for c in found['blue']]
        ['lambda p. lambda x. and(p(x),blue(x))', 'lambda p. lambda x. and(p(x),sphere(x))']
        >>> [str(c.meaning) for c in found['sphere']]
        ['lambda x. blue(x)', 'lambda x. sphere(x)']
        >>> found == generate_candidates(['the', 'blue', 'sphere'], 0, scene,
        ...                              bootstrap_lexicon(), ont, restrict=False)
        True
        >>> generate_candidates(['the', 'red', 'red'], 1, Scene([
        ...         SceneObject(0, 'red', 'sphere', 'metal', 'small'),
        ...         SceneObject(1, 'red', 'sphere', 'metal', 'small')]),
        ...     bootstrap_lexicon(), ont)
        Traceback (most recent call last):
        ccgwl.induction.InductionError: no candidate meanings for 'the red red' denote the referent

    Against every assignment of a template and a property value to each word
    of the utterance:

        >>> import itertools
        >>> from ccgwl.config import DatasetConfig
        >>> from ccgwl.scene import attribute_inventory, generate_scene, enumerate_trials
        >>> config = DatasetConfig(colors=2, shapes=2, materials=2, sizes=2)
        >>> inv = attribute_inventory(config)
        >>> ont = PropertyOntology(inv)
        >>> def every_assignment(trial):
        ...     options = [[(w, c, t(d)) for c, t in TEMPLATES
        ...                 for d in ont.descriptors()]
        ...                for w in trial.utterance[1:]]
        ...     found = set()
        ...     for choice in itertools.product(*options):
        ...         lex = bootstrap_lexicon()
        ...         for w, c, m in choice:
        ...             lex.add(LexicalEntry(w, c, m))
        ...         if any(validate(d.meaning, trial.scene) == {trial.referent}
        ...                for d in parse_all(trial.utterance, lex)):
        ...             found.update((w, str(c), str(m)) for w, c, m in choice)
        ...     return found
        >>> def survivors(trial):
        ...     found = generate_candidates(trial.utterance, trial.referent,
        ...                                 trial.scene, bootstrap_lexicon(), ont)
        ...     return set((c.word, str(c.category), str(c.meaning))
        ...                for cs in found.values() for c in cs)
        >>> rng = random.Random(3)
        >>> trials = [t for i in range(20)
        ...           for t in enumerate_trials(generate_scene(rng, config, inv), inv)]
        >>> len(trials) > 10
        True
        >>> all(survivors(t) == every_assignment(t) for t in trials)
        True
    '''
    tokens = tuple(tokens)
    target = frozenset([referent])
    if all(t in lexicon for t in tokens):
        for d in parse_all(tokens, lexicon):
            if validate(d.meaning, scene) == target:
                return {}
    if restrict:
        obj = scene.object(referent)
        descriptors = [d for d in ontology.descriptors() if obj.has(d)]
    else:
        descriptors = list(ontology.descriptors())
    distinct = list(dict.fromkeys(tokens))
    unknown = [t for t in distinct if t not in lexicon]
    if any(t in fixed for t in unknown):
        raise InductionError(tokens, 'fixed word missing from the lexicon')
    inducible = [t for t in distinct if t not in fixed]
    attempts = []
    if unknown:
        attempts.append(unknown)
    if inducible and inducible != unknown:
        attempts.append(inducible)
    for gaps in attempts:
        candidates = _instantiate(tokens, gaps, lexicon, descriptors)
        if not candidates:
            continue
        found = _filter(tokens, referent, scene, lexicon, candidates)
        logger.info('induce utterance=%r gaps=%s generated=%d validated=%d',
                    ' '.join(tokens), ','.join(gaps), len(candidates),
                    sum(len(cs) for cs in found.values()))
        if found:
            return found
    raise InductionError(tokens)
