# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''The overhypothesis: a probabilistic model of which property types words of
each syntactic category tend to denote, estimated from the weighted lexicon.

The lexicon weights are aggregated into Dirichlet concentrations over
syntactic categories given a property type, and over words given a property
value:

    alpha(s | t)  =  exp(sum of weights of entries (w, s, m) with type(m) = t / tau)
    alpha(w | v)  =  exp(sum of weights of entries (w, s, m) with value(m) = v / tau)

each normalised over s (respectively w).  The predictive distribution over the
property (t, v) of a word w in syntactic slot s is then

    P(t, v | s, w)  ~  P(t) P(v | t) E[P(s | t)] E[P(w | v)]

with P(t) and P(v | t) uniform and the expectations equal to the normalised
concentrations.  The Dirichlet scales rho_s and rho_w do not affect these
means; they are kept with the table for inspection only.
'''

import math
import logging
import numpy as np
from scipy.special import softmax, logsumexp
from ccgwl.config import ConfigError
from ccgwl.logic import PropertyDescriptor
from ccgwl.grammar import NP, NP_NP

__all__ = [
        'PropertyOntology', 'ConcentrationTable', 'NovelWordPosterior',
        'compute_concentrations', 'predictive', 'belief_color_given_modifier',
    ]

logger = logging.getLogger(__name__)

class PropertyOntology(object):

    r'''Property types, the values of each type, and the syntactic
    categories the overhypothesis ranges over.  Every value belongs to
    exactly one type.

        >>> ont = PropertyOntology({'color': ('red', 'blue'), 'shape': ('cube',)})
        >>> ont.types, ont.type_of('cube')
        (('color', 'shape'), 'shape')
        >>> PropertyOntology({'color': ('red',), 'shape': ('red',)})
        Traceback (most recent call last):
        ccgwl.config.ConfigError: value 'red' belongs to both color and shape
        >>> PropertyOntology({'color': ()})
        Traceback (most recent call last):
        ccgwl.config.ConfigError: empty color inventory
    '''

    def __init__(self, values_of, syntactic=(NP, NP_NP)):
        self.types = tuple(values_of)
        self.values_of = dict((t, tuple(values_of[t])) for t in self.types)
        self.syntactic = tuple(syntactic)
        self._type_of = {}
        if not self.types:
            raise ConfigError('no property types')
        for t in self.types:
            if not self.values_of[t]:
                raise ConfigError('empty %s inventory' % t)
            for v in self.values_of[t]:
                if v in self._type_of:
                    raise ConfigError('value %r belongs to both %s and %s' %
                                      (v, self._type_of[v], t))
                self._type_of[v] = t

    def type_of(self, value):
        return self._type_of[value]

    def value_types(self):
        r'''Return a dict mapping every value to its type.'''
        return dict(self._type_of)

    def descriptors(self):
        r'''Iterate over every (type, value) pair, types in order.'''
        for t in self.types:
            for v in self.values_of[t]:
                yield PropertyDescriptor(t, v)

    def __eq__(self, other):
        if not isinstance(other, PropertyOntology):
            return NotImplemented
        return (self.types, self.values_of, self.syntactic) == \
               (other.types, other.values_of, other.syntactic)

    def __ne__(self, other):
        ret = self.__eq__(other)
        return ret if ret is NotImplemented else not ret

    def __repr__(self):
        return '%s(%r)' % (self.__class__.__name__, self.values_of)

class ConcentrationTable(object):

    r'''Normalised concentrations computed from one lexicon snapshot.
    Read-only once built.
    '''

    def __init__(self, ontology, words, s_sums, w_sums, tau, rho_s=1.0,
                 rho_w=1.0):
        self.ontology = ontology
        self.words = tuple(words)
        self.tau = tau
        self.rho_s = rho_s
        self.rho_w = rho_w
        self._t_index = dict((t, i) for i, t in enumerate(ontology.types))
        self._s_index = dict((s, j) for j, s in enumerate(ontology.syntactic))
        self.s_sums = s_sums
        self.alpha_s = softmax(s_sums / tau, axis=1)
        self._w_sums = w_sums
        self._w_lognorm = {}

    def alpha_s_given_t(self, s, t):
        return float(self.alpha_s[self._t_index[t], self._s_index[s]])

    def log_alpha_w_given_v(self, w, v):
        r'''Log of the normalised concentration of word w under value v, over
        the words of the lexicon.  Raise KeyError for a word outside it.
        '''
        if w not in self.words:
            raise KeyError(w)
        sums = self._w_sums.get(v, {})
        try:
            lognorm = self._w_lognorm[v]
        except KeyError:
            lognorm = logsumexp([sums.get(x, 0.0) / self.tau
                                 for x in self.words])
            self._w_lognorm[v] = lognorm
        return sums.get(w, 0.0) / self.tau - lognorm

    def alpha_w_given_v(self, w, v):
        return math.exp(self.log_alpha_w_given_v(w, v))

    def dirichlet_s(self, t):
        r'''Dirichlet parameters rho_s * alpha(. | t), indexed like the
        ontology's syntactic inventory.
        '''
        return self.rho_s * self.alpha_s[self._t_index[t]]

    def dirichlet_w(self, v):
        return self.rho_w * np.array([self.alpha_w_given_v(w, v)
                                      for w in self.words])

def compute_concentrations(lexicon, ontology, tau=1.0, rho_s=1.0, rho_w=1.0):
    r'''Aggregate lexicon weights into a ConcentrationTable.  Entries whose
    meaning has no property constant (the determiner) are left out.

        >>> from ccgwl.logic import modifier_meaning
        >>> from ccgwl.grammar import Lexicon, LexicalEntry
        >>> ont = PropertyOntology({'color': ('red', 'blue'), 'shape': ('cube', 'sphere')})
        >>> t = compute_concentrations(Lexicon(), ont)
        >>> t.alpha_s_given_t(NP_NP, 'color'), t.alpha_s_given_t(NP, 'shape')
        (0.5, 0.5)
        >>> compute_concentrations(Lexicon(), ont, rho_s=4).dirichlet_s('shape')
        array([2., 2.])
        >>> lex = Lexicon([LexicalEntry('blue', NP_NP,
        ...         modifier_meaning(PropertyDescriptor('color', 'blue')), weight=2)])
        >>> round(compute_concentrations(lex, ont).alpha_s_given_t(NP_NP, 'color'), 4)
        0.8808
        >>> compute_concentrations(lex, ont, rho_w=2).dirichlet_w('blue')
        array([2.])
        >>> round(compute_concentrations(lex, ont, tau=1e9).alpha_s_given_t(NP_NP, 'color'), 6)
        0.5
        >>> compute_concentrations(lex, ont, tau=0)
        Traceback (most recent call last):
        ccgwl.config.ConfigError: tau must be positive, not 0

    Scaling every weight by c is the same as dividing tau by c:

        >>> lex3 = Lexicon([LexicalEntry('blue', NP_NP,
        ...         modifier_meaning(PropertyDescriptor('color', 'blue')), weight=6)])
        >>> np.allclose(compute_concentrations(lex3, ont).alpha_s,
        ...             compute_concentrations(lex, ont, tau=1/3).alpha_s)
        True
    '''
    if not tau > 0:
        raise ConfigError('tau must be positive, not %r' % tau)
    t_index = dict((t, i) for i, t in enumerate(ontology.types))
    s_index = dict((s, j) for j, s in enumerate(ontology.syntactic))
    s_sums = np.zeros((len(ontology.types), len(ontology.syntactic)))
    w_sums = {}
    for entry in lexicon:
        d = entry.property
        if d is None:
            continue
        if d.type in t_index and entry.category in s_index:
            s_sums[t_index[d.type], s_index[entry.category]] += entry.weight
        by_word = w_sums.setdefault(d.value, {})
        by_word[entry.word] = by_word.get(entry.word, 0.0) + entry.weight
    return ConcentrationTable(ontology, lexicon.words(), s_sums, w_sums, tau,
                              rho_s=rho_s, rho_w=rho_w)

class NovelWordPosterior(object):

    r'''A distribution over (type, value) pairs for a word in a syntactic
    slot.
    '''

    def __init__(self, ontology, table):
        self.ontology = ontology
        self.table = table

    def probability(self, t, v):
        return self.table.get((t, v), 0.0)

    def items(self):
        return self.table.items()

    def type_marginal(self):
        r'''Return a dict of type to probability, in ontology order.'''
        marginal = dict((t, 0.0) for t in self.ontology.types)
        for (t, v), p in self.table.items():
            marginal[t] += p
        return marginal

    def most_likely(self):
        return max(self.table, key=lambda tv: self.table[tv])

    def __repr__(self):
        return '<%s %s>' % (self.__class__.__name__,
                ' '.join('%s=%.4f' % i for i in self.type_marginal().items()))

def predictive(s, w, table, ontology=None):
    r'''Return the NovelWordPosterior P(t, v | s, w).  A word the lexicon has
    never seen carries no evidence about its value, so only the syntactic
    factor distinguishes types.

        >>> from ccgwl.logic import modifier_meaning, noun_meaning
        >>> from ccgwl.grammar import Lexicon, LexicalEntry
        >>> ont = PropertyOntology({'color': ('red', 'blue', 'green', 'pink', 'gray'),
        ...                         'shape': ('cube', 'sphere', 'cone')})
        >>> post = predictive(NP_NP, 'dax', compute_concentrations(Lexicon(), ont))
        >>> dict((t, round(p, 12)) for t, p in post.type_marginal().items())
        {'color': 0.5, 'shape': 0.5}
        >>> abs(post.probability('color', 'red') - 0.1) < 1e-12
        True
        >>> post.probability('color', 'cube')
        0.0

    Five color modifiers of weight 1, checked against a hand computation:

        >>> lex = Lexicon([LexicalEntry(c + 'ish', NP_NP,
        ...         modifier_meaning(PropertyDescriptor('color', c)), weight=1)
        ...         for c in ont.values_of['color']])
        >>> post = predictive(NP_NP, 'dax', compute_concentrations(lex, ont))
        >>> a_color = math.exp(5) / (math.exp(5) + 1)
        >>> hand = 0.5 * a_color / (0.5 * a_color + 0.5 * 0.5)
        >>> abs(post.type_marginal()['color'] - hand) < 1e-12
        True
        >>> abs(sum(p for tv, p in post.items()) - 1) < 1e-9
        True

    A word strongly tied to a value keeps that value in a slot whose
    syntactic evidence is balanced between types:

        >>> lex = Lexicon([LexicalEntry(s, NP, noun_meaning(PropertyDescriptor('shape', s)))
        ...                for s in ont.values_of['shape']])
        >>> for cat, meaning in ((NP_NP, modifier_meaning), (NP, noun_meaning)):
        ...     e = lex.add(LexicalEntry('bleu', cat,
        ...             meaning(PropertyDescriptor('color', 'blue')), weight=4))
        >>> table = compute_concentrations(lex, ont)
        >>> table.alpha_s_given_t(NP, 'color')
        0.5
        >>> predictive(NP, 'bleu', table).most_likely()
        ('color', 'blue')
    '''
    if ontology is None:
        ontology = table.ontology
    if s not in ontology.syntactic:
        raise ValueError('category %s is outside the syntactic inventory' % s)
    seen = w in table.words
    keys = []
    logs = []
    log_pt = -math.log(len(ontology.types))
    for t in ontology.types:
        values = ontology.values_of[t]
        log_st = math.log(table.alpha_s_given_t(s, t))
        log_pvt = -math.log(len(values))
        for v in values:
            log_wv = table.log_alpha_w_given_v(w, v) if seen else 0.0
            keys.append((t, v))
            logs.append(log_pt + log_pvt + log_st + log_wv)
    probs = softmax(logs)
    return NovelWordPosterior(ontology,
                              dict(zip(keys, (float(p) for p in probs))))

def belief_color_given_modifier(table):
    r'''Return P(t = color | s = NP/NP), normalised over color and shape.

        >>> from ccgwl.logic import modifier_meaning
        >>> from ccgwl.grammar import Lexicon, LexicalEntry
        >>> ont = PropertyOntology({'color': ('red',), 'shape': ('cube',),
        ...                         'size': ('big',)})
        >>> belief_color_given_modifier(compute_concentrations(Lexicon(), ont))
        0.5
        >>> beliefs = []
        >>> for theta in (-1, 0, 0.5, 2, 4):
        ...     lex = Lexicon([LexicalEntry('red', NP_NP,
        ...         modifier_meaning(PropertyDescriptor('color', 'red')), weight=theta)])
        ...     beliefs.append(belief_color_given_modifier(compute_concentrations(lex, ont)))
        >>> beliefs == sorted(beliefs), beliefs[1]
        (True, 0.5)
    '''
    a = table.alpha_s_given_t(NP_NP, 'color')
    b = table.alpha_s_given_t(NP_NP, 'shape')
    return a / (a + b)
