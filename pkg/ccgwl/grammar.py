# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Categorial grammar: syntactic categories, the weighted lexicon, and an
exhaustive chart parser whose derivations are scored log-linearly.

    >>> types = {'blue': 'color', 'sphere': 'shape', 'cube': 'shape'}
    >>> lex = Lexicon()
    >>> for word, cat, meaning in (
    ...         ('the', 'NP/NP', 'lambda p. iota(p)'),
    ...         ('blue', 'NP/NP', 'lambda p. lambda x. and(p(x),blue(x))'),
    ...         ('sphere', 'NP', 'lambda x. sphere(x)')):
    ...     e = lex.add(LexicalEntry(word, parse_category(cat),
    ...                              parse_term(meaning, types)))
    >>> [str(d.meaning) for d in parse_all(['the', 'blue', 'sphere'], lex)]
    ['iota(and(sphere(x),blue(x)))']
    >>> parse_all(['the', 'blue', 'dax'], lex)
    Traceback (most recent call last):
    ccgwl.grammar.UnknownWordError: unknown word 'dax'
'''

import io
import math
import logging
from collections import Counter
from scipy.special import softmax
from ccgwl.input import InputError
from ccgwl.config import lines, remove_comments
from ccgwl.multidict import multidict
from ccgwl.logic import (Application, ApplicationTypeError, PREDICATE,
                         ENTITY_SET, beta_reduce, extract_property, type_of,
                         parse_term, format_term, LogicError)

__all__ = [
        'GrammarError', 'CompositionError', 'UnknownWordError',
        'NoParseError', 'LexiconError',
        'Category', 'Primitive', 'Slash', 'NP', 'NP_NP', 'parse_category',
        'category_admits',
        'LexicalEntry', 'Lexicon', 'Derivation', 'Grammar',
        'forward_apply', 'RULES',
        'parse_all', 'parse_distribution', 'logical_form_distribution',
        'best_parse', 'best_of',
    ]

logger = logging.getLogger(__name__)

class GrammarError(Exception):
    pass

class CompositionError(GrammarError):
    pass

class NoParseError(GrammarError):
    pass

class LexiconError(GrammarError):
    pass

class UnknownWordError(GrammarError):

    def __init__(self, token):
        GrammarError.__init__(self, 'unknown word %r' % token)
        self.token = token

class Category(object):

    __slots__ = ()
    is_slash = False

    def __repr__(self):
        return str(self)

class Primitive(Category):

    __slots__ = ('name',)

    def __init__(self, name):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, Primitive) and other.name == self.name

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.name)

    def __str__(self):
        return self.name

class Slash(Category):

    r'''A forward-slash category X/Y: a functor seeking a Y to its right and
    yielding an X.
    '''

    __slots__ = ('result', 'argument')
    is_slash = True

    def __init__(self, result, argument):
        self.result = result
        self.argument = argument

    def __eq__(self, other):
        return isinstance(other, Slash) and other.result == self.result and \
               other.argument == self.argument

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.result, self.argument))

    def __str__(self):
        parts = []
        for c in (self.result, self.argument):
            parts.append('(%s)' % c if c.is_slash else str(c))
        return '/'.join(parts)

    def apply(self, argument):
        r'''Return the result category of applying to the given category, or
        None.
        '''
        return self.result if argument == self.argument else None

NP = Primitive('NP')
NP_NP = Slash(NP, NP)

def parse_category(text):
    r'''Parse a category written with NP, '/' (left associative) and
    parentheses.

        >>> parse_category('NP/NP') == NP_NP
        True
        >>> parse_category('(NP/NP)/NP')
        (NP/NP)/NP
        >>> parse_category('NP\\NP')
        Traceback (most recent call last):
        ccgwl.grammar.GrammarError: malformed category 'NP\\NP'
    '''
    tokens = [t for t in text.replace('(', ' ( ').replace(')', ' ) ')
                              .replace('/', ' / ').split()]
    def atom(tokens):
        if tokens and tokens[0] == '(':
            cat, tokens = slashes(tokens[1:])
            if not tokens or tokens[0] != ')':
                raise GrammarError('malformed category %r' % text)
            return cat, tokens[1:]
        if tokens and tokens[0] == 'NP':
            return NP, tokens[1:]
        raise GrammarError('malformed category %r' % text)
    def slashes(tokens):
        cat, tokens = atom(tokens)
        while tokens and tokens[0] == '/':
            arg, tokens = atom(tokens[1:])
            cat = Slash(cat, arg)
        return cat, tokens
    cat, rest = slashes(tokens)
    if rest:
        raise GrammarError('malformed category %r' % text)
    return cat

def category_admits(category, semtype):
    r'''Return true if a meaning of the given semantic type may be paired with
    the category.  NP admits predicates and entity sets; X/Y admits functions
    from a Y meaning to an X meaning.
    '''
    if category.is_slash:
        return semtype.is_function and \
               category_admits(category.argument, semtype.argument) and \
               category_admits(category.result, semtype.result)
    return category == NP and semtype in (PREDICATE, ENTITY_SET)

class LexicalEntry(object):

    r'''A weighted pairing of a word with a category and a meaning.  The
    index is the entry's insertion position in its lexicon (None until it is
    added to one).

        >>> from ccgwl.logic import determiner_meaning, noun_meaning
        >>> str(LexicalEntry('the', NP_NP, determiner_meaning()))
        'the := NP/NP : lambda p. iota(p) [0.0]'
        >>> LexicalEntry('the', NP, determiner_meaning())
        Traceback (most recent call last):
        ccgwl.grammar.LexiconError: meaning of type <<e,t>,set> does not fit category NP
    '''

    __slots__ = ('word', 'category', 'meaning', 'weight', 'index', '_property')

    def __init__(self, word, category, meaning, weight=0.0, index=None):
        try:
            semtype = type_of(meaning)
        except ApplicationTypeError as e:
            raise LexiconError('ill-typed meaning for %r: %s' % (word, e))
        if not category_admits(category, semtype):
            raise LexiconError('meaning of type %s does not fit category %s'
                               % (semtype, category))
        self.word = word
        self.category = category
        self.meaning = meaning
        self.weight = _finite(weight)
        self.index = index
        self._property = extract_property(meaning)

    @property
    def key(self):
        return (self.word, self.category, self.meaning)

    @property
    def property(self):
        r'''The PropertyDescriptor of the meaning, or None.'''
        return self._property

    def copy(self):
        return type(self)(self.word, self.category, self.meaning,
                          weight=self.weight, index=self.index)

    def __str__(self):
        return '%s := %s : %s [%r]' % (self.word, self.category, self.meaning,
                                       self.weight)

    def __repr__(self):
        return '<%s #%s>' % (self, self.index)

def _finite(weight):
    weight = float(weight)
    if math.isnan(weight) or math.isinf(weight):
        raise LexiconError('weight must be finite, not %r' % weight)
    return weight

class Lexicon(object):

    r'''A multimap from words to lexical entries.  Entries keep the order in
    which they were added, and no (word, category, meaning) triple appears
    twice.  Each word carries a revision number that changes whenever one of
    its entries is added or re-weighted.

        >>> from ccgwl.logic import determiner_meaning
        >>> lex = Lexicon()
        >>> e = lex.add(LexicalEntry('the', NP_NP, determiner_meaning()))
        >>> e.index, len(lex), 'the' in lex, lex.revision('the')
        (0, 1, True, 1)
        >>> lex.add(LexicalEntry('the', NP_NP, determiner_meaning()))
        Traceback (most recent call last):
        ccgwl.grammar.LexiconError: duplicate entry the := NP/NP : lambda p. iota(p) [0.0]
        >>> lex.adjust(0, 0.5)
        >>> lex.entry(0).weight, lex.revision('the')
        (0.5, 2)
    '''

    def __init__(self, entries=()):
        self._words = multidict()
        self._entries = []
        self._keys = {}
        self._revisions = {}
        for entry in entries:
            self.add(entry)

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __contains__(self, word):
        return word in self._words

    def words(self):
        return list(self._words.keys())

    def get(self, word):
        r'''Return the entries for a word, in insertion order.'''
        return self._words.get(word, ())

    def entry(self, index):
        return self._entries[index]

    def find(self, key):
        r'''Return the entry with the given (word, category, meaning) key, or
        None.
        '''
        return self._keys.get(key)

    def revision(self, word):
        return self._revisions.get(word, 0)

    def _touch(self, word):
        self._revisions[word] = self._revisions.get(word, 0) + 1

    def add(self, entry):
        r'''Add an entry, assigning its index, and return it.'''
        if entry.key in self._keys:
            raise LexiconError('duplicate entry %s' % entry)
        entry.index = len(self._entries)
        self._entries.append(entry)
        self._keys[entry.key] = entry
        self._words[entry.word] = entry
        self._touch(entry.word)
        return entry

    def adjust(self, index, delta):
        entry = self._entries[index]
        entry.weight = _finite(entry.weight + delta)
        self._touch(entry.word)

    def weights(self):
        return [e.weight for e in self._entries]

    def copy(self):
        r'''Return an independent copy, whose entries have the same indices.
        '''
        return type(self)(e.copy() for e in self._entries)

    def dump(self, f):
        r'''Write one TAB-separated record per entry: word, category,
        meaning, weight.
        '''
        for e in self._entries:
            f.write('%s\t%s\t%s\t%r\n' % (e.word, e.category,
                                          format_term(e.meaning), e.weight))

    @classmethod
    def load(class_, source, value_types, path=None):
        r'''Read a file of records written by dump().  Weights round-trip
        exactly.

            >>> from ccgwl.logic import determiner_meaning
            >>> lex = Lexicon([LexicalEntry('the', NP_NP, determiner_meaning(),
            ...                             weight=0.1 + 0.2)])
            >>> f = io.StringIO()
            >>> lex.dump(f)
            >>> again = Lexicon.load(io.StringIO(f.getvalue()), {})
            >>> again.entry(0).weight == 0.1 + 0.2, again.entry(0).key == lex.entry(0).key
            (True, True)
            >>> Lexicon.load(io.StringIO('the\tNP/NP\tlambda p. iota(p)\n'), {},
            ...              path='lex.tsv')
            Traceback (most recent call last):
            ccgwl.input.InputError: 'lex.tsv', line 1: expecting 4 TAB-separated fields
        '''
        return class_.parse(remove_comments(lines(source, path=path)),
                            value_types)

    @classmethod
    def parse(class_, lines, value_types):
        r'''Build a lexicon from located record lines.'''
        lexicon = class_()
        for line in lines:
            if line.isspace():
                continue
            fields = line.rstrip('\n').split('\t')
            if len(fields) != 4:
                raise InputError('expecting 4 TAB-separated fields', line=line)
            word, cat, meaning, weight = fields
            try:
                lexicon.add(LexicalEntry(str(word), parse_category(cat),
                                         parse_term(meaning, value_types),
                                         weight=float(weight)))
            except (GrammarError, LogicError, ValueError) as e:
                raise InputError(e, line=line)
        return lexicon

class Derivation(object):

    r'''A derivation tree.  Leaves hold lexical entries; internal nodes hold
    the result of combining their two children.  The score is the sum of the
    leaf weights at the time the derivation was built.
    '''

    __slots__ = ('category', 'meaning', 'entry', 'children', 'rule',
                 'leaves', 'score')

    def __init__(self, category, meaning, entry=None, children=(), rule=None):
        self.category = category
        self.meaning = meaning
        self.entry = entry
        self.children = tuple(children)
        self.rule = rule
        if entry is not None:
            assert not self.children
            self.leaves = (entry,)
        else:
            self.leaves = tuple(e for c in self.children for e in c.leaves)
        self.score = sum(e.weight for e in self.leaves)

    @classmethod
    def leaf(class_, entry):
        return class_(entry.category, entry.meaning, entry=entry)

    @property
    def order_key(self):
        r'''The leaf-entry indices from left to right, which orders
        derivations for tie-breaking.
        '''
        return tuple(e.index for e in self.leaves)

    def features(self):
        r'''Return the feature vector: a Counter of lexical-entry index to the
        number of times the entry is a leaf.
        '''
        return Counter(e.index for e in self.leaves)

    def current_score(self):
        return sum(e.weight for e in self.leaves)

    def tokens(self):
        return tuple(e.word for e in self.leaves)

    def __repr__(self):
        return '<Derivation %r => %s [%r]>' % (' '.join(self.tokens()),
                                               self.meaning, self.score)

def forward_apply(left, right):
    r'''Forward application: X/Y : f and Y : a combine to X : f(a), reduced.
    Both arguments need 'category' and 'meaning' attributes.  Return a
    (category, meaning) pair, or None if the categories do not combine.  A
    semantic type clash raises CompositionError.

        >>> from ccgwl.logic import noun_meaning, PropertyDescriptor
        >>> cube = LexicalEntry('cube', NP, noun_meaning(PropertyDescriptor('shape', 'cube')))
        >>> forward_apply(cube, cube) is None
        True
    '''
    if not left.category.is_slash:
        return None
    category = left.category.apply(right.category)
    if category is None:
        return None
    try:
        meaning = beta_reduce(Application(left.meaning, right.meaning))
    except ApplicationTypeError as e:
        raise CompositionError('%s cannot apply to %s: %s' %
                               (left.meaning, right.meaning, e))
    return category, meaning

RULES = (forward_apply,)

class Grammar(object):

    r'''A grammar is a lexicon and a set of combinatory rules.

        >>> from ccgwl.logic import determiner_meaning, noun_meaning, PropertyDescriptor
        >>> g = Grammar(Lexicon([LexicalEntry('the', NP_NP, determiner_meaning()),
        ...     LexicalEntry('cube', NP, noun_meaning(PropertyDescriptor('shape', 'cube')))]))
        >>> [str(d.meaning) for d in g.parse(['the', 'cube'])]
        ['iota(cube(x))']
    '''

    def __init__(self, lexicon, rules=RULES):
        self.lexicon = lexicon
        self.rules = tuple(rules)

    def parse(self, tokens):
        return parse_all(tokens, self.lexicon, self.rules)

def parse_all(tokens, lexicon, rules=RULES):
    r'''Return every derivation of the utterance with root category NP,
    ordered by the insertion indices of their leaf entries.  Raise
    UnknownWordError if a token has no lexical entry.
    '''
    tokens = tuple(tokens)
    for token in tokens:
        if token not in lexicon:
            raise UnknownWordError(token)
    n = len(tokens)
    if n == 0:
        return []
    chart = {}
    for i, token in enumerate(tokens):
        chart[i, i + 1] = [Derivation.leaf(e) for e in lexicon.get(token)]
    for width in range(2, n + 1):
        for i in range(0, n - width + 1):
            j = i + width
            cell = []
            for k in range(i + 1, j):
                for left in chart[i, k]:
                    for right in chart[k, j]:
                        for rule in rules:
                            try:
                                result = rule(left, right)
                            except CompositionError as e:
                                logger.debug('span=%d:%d skip %s', i, j, e)
                                continue
                            if result is not None:
                                cell.append(Derivation(result[0], result[1],
                                                       children=(left, right),
                                                       rule=rule.__name__))
            chart[i, j] = cell
    roots = [d for d in chart[0, n] if d.category == NP]
    roots.sort(key=lambda d: d.order_key)
    logger.debug('parsed %r: %d derivations', ' '.join(tokens), len(roots))
    return roots

def parse_distribution(tokens, lexicon, rules=RULES):
    r'''Return a list of (derivation, probability) pairs: the log-linear
    distribution over all derivations of the utterance.  Raise NoParseError
    if there are none.  Adding the same constant to every weight leaves the
    distribution unchanged, since every derivation of an utterance has one
    leaf per token.
    '''
    derivations = parse_all(tokens, lexicon, rules)
    if not derivations:
        raise NoParseError('no derivation of %r' % ' '.join(tokens))
    probs = softmax([d.score for d in derivations])
    return list(zip(derivations, (float(p) for p in probs)))

def logical_form_distribution(tokens, lexicon, rules=RULES):
    r'''Marginalise the derivation distribution over derivations that share a
    root logical form.  Forms are listed in order of their first derivation.

        >>> from ccgwl.logic import noun_meaning, PropertyDescriptor
        >>> lex = Lexicon([
        ...     LexicalEntry('dax', NP, noun_meaning(PropertyDescriptor('shape', 'cube')), 1.0),
        ...     LexicalEntry('dax', NP, noun_meaning(PropertyDescriptor('color', 'red')))])
        >>> [(str(m), round(p, 4)) for m, p in logical_form_distribution(['dax'], lex)]
        [('lambda x. cube(x)', 0.7311), ('lambda x. red(x)', 0.2689)]
    '''
    dist = {}
    for d, p in parse_distribution(tokens, lexicon, rules):
        dist[d.meaning] = dist.get(d.meaning, 0.0) + p
    return list(dist.items())

def best_parse(tokens, lexicon, rules=RULES):
    r'''Return the highest-scoring derivation; ties go to the derivation whose
    leaf-entry indices sort first.  Raise NoParseError if there is none.
    '''
    derivations = parse_all(tokens, lexicon, rules)
    if not derivations:
        raise NoParseError('no derivation of %r' % ' '.join(tokens))
    return best_of(derivations)

def best_of(derivations):
    r'''Return the best of a non-empty list of derivations.'''
    return min(derivations, key=lambda d: (-d.score, d.order_key))
