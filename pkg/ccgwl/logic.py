# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Typed lambda terms: the logical forms that lexical entries pair with
words, their beta reduction, and their evaluation against a scene.

Bound variables are stored as de Bruijn indices (0 is the innermost binder),
so alpha-equivalent terms are equal and hash alike.  Names only exist in the
textual syntax, where entity variables are spelled x, y, z, w and predicate
variables p, q, r:

    lambda x. sphere(x)
    lambda p. lambda x. and(p(x),blue(x))
    lambda p. iota(p)
    iota(and(sphere(x),blue(x)))

An iota whose argument is a truth-valued body binds that body's free entity
variable, so the last line is shorthand for iota(lambda x. and(...)).

    >>> types = {'blue': 'color', 'red': 'color', 'sphere': 'shape'}
    >>> blue = parse_term('lambda p. lambda x. and(p(x),blue(x))', types)
    >>> sphere = parse_term('lambda x. sphere(x)', types)
    >>> print(beta_reduce(Application(blue, sphere)))
    lambda x. and(sphere(x),blue(x))
    >>> the = parse_term('lambda p. iota(p)', types)
    >>> print(beta_reduce(Application(the, Application(blue, sphere))))
    iota(and(sphere(x),blue(x)))
    >>> beta_reduce(Application(sphere, parse_term('lambda x. red(x)', types)))
    Traceback (most recent call last):
    ccgwl.logic.ApplicationTypeError: cannot apply <e,t> to argument of type <e,t>
'''

import re
import collections

__all__ = [
        'LogicError', 'ApplicationTypeError', 'EvaluationError',
        'MalformedEntryError', 'TermSyntaxError',
        'SemanticType', 'BasicType', 'FunctionType',
        'ENTITY', 'TRUTH', 'ENTITY_SET', 'PREDICATE',
        'PropertyDescriptor',
        'Term', 'Variable', 'Abstraction', 'Application', 'PropertyConst',
        'Conjunction', 'Iota',
        'type_of', 'beta_reduce', 'evaluate', 'extract_property',
        'parse_term', 'format_term',
        'noun_meaning', 'modifier_meaning', 'determiner_meaning',
    ]

class LogicError(Exception):
    pass

class ApplicationTypeError(LogicError):
    pass

class EvaluationError(LogicError):
    pass

class MalformedEntryError(LogicError):
    pass

class TermSyntaxError(LogicError):
    pass

class SemanticType(object):

    __slots__ = ()
    is_function = False

    def __repr__(self):
        return str(self)

class BasicType(SemanticType):

    __slots__ = ('name',)

    def __init__(self, name):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, BasicType) and other.name == self.name

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.name)

    def __str__(self):
        return self.name

class FunctionType(SemanticType):

    r'''
        >>> FunctionType(PREDICATE, ENTITY_SET)
        <<e,t>,set>
        >>> FunctionType(ENTITY, TRUTH) == PREDICATE
        True
    '''

    __slots__ = ('argument', 'result')
    is_function = True

    def __init__(self, argument, result):
        self.argument = argument
        self.result = result

    def __eq__(self, other):
        return isinstance(other, FunctionType) and \
               other.argument == self.argument and other.result == self.result

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.argument, self.result))

    def __str__(self):
        return '<%s,%s>' % (self.argument, self.result)

ENTITY = BasicType('e')
TRUTH = BasicType('t')
ENTITY_SET = BasicType('set')
PREDICATE = FunctionType(ENTITY, TRUTH)

class PropertyDescriptor(collections.namedtuple('PropertyDescriptor',
                                                'type value')):

    r'''A perceptual property value together with its property type.

        >>> str(PropertyDescriptor('color', 'blue'))
        'color:blue'
    '''

    __slots__ = ()

    def __str__(self):
        return '%s:%s' % (self.type, self.value)

ENTITY_NAMES = ('x', 'y', 'z', 'w')
PREDICATE_NAMES = ('p', 'q', 'r')
OTHER_NAMES = ('f', 'g', 'h')

def _binder_names(var_type):
    if var_type == ENTITY:
        return ENTITY_NAMES
    if var_type == PREDICATE:
        return PREDICATE_NAMES
    return OTHER_NAMES

def _fresh_name(var_type, names):
    base = _binder_names(var_type)
    n = 0
    while True:
        for name in base:
            cand = name if n == 0 else '%s%d' % (name, n)
            if cand not in names:
                return cand
        n += 1

class Term(object):

    r'''Base class of immutable lambda terms.  Subclasses supply _key() for
    structural equality and the de Bruijn operations.
    '''

    __slots__ = ()

    def __eq__(self, other):
        return type(other) is type(self) and other._key() == self._key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((type(self).__name__,) + self._key())

    def __str__(self):
        return self._format(())

    def __repr__(self):
        return 'term(%r)' % str(self)

    def _shift(self, d, cutoff):
        return self

    def _subst(self, j, value):
        return self

    def _normalize(self):
        return self

    def _occurs(self, j):
        return False

    def _properties(self):
        return iter(())

class Variable(Term):

    __slots__ = ('index',)

    def __init__(self, index):
        assert index >= 0
        self.index = index

    def _key(self):
        return (self.index,)

    def _type(self, context):
        try:
            return context[self.index]
        except IndexError:
            raise ApplicationTypeError('unbound variable %d' % self.index)

    def _shift(self, d, cutoff):
        if self.index >= cutoff:
            return Variable(self.index + d)
        return self

    def _subst(self, j, value):
        return value if self.index == j else self

    def _occurs(self, j):
        return self.index == j

    def _format(self, names):
        if self.index < len(names):
            return names[self.index]
        return '#%d' % self.index

class Abstraction(Term):

    __slots__ = ('var_type', 'body')

    def __init__(self, var_type, body):
        self.var_type = var_type
        self.body = body

    def _key(self):
        return (self.var_type, self.body)

    def _type(self, context):
        return FunctionType(self.var_type,
                            self.body._type((self.var_type,) + context))

    def _shift(self, d, cutoff):
        return Abstraction(self.var_type, self.body._shift(d, cutoff + 1))

    def _subst(self, j, value):
        return Abstraction(self.var_type,
                           self.body._subst(j + 1, value._shift(1, 0)))

    def _normalize(self):
        return Abstraction(self.var_type, self.body._normalize())

    def _occurs(self, j):
        return self.body._occurs(j + 1)

    def _properties(self):
        return self.body._properties()

    def _format(self, names):
        name = _fresh_name(self.var_type, names)
        return 'lambda %s. %s' % (name, self.body._format((name,) + names))

class Application(Term):

    __slots__ = ('function', 'argument')

    def __init__(self, function, argument):
        self.function = function
        self.argument = argument

    def _key(self):
        return (self.function, self.argument)

    def _type(self, context):
        ftype = self.function._type(context)
        atype = self.argument._type(context)
        if not ftype.is_function or ftype.argument != atype:
            raise ApplicationTypeError('cannot apply %s to argument of type %s'
                                       % (ftype, atype))
        return ftype.result

    def _shift(self, d, cutoff):
        return Application(self.function._shift(d, cutoff),
                           self.argument._shift(d, cutoff))

    def _subst(self, j, value):
        return Application(self.function._subst(j, value),
                           self.argument._subst(j, value))

    def _normalize(self):
        function = self.function._normalize()
        argument = self.argument._normalize()
        if isinstance(function, Abstraction):
            reduced = function.body._subst(0, argument._shift(1, 0))
            return reduced._shift(-1, 0)._normalize()
        return Application(function, argument)

    def _occurs(self, j):
        return self.function._occurs(j) or self.argument._occurs(j)

    def _properties(self):
        for d in self.function._properties():
            yield d
        for d in self.argument._properties():
            yield d

    def _format(self, names):
        function = self.function._format(names)
        if isinstance(self.function, Abstraction):
            function = '(%s)' % function
        return '%s(%s)' % (function, self.argument._format(names))

class PropertyConst(Term):

    r'''The predicate of objects that have a particular property value.'''

    __slots__ = ('descriptor',)

    def __init__(self, descriptor):
        self.descriptor = descriptor

    def _key(self):
        return (self.descriptor,)

    def _type(self, context):
        return PREDICATE

    def _properties(self):
        yield self.descriptor

    def _format(self, names):
        return self.descriptor.value

class Conjunction(Term):

    __slots__ = ('left', 'right')

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def _key(self):
        return (self.left, self.right)

    def _type(self, context):
        for part in (self.left, self.right):
            ptype = part._type(context)
            if ptype != TRUTH:
                raise ApplicationTypeError('cannot conjoin a term of type %s'
                                           % ptype)
        return TRUTH

    def _shift(self, d, cutoff):
        return Conjunction(self.left._shift(d, cutoff),
                           self.right._shift(d, cutoff))

    def _subst(self, j, value):
        return Conjunction(self.left._subst(j, value),
                           self.right._subst(j, value))

    def _normalize(self):
        return Conjunction(self.left._normalize(), self.right._normalize())

    def _occurs(self, j):
        return self.left._occurs(j) or self.right._occurs(j)

    def _properties(self):
        for d in self.left._properties():
            yield d
        for d in self.right._properties():
            yield d

    def _format(self, names):
        return 'and(%s,%s)' % (self.left._format(names),
                               self.right._format(names))

class Iota(Term):

    r'''The set of all objects that satisfy a predicate.'''

    __slots__ = ('predicate',)

    def __init__(self, predicate):
        self.predicate = predicate

    def _key(self):
        return (self.predicate,)

    def _type(self, context):
        ptype = self.predicate._type(context)
        if ptype != PREDICATE:
            raise ApplicationTypeError('cannot apply iota to a term of type %s'
                                       % ptype)
        return ENTITY_SET

    def _shift(self, d, cutoff):
        return Iota(self.predicate._shift(d, cutoff))

    def _subst(self, j, value):
        return Iota(self.predicate._subst(j, value))

    def _normalize(self):
        return Iota(self.predicate._normalize())

    def _occurs(self, j):
        return self.predicate._occurs(j)

    def _properties(self):
        return self.predicate._properties()

    def _format(self, names):
        pred = self.predicate
        if isinstance(pred, Abstraction) and pred.var_type == ENTITY and \
                pred.body._occurs(0):
            name = _fresh_name(ENTITY, names)
            return 'iota(%s)' % pred.body._format((name,) + names)
        return 'iota(%s)' % pred._format(names)

def type_of(term):
    r'''Return the semantic type of a closed term, or raise
    ApplicationTypeError if it is ill-typed or open.

        >>> type_of(determiner_meaning())
        <<e,t>,set>
    '''
    return term._type(())

def beta_reduce(term):
    r'''Reduce a well-typed term to beta-normal form.  The type is preserved.

        >>> types = {'cube': 'shape'}
        >>> t = parse_term('(lambda p. lambda y. p(y))(lambda x. cube(x))', types)
        >>> print(beta_reduce(t))
        lambda x. cube(x)
        >>> type_of(t) == type_of(beta_reduce(t))
        True
    '''
    term._type(())
    return term._normalize()

def _satisfies(predicate, obj):
    if isinstance(predicate, PropertyConst):
        return obj.attribute(predicate.descriptor.type) == \
               predicate.descriptor.value
    if isinstance(predicate, Abstraction):
        return _truth(predicate.body, (obj,))
    raise EvaluationError('cannot evaluate predicate %s' % predicate)

def _truth(term, env):
    if isinstance(term, Conjunction):
        return _truth(term.left, env) and _truth(term.right, env)
    if isinstance(term, Application) and isinstance(term.argument, Variable):
        return _satisfies(term.function, env[term.argument.index])
    raise EvaluationError('cannot evaluate %s' % term)

def evaluate(term, scene):
    r'''Return the denotation of a closed term in a scene: the frozenset of
    ids of the objects that satisfy it.  An iota term and a bare predicate
    both denote the set of all satisfying objects.

        >>> from ccgwl.scene import Scene, SceneObject
        >>> scene = Scene([SceneObject(0, 'blue', 'sphere', 'metal', 'small'),
        ...                SceneObject(1, 'red', 'sphere', 'rubber', 'large'),
        ...                SceneObject(2, 'blue', 'cube', 'metal', 'large')])
        >>> types = {'blue': 'color', 'sphere': 'shape'}
        >>> sorted(evaluate(parse_term('iota(and(sphere(x),blue(x)))', types),
        ...                 scene))
        [0]
        >>> sorted(evaluate(parse_term('lambda x. blue(x)', types), scene))
        [0, 2]
        >>> evaluate(determiner_meaning(), scene)
        Traceback (most recent call last):
        ccgwl.logic.EvaluationError: cannot evaluate a term of type <<e,t>,set>
    '''
    try:
        ttype = term._type(())
    except ApplicationTypeError as e:
        raise EvaluationError(str(e))
    term = term._normalize()
    if ttype == ENTITY_SET:
        assert isinstance(term, Iota), term
        predicate = term.predicate
    elif ttype == PREDICATE:
        predicate = term
    else:
        raise EvaluationError('cannot evaluate a term of type %s' % ttype)
    return frozenset(obj.id for obj in scene.objects
                     if _satisfies(predicate, obj))

def extract_property(term):
    r'''Return the PropertyDescriptor of the single property constant in a
    term, or None if it has none.

        >>> types = {'blue': 'color', 'cube': 'shape'}
        >>> extract_property(parse_term('lambda p. lambda x. and(p(x),blue(x))', types))
        PropertyDescriptor(type='color', value='blue')
        >>> extract_property(determiner_meaning()) is None
        True
        >>> extract_property(parse_term('lambda x. and(cube(x),blue(x))', types))
        Traceback (most recent call last):
        ccgwl.logic.MalformedEntryError: more than one property constant in lambda x. and(cube(x),blue(x))
    '''
    found = []
    for d in term._properties():
        if d not in found:
            found.append(d)
    if len(found) > 1:
        raise MalformedEntryError('more than one property constant in %s' %
                                  term)
    return found[0] if found else None

def noun_meaning(descriptor):
    r'''lambda x. v(x)'''
    return Abstraction(ENTITY,
                       Application(PropertyConst(descriptor), Variable(0)))

def modifier_meaning(descriptor):
    r'''lambda p. lambda x. and(p(x),v(x))'''
    return Abstraction(PREDICATE, Abstraction(ENTITY, Conjunction(
                Application(Variable(1), Variable(0)),
                Application(PropertyConst(descriptor), Variable(0)))))

def determiner_meaning():
    r'''lambda p. iota(p)'''
    return Abstraction(PREDICATE, Iota(Variable(0)))

def format_term(term):
    r'''Return the textual form of a term, which parse_term() reads back.

        >>> print(format_term(modifier_meaning(PropertyDescriptor('color', 'blue'))))
        lambda p. lambda x. and(p(x),blue(x))
    '''
    return str(term)

def parse_term(text, value_types):
    r'''Parse the textual term syntax.  The value_types mapping gives the
    property type of every property value that may appear as a constant.

        >>> types = {'sphere': 'shape'}
        >>> parse_term('lambda y. sphere(y)', types) == \
        ...     parse_term('lambda x. sphere(x)', types)
        True
        >>> parse_term('lambda x. cube(x)', types)
        Traceback (most recent call last):
        ccgwl.logic.TermSyntaxError: unknown constant 'cube'
        >>> parse_term('lambda x. sphere(x', types)
        Traceback (most recent call last):
        ccgwl.logic.TermSyntaxError: missing ")"
    '''
    return Term_Parser(value_types).parse(text)

class Term_Parser(object):

    OP_LAMBDA = ('lambda', 'λ', '\\')
    OP_DOT = '.'
    OP_COMMA = ','
    OP_PAREN_OPEN = '('
    OP_PAREN_CLOSE = ')'
    KW_AND = 'and'
    KW_IOTA = 'iota'

    _token_re = re.compile(r'\s*(λ|\\|[A-Za-z_][A-Za-z0-9_]*|\S)')

    def __init__(self, value_types):
        self.value_types = value_types

    def tokenize(self, text):
        tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = self._token_re.match(text, pos)
            tokens.append(m.group(1))
            pos = m.end()
        return tokens

    def parse(self, text):
        tokens = self.tokenize(text)
        if not tokens:
            raise TermSyntaxError('empty term')
        node, tokens = self._term(tokens)
        if tokens:
            raise TermSyntaxError('spurious token %r' % tokens[0])
        return self._resolve(node, ())

    def _expect(self, tokens, token):
        if not tokens or tokens[0] != token:
            raise TermSyntaxError('missing "%s"' % token)
        return tokens[1:]

    def _term(self, tokens):
        if tokens and tokens[0] in self.OP_LAMBDA:
            if len(tokens) < 2 or not tokens[1].isidentifier():
                raise TermSyntaxError('missing variable after lambda')
            name = tokens[1]
            body, tokens = self._term(self._expect(tokens[2:], self.OP_DOT))
            return ('lam', name, body), tokens
        return self._application(tokens)

    def _application(self, tokens):
        node, tokens = self._atom(tokens)
        while tokens and tokens[0] == self.OP_PAREN_OPEN:
            arg, tokens = self._term(tokens[1:])
            tokens = self._expect(tokens, self.OP_PAREN_CLOSE)
            node = ('app', node, arg)
        return node, tokens

    def _atom(self, tokens):
        if not tokens:
            raise TermSyntaxError('unexpected end of term')
        token = tokens[0]
        if token == self.KW_AND:
            tokens = self._expect(tokens[1:], self.OP_PAREN_OPEN)
            left, tokens = self._term(tokens)
            tokens = self._expect(tokens, self.OP_COMMA)
            right, tokens = self._term(tokens)
            return ('and', left, right), self._expect(tokens,
                                                      self.OP_PAREN_CLOSE)
        if token == self.KW_IOTA:
            tokens = self._expect(tokens[1:], self.OP_PAREN_OPEN)
            body, tokens = self._term(tokens)
            return ('iota', body), self._expect(tokens, self.OP_PAREN_CLOSE)
        if token == self.OP_PAREN_OPEN:
            node, tokens = self._term(tokens[1:])
            return node, self._expect(tokens, self.OP_PAREN_CLOSE)
        if token.isidentifier() and token not in self.OP_LAMBDA:
            return ('name', token), tokens[1:]
        raise TermSyntaxError('unexpected token %r' % token)

    @staticmethod
    def _binder_type(name):
        if name[0] in 'xyzw':
            return ENTITY
        if name[0] in 'pqr':
            return PREDICATE
        raise TermSyntaxError('cannot infer the type of variable %r' % name)

    def _free_names(self, node, bound):
        kind = node[0]
        if kind == 'name':
            name = node[1]
            if name not in bound and name not in self.value_types:
                yield name
        elif kind == 'lam':
            for name in self._free_names(node[2], bound | set([node[1]])):
                yield name
        else:
            for child in node[1:]:
                for name in self._free_names(child, bound):
                    yield name

    def _resolve(self, node, scope):
        kind = node[0]
        if kind == 'name':
            name = node[1]
            for i, bound in enumerate(scope):
                if bound == name:
                    return Variable(i)
            try:
                vtype = self.value_types[name]
            except KeyError:
                raise TermSyntaxError('unknown constant %r' % name)
            return PropertyConst(PropertyDescriptor(vtype, name))
        if kind == 'lam':
            return Abstraction(self._binder_type(node[1]),
                               self._resolve(node[2], (node[1],) + scope))
        if kind == 'app':
            return Application(self._resolve(node[1], scope),
                               self._resolve(node[2], scope))
        if kind == 'and':
            return Conjunction(self._resolve(node[1], scope),
                               self._resolve(node[2], scope))
        assert kind == 'iota'
        body = node[1]
        free = set(self._free_names(body, set(scope)))
        entity_free = [n for n in free if n[0] in 'xyzw']
        if len(entity_free) == 1:
            name = entity_free[0]
            return Iota(Abstraction(ENTITY,
                                    self._resolve(body, (name,) + scope)))
        return Iota(self._resolve(body, scope))
