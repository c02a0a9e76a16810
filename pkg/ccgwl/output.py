# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Formatted output of derivations and distributions.
'''

__all__ = ['Treebuf', 'format_derivation', 'format_distribution']

class _Treebuf(object):

    def __init__(self):
        self._render = []
        self._level = 0
        self._tl = self

    def nl(self):
        self._tl._render.append(lambda r: r.nl())

    def add(self, *text):
        level = self._level
        self._tl._render.append(lambda r: r.set_level(level))
        self._tl._render.append(lambda r: r.add(*text))

    def sub(self):
        return _Sub_Treebuf(self)

class _Sub_Treebuf(_Treebuf):

    def __init__(self, tl):
        self._tl = tl._tl
        self._level = tl._level + 1

class Treebuf(_Treebuf):

    r'''A treebuf accumulates tree-structured text to be rendered later.

        >>> t = Treebuf()
        >>> t.add('NP'); t.nl()
        >>> s = t.sub()
        >>> s.add('the'); s.nl()
        >>> print(t.as_text(indent=2), end='')
        NP
          the
    '''

    def as_text(self, indent=3):
        r = Tree_Text_Renderer(indent=indent)
        for func in self._render:
            func(r)
        return r.render()

    def __str__(self):
        return self.as_text()

class Tree_Text_Renderer(object):

    def __init__(self, indent=3):
        self.indent = indent
        self._output = []
        self._margin = 0
        self._column = 0

    def set_level(self, level):
        self._margin = self.indent * level

    def add(self, *text):
        for piece in text:
            if self._column == 0:
                self._column = self._margin
                self._output.append(' ' * self._column)
            piece = str(piece)
            self._column += len(piece)
            self._output.append(piece)

    def nl(self):
        self._output.append('\n')
        self._column = 0

    def render(self):
        return ''.join(self._output)

def _derivation_tree(derivation, tree):
    if derivation.entry is not None:
        e = derivation.entry
        tree.add(e.word, ' := ', e.category, ' : ', e.meaning,
                 '  [%.4f]' % e.weight)
        tree.nl()
        return
    tree.add(derivation.category, ' : ', derivation.meaning)
    if derivation.rule:
        tree.add('  (', derivation.rule, ')')
    tree.nl()
    sub = tree.sub()
    for child in derivation.children:
        _derivation_tree(child, sub)

def format_derivation(derivation, indent=3):
    r'''Render a derivation as an indented tree, root first.

        >>> from ccgwl.grammar import Lexicon, LexicalEntry, NP, NP_NP, parse_all
        >>> from ccgwl.logic import PropertyDescriptor, determiner_meaning, noun_meaning
        >>> lex = Lexicon([LexicalEntry('the', NP_NP, determiner_meaning()),
        ...     LexicalEntry('cube', NP, noun_meaning(PropertyDescriptor('shape', 'cube')), 1.5)])
        >>> print(format_derivation(parse_all(['the', 'cube'], lex)[0]), end='')
        NP : iota(cube(x))  (forward_apply)
           the := NP/NP : lambda p. iota(p)  [0.0000]
           cube := NP : lambda x. cube(x)  [1.5000]
    '''
    tree = Treebuf()
    _derivation_tree(derivation, tree)
    return tree.as_text(indent=indent)

def format_distribution(dist, indent=3):
    r'''Render (derivation, probability) pairs, most probable first.

        >>> from ccgwl.grammar import Lexicon, LexicalEntry, NP, parse_distribution
        >>> from ccgwl.logic import PropertyDescriptor, noun_meaning
        >>> lex = Lexicon([
        ...     LexicalEntry('dax', NP, noun_meaning(PropertyDescriptor('color', 'red'))),
        ...     LexicalEntry('dax', NP, noun_meaning(PropertyDescriptor('shape', 'cube')), 1.0)])
        >>> print(format_distribution(parse_distribution(['dax'], lex)), end='')
        0.7311  dax
           dax := NP : lambda x. cube(x)  [1.0000]
        0.2689  dax
           dax := NP : lambda x. red(x)  [0.0000]
    '''
    tree = Treebuf()
    for derivation, p in sorted(dist, key=lambda dp: (-dp[1],
                                                      dp[0].order_key)):
        tree.add('%.4f  ' % p, ' '.join(derivation.tokens()))
        tree.nl()
        _derivation_tree(derivation, tree.sub())
    return tree.as_text(indent=indent)
