# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Traceable input.  An L{itext} string remembers where in the input it came
from, using an L{iloc} object which stores a path name, line number, and
column number.  Slices and stripped or split fragments of an L{itext} are also
L{itext} strings, so any fragment of a configuration line or data record can
be handed to L{InputError} to produce a helpful diagnostic.

Input files handled by this package are line oriented, so an L{itext} only
ever spans a single line and carries a single location: that of its first
character.
'''

__all__ = ['itext', 'iloc', 'InputError', 'loc_of']

class iloc(object):

    r'''Describes the location in the input to which an itext corresponds.

        >>> iloc('run.cfg', 14, 7)
        iloc(path='run.cfg', line=14, column=7)
        >>> str(iloc('run.cfg', 14, 7))
        "'run.cfg', line 14, column 7"
        >>> iloc('run.cfg', 5, 10) + 3
        iloc(path='run.cfg', line=5, column=13)
        >>> iloc('run.cfg') + 3
        iloc(path='run.cfg')
    '''

    def __init__(self, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column

    def as_line(self):
        r'''Return an equivalent iloc object without a column number.

            >>> iloc('wah', 14, 7).as_line()
            iloc(path='wah', line=14)
        '''
        return type(self)(path=self.path, line=self.line)

    def __add__(self, n):
        if self.column:
            assert self.column + n > 0
            return type(self)(path=self.path, line=self.line,
                              column=self.column + n)
        return self

    def __sub__(self, n):
        return self.__add__(-n)

    def __str__(self):
        r = []
        if self.path:
            r.append(repr(self.path))
        if self.line:
            r.append('line %d' % self.line)
        if self.column:
            r.append('column %d' % self.column)
        return ', '.join(r)

    def __repr__(self):
        r = []
        if self.path:
            r.append('path=%r' % self.path)
        if self.line:
            r.append('line=%r' % self.line)
        if self.column:
            r.append('column=%r' % self.column)
        return '%s(%s)' % (self.__class__.__name__, ', '.join(r))

    def __eq__(self, other):
        if not isinstance(other, iloc):
            return NotImplemented
        return (self.path, self.line, self.column) == \
               (other.path, other.line, other.column)

    def __hash__(self):
        return hash((self.path, self.line, self.column))

class itext(str):

    r'''A string that knows where its first character came from.

        >>> l = itext('tau 0.5\n', loc=iloc('run.cfg', 3, 1))
        >>> l
        itext('tau 0.5\n', loc=iloc(path='run.cfg', line=3, column=1))
        >>> key, value = l.split(None, 1)
        >>> value
        itext('0.5\n', loc=iloc(path='run.cfg', line=3, column=5))
        >>> value.strip().loc()
        iloc(path='run.cfg', line=3, column=5)
        >>> itext('  x', loc=iloc('f', 1, 1)).lstrip().loc()
        iloc(path='f', line=1, column=3)
        >>> itext('abc')[1:].loc() is None
        True
    '''

    def __new__(cls, text='', loc=None):
        obj = super(itext, cls).__new__(cls, text)
        obj.__loc = loc
        return obj

    def __reduce__(self):
        return (str, (str(self),))

    def loc(self):
        r'''Return the location of the first character, or None.'''
        return self.__loc

    def __repr__(self):
        if self.__loc is None:
            return '%s(%r)' % (self.__class__.__name__, str(self))
        return '%s(%r, loc=%r)' % (self.__class__.__name__, str(self),
                                   self.__loc)

    def _at(self, offset, text):
        loc = None if self.__loc is None else self.__loc + offset
        return type(self)(text, loc=loc)

    def __getitem__(self, index):
        text = str.__getitem__(self, index)
        if isinstance(index, slice):
            start = index.indices(len(self))[0]
        else:
            start = index if index >= 0 else len(self) + index
        return self._at(start, text)

    def lstrip(self, chars=None):
        text = str.lstrip(self, chars)
        return self._at(len(self) - len(text), text)

    def rstrip(self, chars=None):
        return self._at(0, str.rstrip(self, chars))

    def strip(self, chars=None):
        return self.lstrip(chars).rstrip(chars)

    def split(self, sep=None, maxsplit=-1):
        r'''Split like str.split(), locating every piece.

            >>> [p.loc().column for p in
            ...  itext('a  bc d', loc=iloc('f', 1, 1)).split()]
            [1, 4, 7]
        '''
        pieces = []
        pos = 0
        for piece in str.split(self, sep, maxsplit):
            pos = self.find(piece, pos)
            if maxsplit >= 0 and len(pieces) == maxsplit:
                # The last piece runs to the end of the string.
                piece = str.__getitem__(self, slice(pos, None))
                if sep is None:
                    piece = piece.lstrip()
                    pos = len(self) - len(piece)
            pieces.append(self._at(pos, piece))
            pos += len(piece)
        return pieces

def loc_of(obj):
    r'''Return the location of an object that has one, otherwise None.'''
    if obj is None:
        return None
    if isinstance(obj, iloc):
        return obj
    loc = getattr(obj, 'loc', None)
    if callable(loc):
        return loc()
    return loc

class InputError(Exception):

    r'''Raised for malformed input.  The single optional keyword argument
    locates the error: 'loc' takes an iloc, 'char' any located object (whose
    column is reported), 'line' any located object (whose column is dropped).

        >>> e = InputError('wah', loc=iloc('name', 4))
        >>> str(e)
        "'name', line 4: wah"
        >>> str(InputError('wah', char=itext('abc', loc=iloc('f', 2, 9))))
        "'f', line 2, column 9: wah"
        >>> str(InputError('wah', line=itext('abc', loc=iloc('f', 2, 9))))
        "'f', line 2: wah"
        >>> str(InputError('wah'))
        'wah'
        >>> InputError('wah', input=3)
        Traceback (most recent call last):
        TypeError: invalid keyword argument for InputError(): "input="
    '''

    def __init__(self, msg, **kwargs):
        Exception.__init__(self, str(msg))
        if len(kwargs) > 1:
            raise TypeError('%s() expects at most one keyword arg' %
                            self.__class__.__name__)
        self.loc = None
        for key, value in kwargs.items():
            if key == 'loc':
                self.loc = value
            elif key == 'char':
                self.loc = loc_of(value)
            elif key == 'line':
                self.loc = loc_of(value)
                if self.loc is not None:
                    self.loc = self.loc.as_line()
            else:
                raise TypeError('invalid keyword argument for %s(): "%s="' %
                                (self.__class__.__name__, key))

    def __str__(self):
        r = []
        if self.loc is not None:
            r.append(str(self.loc))
        r.append(Exception.__str__(self))
        return ': '.join(r)
