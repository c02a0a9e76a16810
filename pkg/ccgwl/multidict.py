# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Multi-value dictionary.
'''

__all__ = ['multidict']

class multidict(object):

    r'''A multidict is a set of key-value pairs in which each key may have one
    or more values.  It behaves as a dict whose values are tuples.  Setting an
    item appends a value to that item's tuple.  Keys iterate in the order they
    were first set, and each key's values in the order they were set, which is
    what the lexicon relies on for its deterministic tie-breaking.

        >>> d = multidict((('blue', 1), ('ball', 2), ('blue', 3)))
        >>> list(d.keys())
        ['blue', 'ball']
        >>> list(d.items())
        [('blue', 1), ('blue', 3), ('ball', 2)]
    '''

    def __init__(self, data=None):
        self.__data = {}
        self.__len = 0
        if data is not None:
            self.update(data)

    def __len__(self):
        r'''Returns the total number of values, which may be greater than or
        equal to the number of keys.

            >>> d = multidict(((1, 'a'), (2, 'b'), (1, 'A')))
            >>> len(d), len(d.keys())
            (3, 2)
        '''
        return self.__len

    def __getitem__(self, key):
        r'''Return a tuple of all the values that have been set to this key, in
        the order they were set.  Raise KeyError if there are none.

            >>> d = multidict(((1, 'a'), (2, 'b'), (1, 'A')))
            >>> d[1]
            ('a', 'A')
            >>> d[4]
            Traceback (most recent call last):
            KeyError: 4
        '''
        return tuple(self.__data[key])

    def __setitem__(self, key, value):
        self.__data.setdefault(key, []).append(value)
        self.__len += 1

    def __contains__(self, key):
        return key in self.__data

    def __iter__(self):
        return iter(self.keys())

    def keys(self):
        return self.__data.keys()

    def items(self):
        r'''Iterate over (key, value) pairs, grouped by key in first-set order.
        '''
        for key, values in self.__data.items():
            for value in values:
                yield key, value

    def values(self):
        for values in self.__data.values():
            for value in values:
                yield value

    def get(self, key, value=None):
        r'''Return self[key] if key is in self, otherwise return value.

            >>> multidict(((1, 'a'),)).get(2, ())
            ()
        '''
        try:
            return self[key]
        except KeyError:
            return value

    def update(self, data):
        try:
            items = data.items()
        except AttributeError:
            items = data
        for key, value in items:
            self[key] = value

    def copy(self):
        r'''Return a shallow copy of the multidict.

            >>> d = multidict(((1, 'a'), (1, 'A')))
            >>> e = d.copy()
            >>> e[1] = 'x'
            >>> d[1], e[1]
            (('a', 'A'), ('a', 'A', 'x'))
        '''
        return type(self)(self)
