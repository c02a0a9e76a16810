# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Configuration files and settings.

A configuration file holds one "key value" pair per line.  Indented lines form
a sub-section attached to the immediately preceding less indented key, which
may then omit its value.  Lines starting with '#' are comments and blank lines
are ignored.

    # two hundred trials, five restarts
    seed 7
    restarts 5
    dataset
        train 200
        known_words_only yes
    learner
        tau 0.5

The environment variable CCGWL_SEED, if set, overrides the experiment's master
seed.
'''

import os
import io
import enum
import logging
from ccgwl.input import *
from ccgwl.multidict import multidict

__all__ = [
        'ConfigError', 'Mode',
        'lines', 'remove_comments', 'blocks', 'controls', 'section',
        'Settings', 'DatasetConfig', 'LearnerConfig', 'ExperimentConfig',
        'load_experiment_config', 'seed_from_environ',
        'SEED_ENVIRON',
    ]

logger = logging.getLogger(__name__)

SEED_ENVIRON = 'CCGWL_SEED'

class ConfigError(InputError):
    pass

class Mode(enum.Enum):

    r'''Learner variant.  The two variants differ only in how the weights of
    newly induced lexical entries are initialised.

        >>> Mode.parse('overhyp') is Mode.parse('overhypothesis')
        True
        >>> Mode.parse('bayes')
        Traceback (most recent call last):
        ccgwl.config.ConfigError: invalid mode 'bayes' (expecting base or overhyp)
    '''

    BASE = 'base'
    OVERHYPOTHESIS = 'overhyp'

    @classmethod
    def parse(class_, text):
        if isinstance(text, class_):
            return text
        text = str(text).strip().lower()
        if text == 'overhypothesis':
            text = 'overhyp'
        try:
            return class_(text)
        except ValueError:
            raise ConfigError('invalid mode %r (expecting base or overhyp)'
                              % text)

    def __str__(self):
        return self.value

def lines(source, path=None):
    r'''Iterate over the lines of a file (given as a path or an open text
    file) as located itext strings.

        >>> ls = list(lines(io.StringIO('a 1\nb 2\n'), path='x.cfg'))
        >>> ls[1]
        itext('b 2\n', loc=iloc(path='x.cfg', line=2, column=1))
    '''
    if isinstance(source, str):
        with io.open(source, 'r', encoding='utf8') as f:
            for line in lines(f, path=source):
                yield line
        return
    lnum = 1
    try:
        for line in source:
            yield itext(line, loc=iloc(path=path, line=lnum, column=1))
            lnum += 1
    except UnicodeDecodeError as e:
        raise InputError(e, loc=iloc(path=path, line=lnum))

def remove_comments(lines):
    r'''Filter out comment lines.'''
    for line in lines:
        if not line.lstrip().startswith('#'):
            yield line

def blocks(lines):
    r'''Group lines into blocks.  Blocks are contiguous sequences of lines
    separated by one or more blank lines, and are yielded as lists of lines.

        >>> list(blocks(['a\n', '\n', '\n', 'b\n', 'c\n']))
        [['a\n'], ['b\n', 'c\n']]
    '''
    block = []
    for line in lines:
        if line.isspace():
            if block:
                yield block
                block = []
        else:
            block.append(line)
    if block:
        yield block

def controls(block, dispatch):
    r'''Parse a block of control lines by dispatching the real work to a
    mapping keyed by the first word following the leading '%'.  The dispatched
    callable is passed the remainder of the line as its single argument, or no
    argument if there is no remaining text.

        >>> res = []
        >>> controls(['%mode base\n', '%step 12\n', '%frozen\n'],
        ...     {'mode': lambda a: res.append(('mode', a)),
        ...      'step': lambda a: res.append(('step', int(a))),
        ...      'frozen': lambda: res.append('frozen')})
        >>> res
        [('mode', 'base'), ('step', 12), 'frozen']
        >>> controls(['%colour red\n'], {})
        Traceback (most recent call last):
        ccgwl.input.InputError: unsupported control "%colour"
    '''
    for line in block:
        if not line.startswith('%'):
            raise InputError('illegal non-control line in a control block',
                             line=line)
        text = line[1:].rstrip('\n')
        spl = text.split(None, 1)
        if not spl:
            raise InputError('empty control line', line=line)
        word1 = spl.pop(0)
        try:
            func = dispatch[word1]
        except KeyError:
            raise InputError('unsupported control "%s"' % ('%' + word1),
                             line=line)
        try:
            func(*spl)
        except TypeError:
            if spl:
                raise InputError('unwanted extra text after "%s"' %
                                 ('%' + word1), char=spl[0])
            raise InputError('%s requires extra text' % ('%' + word1),
                             line=line)

class section(object):

    r'''A section holds the keys and values parsed from a sequence of input
    lines.  Indented lines are parsed into their own sub-section, attached to
    the immediately preceding less indented line.

        >>> s = section.parse(['seed 3\n', 'dataset\n', '  train 10\n',
        ...                    '  test 4\n', 'restarts 2\n'])
        >>> list(s.keys())
        ['seed', 'dataset', 'restarts']
        >>> s.get('seed')
        ('3', None)
        >>> sub = s.get('dataset')[1]
        >>> sub.get('test')
        ('4', None)
        >>> s.get('jobs')
        Traceback (most recent call last):
        ccgwl.input.InputError: missing 'jobs'
        >>> section.parse(['a 1\n', 'a 2\n']).get('a')
        Traceback (most recent call last):
        ccgwl.input.InputError: duplicate 'a'
        >>> section.parse(['  a 1\n'])
        Traceback (most recent call last):
        ccgwl.input.InputError: illegal indentation
    '''

    def __init__(self, loc=None):
        self._data = multidict()
        self._loc = loc

    def loc(self):
        return self._loc

    def __len__(self):
        return len(self._data)

    def __contains__(self, key):
        return key in self._data

    def keys(self):
        return self._data.keys()

    def get(self, key):
        entries = self._data.get(key, ())
        if not entries:
            raise InputError('missing %r' % key, loc=self._loc)
        if len(entries) > 1:
            raise InputError('duplicate %r' % key, line=entries[1]['key'])
        return entries[0]['value'], entries[0]['sub']

    def key_text(self, key):
        r'''Return the located text of the (first) given key.'''
        return self._data[key][0]['key']

    @classmethod
    def parse(class_, lines):
        top = class_()
        stack = [(0, top)]
        last = None
        for line in lines:
            if line.isspace():
                continue
            stripped = line.lstrip()
            indent = len(line) - len(stripped)
            if indent > stack[-1][0]:
                if last is None or last['sub'] is not None:
                    raise InputError('illegal indentation', line=line)
                last['sub'] = class_(loc=loc_of(line))
                stack.append((indent, last['sub']))
            else:
                while indent < stack[-1][0]:
                    stack.pop()
                if indent != stack[-1][0]:
                    raise InputError('illegal indentation', line=line)
            spl = stripped.rstrip().split(None, 1)
            key = spl[0]
            value = spl[1] if len(spl) > 1 else None
            last = {'key': key, 'value': value, 'sub': None}
            stack[-1][1]._data[str(key)] = last
        return top

# Value converters.  Each takes a string or a Python value and raises
# ValueError if it is out of range.

def positive_int(value):
    n = int(value)
    if n < 1:
        raise ValueError('must be a positive integer')
    return n

def nonneg_int(value):
    n = int(value)
    if n < 0:
        raise ValueError('must not be negative')
    return n

def positive_float(value):
    x = float(value)
    if not x > 0 or x == float('inf'):
        raise ValueError('must be a positive number')
    return x

def nonneg_float(value):
    x = float(value)
    if not x >= 0 or x == float('inf'):
        raise ValueError('must be a non-negative number')
    return x

def boolean(value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ('yes', 'true', 'on', '1'):
        return True
    if text in ('no', 'false', 'off', '0'):
        return False
    raise ValueError('must be yes or no')

def text(value):
    return str(value).strip()

def mode(value):
    try:
        return Mode.parse(value)
    except ConfigError as e:
        raise ValueError(str(e))

class Settings(object):

    r'''Base class of a group of named, validated settings.  Subclasses list
    their fields as (name, converter, default) triples, and may list nested
    settings groups as (name, class) pairs.
    '''

    fields = ()
    sections = ()

    def __init__(self, **kwargs):
        names = dict((f[0], f) for f in self.fields)
        subs = dict(self.sections)
        for key in kwargs:
            if key not in names and key not in subs:
                raise ConfigError('unknown setting %r for %s' %
                                  (key, self.__class__.__name__))
        for name, convert, default in self.fields:
            value = kwargs.get(name, default)
            if value is not None:
                try:
                    value = convert(value)
                except (ValueError, TypeError) as e:
                    raise ConfigError('invalid %s %r: %s' % (name, value, e))
            setattr(self, name, value)
        for name, class_ in self.sections:
            value = kwargs.get(name)
            if value is None:
                value = class_()
            elif not isinstance(value, class_):
                raise ConfigError('%s must be %s' % (name, class_.__name__))
            setattr(self, name, value)
        self.check()

    def check(self):
        r'''Raise ConfigError if the settings are inconsistent.'''
        pass

    def replace(self, **kwargs):
        r'''Return a copy with some settings changed.'''
        return type(self)(**dict(self.as_dict(), **kwargs))

    def as_dict(self):
        d = dict((f[0], getattr(self, f[0])) for f in self.fields)
        d.update((s[0], getattr(self, s[0])) for s in self.sections)
        return d

    @classmethod
    def from_section(class_, sec):
        r'''Construct settings from a parsed configuration section, reporting
        errors at the offending line.
        '''
        names = dict((f[0], f) for f in class_.fields)
        subs = dict(class_.sections)
        kwargs = {}
        for key in sec.keys():
            value, sub = sec.get(key)
            if key in subs:
                if value is not None:
                    raise ConfigError('unwanted value after %r' % key,
                                      char=value)
                kwargs[key] = subs[key].from_section(sub or section())
            elif key in names:
                if sub is not None:
                    raise ConfigError('%r takes no sub-section' % key,
                                      line=sec.key_text(key))
                if value is None:
                    raise ConfigError('missing value for %r' % key,
                                      line=sec.key_text(key))
                try:
                    kwargs[key] = names[key][1](str(value))
                except ValueError as e:
                    raise ConfigError('invalid %s %r: %s' % (key, str(value), e),
                                      char=value)
            else:
                raise ConfigError('unknown setting %r' % key,
                                  char=sec.key_text(key))
        try:
            return class_(**kwargs)
        except ConfigError as e:
            if e.loc is None:
                e.loc = sec.loc()
            raise

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __ne__(self, other):
        ret = self.__eq__(other)
        return ret if ret is NotImplemented else not ret

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__,
                ', '.join('%s=%r' % (f[0], getattr(self, f[0]))
                          for f in self.fields + tuple(self.sections)))

class DatasetConfig(Settings):

    r'''Scene and dataset generation settings.  The four inventory sizes
    count the values of each attribute.

        >>> c = DatasetConfig()
        >>> c.colors, c.shapes, c.materials, c.sizes, c.train, c.test
        (10, 10, 10, 10, 400, 100)
        >>> DatasetConfig(colors=0)
        Traceback (most recent call last):
        ccgwl.config.ConfigError: invalid colors 0: must be a positive integer
        >>> DatasetConfig(min_objects=4, max_objects=3)
        Traceback (most recent call last):
        ccgwl.config.ConfigError: min_objects exceeds max_objects
    '''

    MAX_OBJECTS = 6

    fields = (
            ('colors', positive_int, 10),
            ('shapes', positive_int, 10),
            ('materials', positive_int, 10),
            ('sizes', positive_int, 10),
            ('train', nonneg_int, 400),
            ('test', nonneg_int, 100),
            ('seed', int, 0),
            ('min_objects', positive_int, 1),
            ('max_objects', positive_int, MAX_OBJECTS),
            ('known_words_only', boolean, False),
        )

    def check(self):
        if self.max_objects > self.MAX_OBJECTS:
            raise ConfigError('max_objects exceeds %d' % self.MAX_OBJECTS)
        if self.min_objects > self.max_objects:
            raise ConfigError('min_objects exceeds max_objects')

class LearnerConfig(Settings):

    r'''Learner settings.  tau is the concentration temperature, rho_s and
    rho_w the Dirichlet scales, margin the perceptron margin, epsilon the
    upper bound of the base learner's random initial weights, and kappa the
    scale of the overhypothesis learner's prior initial weights.

        >>> c = LearnerConfig(mode='overhyp', tau='0.5')
        >>> c.mode, c.tau, c.margin
        (<Mode.OVERHYPOTHESIS: 'overhyp'>, 0.5, 1.0)
        >>> LearnerConfig(tau=0)
        Traceback (most recent call last):
        ccgwl.config.ConfigError: invalid tau 0: must be a positive number
    '''

    fields = (
            ('mode', mode, Mode.BASE),
            ('tau', positive_float, 1.0),
            ('rho_s', positive_float, 1.0),
            ('rho_w', positive_float, 1.0),
            ('margin', nonneg_float, 1.0),
            ('epsilon', nonneg_float, 0.001),
            ('kappa', positive_float, 1.0),
            ('seed', int, 0),
        )

class ExperimentConfig(Settings):

    r'''Experiment settings: the dataset, the learner settings shared by both
    variants, and the restart protocol.

        >>> c = ExperimentConfig.parse(io.StringIO(
        ...     'seed 7\nrestarts 5\ndataset\n  train 20\n'
        ...     'learner\n  tau 0.5\n'), path='x.cfg')
        >>> c.seed, c.restarts, c.dataset.train, c.learner.tau
        (7, 5, 20, 0.5)
        >>> ExperimentConfig.parse(io.StringIO('restarts x\n'), path='x.cfg')
        Traceback (most recent call last):
        ccgwl.config.ConfigError: 'x.cfg', line 1, column 10: invalid restarts 'x': invalid literal for int() with base 10: 'x'
        >>> ExperimentConfig.parse(io.StringIO('dataset\n  trian 3\n'), path='x.cfg')
        Traceback (most recent call last):
        ccgwl.config.ConfigError: 'x.cfg', line 2, column 3: unknown setting 'trian'
    '''

    fields = (
            ('seed', int, 0),
            ('restarts', positive_int, 50),
            ('cadence', positive_int, 1),
            ('bootstrap', positive_int, 10000),
            ('jobs', positive_int, 1),
            ('out', text, 'results'),
        )

    sections = (
            ('dataset', DatasetConfig),
            ('learner', LearnerConfig),
        )

    def check(self):
        if self.dataset.test < 1:
            raise ConfigError('an experiment needs a non-empty test set')

    @classmethod
    def parse(class_, source, path=None):
        return class_.from_section(
                section.parse(remove_comments(lines(source, path=path))))

def seed_from_environ(default, environ=None):
    r'''Return the seed given by the CCGWL_SEED environment variable, or the
    default if it is not set.

        >>> seed_from_environ(3, {})
        3
        >>> seed_from_environ(3, {'CCGWL_SEED': '11'})
        11
        >>> seed_from_environ(3, {'CCGWL_SEED': 'x'})
        Traceback (most recent call last):
        ccgwl.config.ConfigError: invalid CCGWL_SEED 'x'
    '''
    if environ is None:
        environ = os.environ
    value = environ.get(SEED_ENVIRON)
    if value is None or not value.strip():
        return default
    try:
        seed = int(value)
    except ValueError:
        raise ConfigError('invalid %s %r' % (SEED_ENVIRON, value))
    logger.info('seed=%d source=%s', seed, SEED_ENVIRON)
    return seed

def load_experiment_config(path=None, environ=None, **overrides):
    r'''Load an experiment configuration file (or the defaults, if no path is
    given), apply explicit overrides, then the environment's seed override.

        >>> load_experiment_config(restarts=3, environ={'CCGWL_SEED': '5'}).seed
        5
    '''
    config = ExperimentConfig() if path is None else ExperimentConfig.parse(path)
    overrides = dict((k, v) for k, v in overrides.items() if v is not None)
    if overrides:
        config = config.replace(**overrides)
    seed = seed_from_environ(config.seed, environ)
    if seed != config.seed:
        config = config.replace(seed=seed)
    return config
