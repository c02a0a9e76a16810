# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Synthetic scenes and reference trials.

A scene holds one to six objects, each with a color, shape, material and size.
A reference trial pairs a scene with an utterance "the COLOR SHAPE" that picks
out exactly one of its objects, the referent.  Material and size never appear
in utterances; they are distractor attributes that a learner might wrongly map
words onto.
'''

import io
import json
import random
import logging
from ccgwl.input import InputError, iloc
from ccgwl.config import ConfigError, DatasetConfig, lines
from ccgwl.logic import (PropertyDescriptor, PropertyConst, Application,
                         Abstraction, Conjunction, Variable, Iota, ENTITY,
                         evaluate)

__all__ = [
        'ATTRIBUTES', 'DETERMINER',
        'SceneObject', 'Scene', 'ReferenceTrial', 'Dataset',
        'object_predicate', 'attribute_is',
        'attribute_inventory', 'gold_form',
        'generate_scene', 'enumerate_trials', 'validate', 'generate_dataset',
    ]

logger = logging.getLogger(__name__)

ATTRIBUTES = ('color', 'shape', 'material', 'size')

DETERMINER = 'the'

VALUE_NAMES = {
    'color': ('red', 'blue', 'green', 'yellow', 'purple', 'cyan', 'brown',
              'gray', 'orange', 'pink'),
    'shape': ('sphere', 'cube', 'cylinder', 'cone', 'torus', 'pyramid',
              'prism', 'ring', 'star', 'disk'),
    'material': ('metal', 'rubber', 'glass', 'wood', 'plastic', 'stone',
                 'cloth', 'paper', 'clay', 'wax'),
    'size': ('tiny', 'small', 'little', 'medium', 'large', 'big', 'huge',
             'giant', 'vast', 'colossal'),
}

def _value_names(attribute, count):
    names = list(VALUE_NAMES[attribute][:count])
    for i in range(len(names), count):
        names.append('%s%d' % (attribute, i + 1))
    return tuple(names)

def attribute_inventory(config=None):
    r'''Return a dict mapping each attribute to the tuple of its values, in
    canonical order.  Inventories larger than the built-in name lists use
    generated names.

        >>> inv = attribute_inventory(DatasetConfig(colors=3, shapes=2, materials=12))
        >>> inv['color'], inv['shape']
        (('red', 'blue', 'green'), ('sphere', 'cube'))
        >>> inv['material'][-3:]
        ('wax', 'material11', 'material12')
    '''
    if config is None:
        config = DatasetConfig()
    counts = {'color': config.colors, 'shape': config.shapes,
              'material': config.materials, 'size': config.sizes}
    for attribute in ATTRIBUTES:
        if counts[attribute] < 1:
            raise ConfigError('empty %s inventory' % attribute)
    return dict((a, _value_names(a, counts[a])) for a in ATTRIBUTES)

class SceneObject(object):

    __slots__ = ('id', 'color', 'shape', 'material', 'size')

    def __init__(self, id, color, shape, material, size):
        self.id = id
        self.color = color
        self.shape = shape
        self.material = material
        self.size = size

    def attribute(self, name):
        if name not in ATTRIBUTES:
            raise KeyError(name)
        return getattr(self, name)

    def values(self):
        return tuple(getattr(self, a) for a in ATTRIBUTES)

    def has(self, descriptor):
        return self.attribute(descriptor.type) == descriptor.value

    def descriptors(self):
        r'''Iterate over the object's property values as descriptors.'''
        for a in ATTRIBUTES:
            yield PropertyDescriptor(a, getattr(self, a))

    def as_record(self):
        d = {'id': self.id}
        d.update((a, getattr(self, a)) for a in ATTRIBUTES)
        return d

    def __eq__(self, other):
        if not isinstance(other, SceneObject):
            return NotImplemented
        return self.id == other.id and self.values() == other.values()

    def __ne__(self, other):
        ret = self.__eq__(other)
        return ret if ret is NotImplemented else not ret

    def __hash__(self):
        return hash((self.id,) + self.values())

    def __repr__(self):
        return '%s(%r, %s)' % (self.__class__.__name__, self.id,
                               ', '.join(map(repr, self.values())))

class object_predicate(object):

    r'''An object predicate P is a callable P(SceneObject) which returns True
    if the object satisfies the criteria of the predicate.  Predicates combine
    with the operators '&', '|' and '~'.

        >>> blue_ball = attribute_is('color', 'blue') & attribute_is('shape', 'sphere')
        >>> blue_ball(SceneObject(0, 'blue', 'sphere', 'wood', 'tiny'))
        True
        >>> (~blue_ball)(SceneObject(1, 'blue', 'cube', 'wood', 'tiny'))
        True
    '''

    def __init__(self, func):
        self._func = func

    def __call__(self, obj):
        assert isinstance(obj, SceneObject), '%r is not a SceneObject' % obj
        return self._func(obj)

    def __and__(self, other):
        if not isinstance(other, object_predicate):
            return NotImplemented
        return object_predicate(lambda obj: self._func(obj) and other._func(obj))

    def __or__(self, other):
        if not isinstance(other, object_predicate):
            return NotImplemented
        return object_predicate(lambda obj: self._func(obj) or other._func(obj))

    def __invert__(self):
        return object_predicate(lambda obj: not self._func(obj))

def attribute_is(attribute, value):
    return object_predicate(lambda obj: obj.attribute(attribute) == value)

class Scene(object):

    r'''An ordered collection of one to six objects with distinct ids.

        >>> Scene([])
        Traceback (most recent call last):
        ValueError: a scene needs 1 to 6 objects, not 0
        >>> Scene([SceneObject(0, 'red', 'cube', 'wax', 'big')] * 2)
        Traceback (most recent call last):
        ValueError: duplicate object id 0
    '''

    MAX_OBJECTS = DatasetConfig.MAX_OBJECTS

    def __init__(self, objects):
        self.objects = tuple(objects)
        if not 1 <= len(self.objects) <= self.MAX_OBJECTS:
            raise ValueError('a scene needs 1 to %d objects, not %d' %
                             (self.MAX_OBJECTS, len(self.objects)))
        self._by_id = {}
        for obj in self.objects:
            if obj.id in self._by_id:
                raise ValueError('duplicate object id %r' % obj.id)
            self._by_id[obj.id] = obj

    def __len__(self):
        return len(self.objects)

    def __iter__(self):
        return iter(self.objects)

    def object(self, id):
        return self._by_id[id]

    def ids(self):
        return frozenset(self._by_id)

    def select(self, pred):
        r'''Return the objects that satisfy an object predicate.'''
        return [obj for obj in self.objects if pred(obj)]

    def __eq__(self, other):
        if not isinstance(other, Scene):
            return NotImplemented
        return self.objects == other.objects

    def __ne__(self, other):
        ret = self.__eq__(other)
        return ret if ret is NotImplemented else not ret

    def __hash__(self):
        return hash(self.objects)

    def __repr__(self):
        return '%s(%r)' % (self.__class__.__name__, list(self.objects))

class ReferenceTrial(object):

    __slots__ = ('scene', 'utterance', 'referent')

    def __init__(self, scene, utterance, referent):
        self.scene = scene
        self.utterance = tuple(utterance)
        self.referent = referent
        assert referent in scene.ids(), 'referent %r not in scene' % referent

    def as_record(self):
        return {'scene': [obj.as_record() for obj in self.scene],
                'utterance': list(self.utterance),
                'referent': self.referent}

    @classmethod
    def from_record(class_, record):
        objects = [SceneObject(o['id'], *[o[a] for a in ATTRIBUTES])
                   for o in record['scene']]
        return class_(Scene(objects), record['utterance'], record['referent'])

    def __eq__(self, other):
        if not isinstance(other, ReferenceTrial):
            return NotImplemented
        return (self.scene, self.utterance, self.referent) == \
               (other.scene, other.utterance, other.referent)

    def __ne__(self, other):
        ret = self.__eq__(other)
        return ret if ret is NotImplemented else not ret

    def __hash__(self):
        return hash((self.scene, self.utterance, self.referent))

    def __repr__(self):
        return '%s(%r, %r)' % (self.__class__.__name__,
                               ' '.join(self.utterance), self.referent)

def gold_form(color, shape):
    r'''Return the logical form of "the COLOR SHAPE".

        >>> print(gold_form('blue', 'sphere'))
        iota(and(sphere(x),blue(x)))
    '''
    def holds(attribute, value):
        return Application(PropertyConst(PropertyDescriptor(attribute, value)),
                           Variable(0))
    return Iota(Abstraction(ENTITY, Conjunction(holds('shape', shape),
                                                holds('color', color))))

def validate(form, scene):
    r'''Return the denotation of a logical form in a scene, as a frozenset of
    object ids.  Never fails on a well-formed closed form: an empty set means
    nothing satisfies it.

    Random conjunctions of one to three properties denote exactly the objects
    that carry all of them:

        >>> from ccgwl.logic import (beta_reduce, noun_meaning, modifier_meaning,
        ...                          determiner_meaning)
        >>> rng = random.Random(2)
        >>> config = DatasetConfig(colors=3, shapes=3, materials=3, sizes=3)
        >>> inv = attribute_inventory(config)
        >>> def random_form():
        ...     ds = [PropertyDescriptor(a, rng.choice(inv[a]))
        ...           for a in rng.sample(ATTRIBUTES, rng.randint(1, 3))]
        ...     form = noun_meaning(ds[0])
        ...     for d in ds[1:]:
        ...         form = Application(modifier_meaning(d), form)
        ...     return ds, beta_reduce(Application(determiner_meaning(), form))
        >>> def holders(ds, scene):
        ...     return frozenset(o.id for o in scene if all(o.has(d) for d in ds))
        >>> agree = []
        >>> for i in range(500):
        ...     scene = generate_scene(rng, config, inv)
        ...     ds, form = random_form()
        ...     agree.append(validate(form, scene) == holders(ds, scene))
        >>> all(agree)
        True
    '''
    return evaluate(form, scene)

def generate_scene(rng, config, inventory=None):
    r'''Sample a scene: the object count is uniform over the configured range
    and every attribute value is uniform over its inventory, independently.

        >>> from scipy.stats import chisquare
        >>> rng = random.Random(0)
        >>> config = DatasetConfig()
        >>> scenes = [generate_scene(rng, config) for i in range(10000)]
        >>> counts = dict.fromkeys(attribute_inventory(config)['color'], 0)
        >>> for scene in scenes:
        ...     for obj in scene:
        ...         counts[obj.color] += 1
        >>> bool(chisquare(list(counts.values())).pvalue > 0.01)
        True
        >>> sorted(set(len(s) for s in scenes))
        [1, 2, 3, 4, 5, 6]
        >>> sizes = [sum(1 for s in scenes if len(s) == n) for n in range(1, 7)]
        >>> bool(chisquare(sizes).pvalue > 0.001)
        True
    '''
    if inventory is None:
        inventory = attribute_inventory(config)
    n = rng.randint(config.min_objects, config.max_objects)
    objects = []
    for i in range(n):
        objects.append(SceneObject(i, *[rng.choice(inventory[a])
                                        for a in ATTRIBUTES]))
    return Scene(objects)

def enumerate_trials(scene, inventory=None):
    r'''Return every trial "the COLOR SHAPE" whose gold form denotes exactly
    one object of the scene, ordered by color then shape (inventory order if
    an inventory is given, otherwise alphabetical).

        >>> scene = Scene([SceneObject(0, 'blue', 'sphere', 'metal', 'small'),
        ...                SceneObject(1, 'blue', 'sphere', 'rubber', 'large'),
        ...                SceneObject(2, 'red', 'cube', 'metal', 'large')])
        >>> enumerate_trials(scene)
        [ReferenceTrial('the red cube', 2)]
        >>> all(validate(gold_form(*t.utterance[1:]), scene) == {t.referent}
        ...     for t in enumerate_trials(scene))
        True

    Checked against every color and shape pair of the inventory:

        >>> rng = random.Random(1)
        >>> config = DatasetConfig(colors=3, shapes=3)
        >>> inv = attribute_inventory(config)
        >>> def every_pair(scene):
        ...     found = []
        ...     for c in inv['color']:
        ...         for s in inv['shape']:
        ...             ids = [o.id for o in scene if o.color == c and o.shape == s]
        ...             if len(ids) == 1:
        ...                 found.append(ReferenceTrial(scene, (DETERMINER, c, s),
        ...                                             ids[0]))
        ...     return found
        >>> scenes = [generate_scene(rng, config, inv) for i in range(300)]
        >>> all(enumerate_trials(s, inv) == every_pair(s) for s in scenes)
        True
        >>> config = DatasetConfig()
        >>> inv = attribute_inventory(config)
        >>> scenes = [generate_scene(rng, config, inv) for i in range(100)]
        >>> all(enumerate_trials(s, inv) == every_pair(s) for s in scenes)
        True
    '''
    if inventory is not None:
        order = dict((a, dict((v, i) for i, v in enumerate(inventory[a])))
                     for a in ('color', 'shape'))
        key = lambda obj: (order['color'][obj.color], order['shape'][obj.shape])
    else:
        key = lambda obj: (obj.color, obj.shape)
    trials = []
    for obj in sorted(scene, key=key):
        pred = attribute_is('color', obj.color) & attribute_is('shape', obj.shape)
        if len(scene.select(pred)) == 1:
            trials.append(ReferenceTrial(scene, (DETERMINER, obj.color,
                                                 obj.shape), obj.id))
    return trials

class Dataset(object):

    r'''A train split and a test split of reference trials, together with the
    attribute inventory they were drawn from.
    '''

    def __init__(self, inventory, train, test):
        self.inventory = inventory
        self.train = list(train)
        self.test = list(test)

    def known_words(self):
        return frozenset(w for t in self.train for w in t.utterance)

    def save(self, path):
        r'''Write the dataset as JSON lines: an inventory header followed by
        one record per trial.
        '''
        with io.open(path, 'w', encoding='utf8') as f:
            self.dump(f)

    def dump(self, f):
        f.write(json.dumps({'inventory': dict((a, list(self.inventory[a]))
                                              for a in ATTRIBUTES)}) + '\n')
        for split, trials in (('train', self.train), ('test', self.test)):
            for trial in trials:
                record = {'split': split}
                record.update(trial.as_record())
                f.write(json.dumps(record) + '\n')

    @classmethod
    def load(class_, source, path=None):
        r'''Read a dataset written by dump() or save().

            >>> d = generate_dataset(random.Random(3), DatasetConfig(train=4, test=2))
            >>> f = io.StringIO()
            >>> d.dump(f)
            >>> e = Dataset.load(io.StringIO(f.getvalue()))
            >>> e.train == d.train and e.test == d.test and e.inventory == d.inventory
            True
            >>> Dataset.load(io.StringIO('{"split": "train"}\n'), path='d.jsonl')
            Traceback (most recent call last):
            ccgwl.input.InputError: 'd.jsonl', line 1: missing inventory header
        '''
        inventory = None
        splits = {'train': [], 'test': []}
        for line in lines(source, path=path):
            if line.isspace():
                continue
            try:
                record = json.loads(line)
            except ValueError as e:
                raise InputError('malformed record: %s' % e, line=line)
            if inventory is None:
                if 'inventory' not in record:
                    raise InputError('missing inventory header', line=line)
                try:
                    inventory = dict((a, tuple(record['inventory'][a]))
                                     for a in ATTRIBUTES)
                except (KeyError, TypeError):
                    raise InputError('malformed inventory header', line=line)
                continue
            try:
                splits[record.get('split', 'train')].append(
                        ReferenceTrial.from_record(record))
            except (KeyError, TypeError, ValueError, AssertionError) as e:
                raise InputError('malformed trial record: %s' % (e,),
                                 line=line)
        if inventory is None:
            raise InputError('empty dataset', loc=iloc(path=path))
        return class_(inventory, splits['train'], splits['test'])

def _sample_trials(rng, config, inventory, count, accept=None):
    attempts = 0
    limit = 1000 * max(count, 1)
    trials = []
    while len(trials) < count:
        attempts += 1
        if attempts > limit:
            raise ConfigError('cannot draw %d acceptable trials' % count)
        candidates = enumerate_trials(generate_scene(rng, config, inventory),
                                      inventory)
        if not candidates:
            continue
        trial = rng.choice(candidates)
        if accept is None or accept(trial):
            trials.append(trial)
    return trials

def generate_dataset(rng, config):
    r'''Generate a Dataset.  Train and test trials are drawn from independent
    streams seeded from rng, so the same seed always produces the same
    dataset.  With known_words_only, test trials using any word absent from
    the train split are redrawn.

        >>> a = generate_dataset(random.Random(5), DatasetConfig(train=30, test=10))
        >>> b = generate_dataset(random.Random(5), DatasetConfig(train=30, test=10))
        >>> a.train == b.train and a.test == b.test
        True
        >>> len(a.train), len(a.test)
        (30, 10)
        >>> k = generate_dataset(random.Random(5), DatasetConfig(
        ...         train=30, test=10, known_words_only=True))
        >>> all(w in k.known_words() for t in k.test for w in t.utterance)
        True
    '''
    inventory = attribute_inventory(config)
    train_rng = random.Random(rng.getrandbits(64))
    test_rng = random.Random(rng.getrandbits(64))
    train = _sample_trials(train_rng, config, inventory, config.train)
    accept = None
    if config.known_words_only:
        known = frozenset(w for t in train for w in t.utterance)
        accept = lambda trial: all(w in known for w in trial.utterance)
    test = _sample_trials(test_rng, config, inventory, config.test, accept)
    logger.info('dataset train=%d test=%d known_words_only=%s',
                len(train), len(test), config.known_words_only)
    return Dataset(inventory, train, test)
