# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Grounded word learning with a combinatory categorial grammar and a learned
overhypothesis about which property types map to which syntactic categories.
'''

__version__ = '0.1'
