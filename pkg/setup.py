#!/usr/bin/env python3
# vim: sw=4 sts=4 et fileencoding=utf-8 nomod

from setuptools import setup

setup(name='ccgwl',
      version='0.1',
      description='Grounded categorial-grammar word learner with a learned '
                  'syntax-to-property overhypothesis',
      packages=['ccgwl', 'ccgwl.reports'],
      scripts=['scripts/ccgwl'],
      python_requires='>=3.6',
      install_requires=['reportlab', 'numpy', 'scipy'],
     )
