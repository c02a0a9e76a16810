# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Testing.  Runs the doctests of the named modules, or of the whole package:

    python -m ccgwl.test [-v] [module ...]
'''

import sys
import doctest
import pkgutil
import importlib
import optparse

def run_doctest(name, recurse=False, verbose=False):
    r'''Run the doctests of a module and, with recurse, of every module of
    the package it is.  Return true if they all pass.  A module that fails to
    import counts as failing.
    '''
    try:
        mod = importlib.import_module(name)
    except ImportError as e:
        print('%s: cannot test: %s' % (name, e))
        return False
    ret = True
    if verbose:
        print(mod.__name__, mod.__file__)
    try:
        result = doctest.testmod(mod, verbose=verbose,
                                 optionflags=doctest.ELLIPSIS)
    except ValueError as e:
        print('%s: %s' % (name, e))
        ret = False
    else:
        print('%s: ran %u tests, %u failed' % (name, result.attempted,
                                               result.failed))
        if result.failed:
            ret = False
    if recurse and hasattr(mod, '__path__'):
        for info in pkgutil.iter_modules(mod.__path__):
            if info.name == 'test':
                continue
            if not run_doctest('%s.%s' % (name, info.name), recurse=recurse,
                               verbose=verbose):
                ret = False
    return ret

def main(argv=None):
    parser = optparse.OptionParser(usage='%prog [-v] [module ...]')
    parser.add_option('-v', '--verbose', action='store_true', dest='verbose',
                      default=False, help='report every example')
    options, args = parser.parse_args(argv)
    names = args or ['ccgwl']
    ok = True
    for name in names:
        if not run_doctest(name, recurse=not args, verbose=options.verbose):
            ok = False
    return 0 if ok else 1

if __name__ == '__main__':
    sys.exit(main())
