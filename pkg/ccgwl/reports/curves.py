# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Curve tables and the experiment summary.

A curve is written as CSV with the columns trial, mean, ci_low, ci_high.  The
summary is written in the "key value" configuration format, so it can be read
back with ccgwl.config.section.

    >>> import io
    >>> f = io.StringIO()
    >>> dump_curve([CurvePoint(0, 0.0, 0.0, 0.0), CurvePoint(5, 0.25, 0.125, 0.5)], f)
    >>> print(f.getvalue(), end='')
    trial,mean,ci_low,ci_high
    0,0.000000,0.000000,0.000000
    5,0.250000,0.125000,0.500000
    >>> load_curve(io.StringIO(f.getvalue()))[1]
    CurvePoint(trial=5, mean=0.25, ci_low=0.125, ci_high=0.5)
'''

import io
import csv
from ccgwl.input import InputError
from ccgwl.config import lines, remove_comments, section
from ccgwl.experiment import CurvePoint

__all__ = [
        'COLUMNS', 'write_curve', 'dump_curve', 'load_curve',
        'write_summary', 'dump_summary', 'load_summary',
    ]

COLUMNS = ('trial', 'mean', 'ci_low', 'ci_high')

def write_curve(points, path):
    with io.open(path, 'w', encoding='utf8', newline='') as f:
        dump_curve(points, f)

def dump_curve(points, f):
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(COLUMNS)
    for p in points:
        writer.writerow(p.as_row())

def load_curve(source, path=None):
    points = []
    rows = lines(source, path=path)
    header = next(rows, None)
    if header is None or tuple(header.rstrip('\n').split(',')) != COLUMNS:
        raise InputError('expecting header %s' % ','.join(COLUMNS), line=header)
    for line in rows:
        fields = line.rstrip('\n').split(',')
        if len(fields) != len(COLUMNS):
            raise InputError('expecting %d fields' % len(COLUMNS), line=line)
        try:
            points.append(CurvePoint(int(fields[0]),
                                     *[float(x) for x in fields[1:]]))
        except ValueError as e:
            raise InputError(e, line=line)
    return points

def write_summary(items, path):
    with io.open(path, 'w', encoding='utf8') as f:
        dump_summary(items, f)

def dump_summary(items, f):
    r'''Write (key, value) pairs, one per line.

        >>> f = io.StringIO()
        >>> dump_summary([('restarts', 3), ('peak_gap', '0.110000')], f)
        >>> load_summary(io.StringIO(f.getvalue()))
        {'restarts': '3', 'peak_gap': '0.110000'}
    '''
    for key, value in items:
        f.write('%s %s\n' % (key, value))

def load_summary(source, path=None):
    sec = section.parse(remove_comments(lines(source, path=path)))
    return dict((str(key), str(sec.get(key)[0])) for key in sec.keys())
