# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Experiment reports: curve tables, a summary, and plots.
'''

import os
import logging
from ccgwl.reports.curves import write_curve, write_summary
from ccgwl.reports.plots import plot_accuracy, plot_gap_belief

__all__ = ['emit_report']

logger = logging.getLogger(__name__)

def emit_report(result, outdir):
    r'''Write every report of an ExperimentResult into a directory, creating
    it if need be, and return the paths written.
    '''
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for name in sorted(result.curves):
        path = os.path.join(outdir, name + '.csv')
        write_curve(result.curves[name], path)
        paths.append(path)
    path = os.path.join(outdir, 'summary.txt')
    write_summary(result.summary(), path)
    paths.append(path)
    path = os.path.join(outdir, 'accuracy.pdf')
    plot_accuracy(result.curves['accuracy_base'],
                  result.curves['accuracy_overhyp'], path)
    paths.append(path)
    path = os.path.join(outdir, 'gap_belief.pdf')
    plot_gap_belief(result.curves['gap'], result.curves['belief'], path)
    paths.append(path)
    logger.info('report dir=%s files=%d', outdir, len(paths))
    return paths
