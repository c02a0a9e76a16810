# vim: sw=4 sts=4 et fileencoding=utf8 nomod

r'''Vector plots of experiment curves, drawn with reportlab graphics and
written as PDF.

    accuracy.pdf    mean accuracy of both learners, with confidence bands
    gap_belief.pdf  the accuracy gap (left axis) and the overhypothesis
                    belief (right axis)
'''

import math
from reportlab.lib import colors
from reportlab.lib.units import cm
from reportlab.graphics.shapes import (Drawing, Group, Line, PolyLine, Polygon,
                                      String)
from reportlab.graphics import renderPDF

__all__ = [
        'ticks', 'Axes', 'accuracy_drawing', 'gap_belief_drawing',
        'plot_accuracy', 'plot_gap_belief',
    ]

WIDTH = 16 * cm
HEIGHT = 10 * cm
LEFT = 1.6 * cm
RIGHT = 1.6 * cm
BOTTOM = 1.4 * cm
TOP = 1.0 * cm
FONT = 'Helvetica'
FONT_SIZE = 8

BASE_COLOR = colors.Color(0.55, 0.55, 0.55)
OVERHYP_COLOR = colors.Color(0.1, 0.3, 0.7)
GAP_COLOR = colors.Color(0.1, 0.3, 0.7)
BELIEF_COLOR = colors.Color(0.75, 0.2, 0.1)

def ticks(lo, hi, count=5):
    r'''Return round tick values covering [lo, hi], about 'count' of them.

        >>> ticks(0, 1)
        [0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]
        >>> ticks(0, 400)
        [0.0, 100.0, 200.0, 300.0, 400.0]
        >>> ticks(3, 3)
        [3.0]
    '''
    if hi <= lo:
        return [float(lo)]
    raw = (hi - lo) / count
    magnitude = 10.0 ** math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        step = m * magnitude
        if step >= raw:
            break
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [i * step for i in range(first, last + 1)]

class Axes(object):

    r'''Maps data coordinates onto a rectangle of a drawing.

        >>> a = Axes(10, 20, 100, 50, (0, 10), (0, 1))
        >>> a.point(0, 0), a.point(10, 1), a.point(5, 0.5)
        ((10.0, 20.0), (110.0, 70.0), (60.0, 45.0))
    '''

    def __init__(self, x0, y0, width, height, xrange, yrange):
        self.x0 = x0
        self.y0 = y0
        self.width = width
        self.height = height
        self.xrange = xrange
        self.yrange = yrange

    def _scale(self, value, lo, hi, origin, extent):
        if hi == lo:
            return float(origin)
        return origin + (value - lo) * extent / (hi - lo)

    def point(self, x, y):
        return (self._scale(x, self.xrange[0], self.xrange[1], self.x0,
                            self.width),
                self._scale(y, self.yrange[0], self.yrange[1], self.y0,
                            self.height))

    def curve(self, points, color, width=1.2):
        coords = []
        for p in points:
            coords.extend(self.point(p.trial, p.mean))
        return PolyLine(coords, strokeColor=color, strokeWidth=width)

    def band(self, points, color):
        r'''A filled polygon between the curve's lower and upper bounds.'''
        coords = []
        for p in points:
            coords.extend(self.point(p.trial, p.ci_high))
        for p in reversed(points):
            coords.extend(self.point(p.trial, p.ci_low))
        return Polygon(coords, fillColor=color, fillOpacity=0.25,
                       strokeColor=None, strokeWidth=0)

    def hline(self, y, color=colors.grey):
        x1, y1 = self.point(self.xrange[0], y)
        x2, y2 = self.point(self.xrange[1], y)
        return Line(x1, y1, x2, y2, strokeColor=color, strokeWidth=0.5,
                    strokeDashArray=[2, 2])

    def frame(self, drawing, xlabel, ylabel, fmt='%g'):
        r'''Draw the box, the x ticks along the bottom and the y ticks along
        the left side.
        '''
        x1 = self.x0 + self.width
        y1 = self.y0 + self.height
        for xa, ya, xb, yb in ((self.x0, self.y0, x1, self.y0),
                               (self.x0, y1, x1, y1),
                               (self.x0, self.y0, self.x0, y1),
                               (x1, self.y0, x1, y1)):
            drawing.add(Line(xa, ya, xb, yb, strokeColor=colors.black,
                             strokeWidth=0.6))
        for t in ticks(*self.xrange):
            x, _ = self.point(t, self.yrange[0])
            drawing.add(Line(x, self.y0, x, self.y0 - 3, strokeWidth=0.6))
            drawing.add(String(x, self.y0 - 11, '%g' % t, fontName=FONT,
                               fontSize=FONT_SIZE, textAnchor='middle'))
        self.yticks(drawing, self.x0, -1, fmt)
        drawing.add(String(self.x0 + self.width / 2, self.y0 - 24, xlabel,
                           fontName=FONT, fontSize=FONT_SIZE + 1,
                           textAnchor='middle'))
        drawing.add(_vertical(self.x0 - 34, self.y0 + self.height / 2, ylabel))

    def yticks(self, drawing, x, direction, fmt='%g', color=colors.black):
        for t in ticks(*self.yrange):
            _, y = self.point(self.xrange[0], t)
            drawing.add(Line(x, y, x + 3 * direction, y, strokeWidth=0.6,
                             strokeColor=color))
            drawing.add(String(x + 5 * direction, y - 3, fmt % t,
                               fontName=FONT, fontSize=FONT_SIZE,
                               fillColor=color,
                               textAnchor='end' if direction < 0 else 'start'))

def _vertical(x, y, text, color=colors.black):
    s = String(0, 0, text, fontName=FONT, fontSize=FONT_SIZE + 1,
               fillColor=color, textAnchor='middle')
    g = Group(s)
    g.translate(x, y)
    g.rotate(90)
    return g

def _legend(drawing, x, y, entries):
    for i, (label, color) in enumerate(entries):
        yy = y - i * 11
        drawing.add(Line(x, yy + 3, x + 14, yy + 3, strokeColor=color,
                         strokeWidth=1.5))
        drawing.add(String(x + 18, yy, label, fontName=FONT,
                           fontSize=FONT_SIZE))

def _axes(points, yrange):
    xrange = (points[0].trial, points[-1].trial)
    return Axes(LEFT, BOTTOM, WIDTH - LEFT - RIGHT, HEIGHT - BOTTOM - TOP,
                xrange, yrange)

def accuracy_drawing(base, overhyp):
    r'''Return a Drawing of the two accuracy curves with their bands.

        >>> from ccgwl.experiment import CurvePoint
        >>> pts = [CurvePoint(t, t / 10, t / 20, t / 8) for t in range(0, 9)]
        >>> d = accuracy_drawing(pts, pts)
        >>> d.width == WIDTH and d.height == HEIGHT
        True
    '''
    drawing = Drawing(WIDTH, HEIGHT)
    axes = _axes(base, (0.0, 1.0))
    for points, color in ((base, BASE_COLOR), (overhyp, OVERHYP_COLOR)):
        drawing.add(axes.band(points, color))
    for points, color in ((base, BASE_COLOR), (overhyp, OVERHYP_COLOR)):
        drawing.add(axes.curve(points, color))
    axes.frame(drawing, 'training trials', 'accuracy on test set')
    _legend(drawing, axes.x0 + axes.width - 90, axes.y0 + 24,
            [('overhypothesis', OVERHYP_COLOR), ('base', BASE_COLOR)])
    return drawing

def gap_belief_drawing(gap, belief):
    r'''Return a Drawing of the gap curve against the left axis and the
    belief curve against the right axis.

        >>> from ccgwl.experiment import CurvePoint
        >>> gap = [CurvePoint(t, 0.01 * t, 0.0, 0.02 * t) for t in range(0, 9)]
        >>> bel = [CurvePoint(t, 0.5 + t / 20, 0.5, 0.9) for t in range(0, 9)]
        >>> gap_belief_drawing(gap, bel).height == HEIGHT
        True
    '''
    drawing = Drawing(WIDTH, HEIGHT)
    lo = min(0.0, min(p.ci_low for p in gap))
    hi = max(0.0, max(p.ci_high for p in gap))
    if hi == lo:
        hi = lo + 0.01
    left = _axes(gap, (lo, hi))
    right = _axes(belief, (0.0, 1.0))
    drawing.add(left.band(gap, GAP_COLOR))
    drawing.add(right.band(belief, BELIEF_COLOR))
    drawing.add(left.hline(0.0))
    drawing.add(left.curve(gap, GAP_COLOR))
    drawing.add(right.curve(belief, BELIEF_COLOR))
    left.frame(drawing, 'training trials',
               'accuracy gap (overhypothesis - base)', fmt='%.2f')
    right.yticks(drawing, right.x0 + right.width, 1, fmt='%.1f',
                 color=BELIEF_COLOR)
    drawing.add(_vertical(right.x0 + right.width + 34,
                          right.y0 + right.height / 2,
                          'P(color | modifier)', color=BELIEF_COLOR))
    _legend(drawing, left.x0 + left.width - 90, left.y0 + 24,
            [('gap', GAP_COLOR), ('belief', BELIEF_COLOR)])
    return drawing

def plot_accuracy(base, overhyp, path):
    renderPDF.drawToFile(accuracy_drawing(base, overhyp), path,
                         'Online accuracy')

def plot_gap_belief(gap, belief, path):
    renderPDF.drawToFile(gap_belief_drawing(gap, belief), path,
                         'Accuracy gap and modifier belief')
