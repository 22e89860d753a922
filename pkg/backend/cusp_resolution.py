"""
Combinatorics of the (p, q) cusp {x^p + y^q = 0}.

The p x q rectangle decomposes uniquely into squares (the box diagram): while the
rectangle is wider than tall, a square of side q is placed flush left and the rest of
the rectangle to its right is decomposed; while it is taller than wide, a square of
side p is placed flush with the bottom and the rest above it is decomposed. The side
lengths in placement order form the weight sequence W(p, q), and square i is the ith
exceptional divisor F_i of the normal crossing resolution.
"""
import functools
import io
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import drawsvg as draw
import numpy as np
from PIL import Image, ImageDraw
from sympy.ntheory.continued_fraction import continued_fraction_reduce

# Local Code
from backend.backend_config import BOX_FILLS, BOX_STROKE, PNG_SCALE, SVG_SCALE
from backend.exceptions import DomainError, NegativeCount, NonIntegral, NotCoprime

logger = logging.getLogger(__name__)

HORIZONTAL = 'horizontal'
VERTICAL = 'vertical'
LAST = 'last'


## ------------------ Validation Functions ------------------
def validate_pair(p, q):
    """
    Ensures (p, q) are positive coprime integers.
    """
    for name, value in (('p', p), ('q', q)):
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise DomainError(f"{name} must be a positive integer, got {value!r}")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"({p}, {q}) are not coprime (gcd {math.gcd(p, q)})")


def validate_ordered_pair(p, q):
    validate_pair(p, q)
    if p <= q:
        raise DomainError(f"Expected p > q, got ({p}, {q})")


## ------------------ Domain Types ------------------
@dataclass(frozen=True)
class WeightSequence:
    weights: tuple
    p: int
    q: int

    @property
    def length(self):
        return len(self.weights)

    def runs(self):
        """(weight, count) for each maximal run of equal weights."""
        grouped = []
        for weight in self.weights:
            if grouped and grouped[-1][0] == weight:
                grouped[-1][1] += 1
            else:
                grouped.append([weight, 1])
        return [tuple(item) for item in grouped]

    def to_json(self):
        return list(self.weights)


@dataclass(frozen=True)
class Square:
    size: int
    x: int
    y: int
    kind: str

    def to_json(self):
        return {'size': self.size, 'x': self.x, 'y': self.y, 'kind': self.kind}


@dataclass(frozen=True)
class BoxDiagram:
    p: int
    q: int
    squares: tuple

    def indices(self, kind):
        return [i for i, square in enumerate(self.squares) if square.kind == kind]

    @functools.cached_property
    def _edge_index(self):
        by_left, by_bottom = {}, {}
        for j, square in enumerate(self.squares):
            by_left.setdefault(square.x, []).append(j)
            by_bottom.setdefault(square.y, []).append(j)
        return by_left, by_bottom

    def neighbors(self, i):
        """Squares sharing a positive-length segment immediately right of or above square i."""
        square = self.squares[i]
        by_left, by_bottom = self._edge_index
        found = []
        for j in by_left.get(square.x + square.size, []):
            other = self.squares[j]
            if min(square.y + square.size, other.y + other.size) > max(square.y, other.y):
                found.append(j)
        for j in by_bottom.get(square.y + square.size, []):
            other = self.squares[j]
            if min(square.x + square.size, other.x + other.size) > max(square.x, other.x):
                found.append(j)
        return sorted(found)

    def to_json(self):
        return {'p': self.p, 'q': self.q, 'squares': [square.to_json() for square in self.squares]}


@dataclass(frozen=True)
class DivisorChain:
    """
    Classes [F_i] over the exceptional basis e_1..e_L (zero-indexed in code), their
    self-intersections, and the dual graph of the chain.
    """
    p: int
    q: int
    classes: tuple
    self_ints: tuple
    adjacency: tuple
    labels: tuple

    @property
    def length(self):
        return len(self.classes)

    def intersection_matrix(self):
        """[F_i].[F_j] under the form diag(-1, ..., -1)."""
        matrix = np.array(self.classes, dtype=np.int64)
        return -(matrix @ matrix.T)

    def chain_self_ints(self, kind):
        return [self.self_ints[i] for i, label in enumerate(self.labels) if label == kind]

    def to_json(self):
        return {
            'p': self.p,
            'q': self.q,
            'classes': [list(c) for c in self.classes],
            'self_ints': list(self.self_ints),
            'adjacency': [list(row) for row in self.adjacency],
            'labels': list(self.labels),
        }


## ------------------ Operations ------------------
def weight_sequence(p, q):
    """
    W(p, q): the side lengths of the squares of Box(p, q) in placement order.
    """
    validate_pair(p, q)
    weights = []
    width, height = p, q
    while width != height:
        if width > height:
            weights.append(height)
            width -= height
        else:
            weights.append(width)
            height -= width
    weights.append(width)
    return WeightSequence(tuple(weights), p, q)


def box_diagram(p, q):
    validate_pair(p, q)
    placed = []
    x, y, width, height = 0, 0, p, q
    while True:
        size = min(width, height)
        placed.append((size, x, y))
        if width == height:
            break
        if width > height:
            x, width = x + size, width - size
        else:
            y, height = y + size, height - size

    squares = []
    for index, (size, sx, sy) in enumerate(placed):
        if index == len(placed) - 1:
            kind = LAST
        elif sy + size == q:
            kind = HORIZONTAL
        else:
            kind = VERTICAL
        squares.append(Square(size, sx, sy, kind))
    return BoxDiagram(p, q, tuple(squares))


def cf_plus(p, q):
    """Continued fraction coefficients of p/q, read off as run lengths of W(p, q)."""
    validate_ordered_pair(p, q)
    return [count for _, count in weight_sequence(p, q).runs()]


def cf_value(coeffs):
    """[r_1, ..., r_l] = r_1 + 1/(r_2 + 1/(...))."""
    value = continued_fraction_reduce(list(coeffs))
    return Fraction(int(value.p), int(value.q))


def hj_value(coeffs):
    """Negative continued fraction [c_1, ..., c_k]^- = c_1 - 1/(c_2 - 1/(...))."""
    if not coeffs:
        raise DomainError("An empty negative continued fraction has no value")
    value = Fraction(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        value = c - 1 / value
    return value


def chain_classes(p, q):
    """
    The divisor chain of the resolution of the (p, q) cusp.

    [F_i] = e_i - sum of e_j over the squares j immediately right of or above square i,
    so [F_i]^2 = -1 - #neighbors. Consecutive horizontal divisors meet, consecutive
    vertical divisors meet, and F_L meets the last of each.
    """
    diagram = box_diagram(p, q)
    size = len(diagram.squares)
    classes, self_ints = [], []
    for i in range(size):
        vector = [0] * size
        vector[i] = 1
        neighbors = diagram.neighbors(i)
        for j in neighbors:
            vector[j] = -1
        classes.append(tuple(vector))
        self_ints.append(-1 - len(neighbors))

    adjacency = [[0] * size for _ in range(size)]
    labels = tuple(square.kind for square in diagram.squares)
    for kind in (HORIZONTAL, VERTICAL):
        chain = diagram.indices(kind) + [size - 1]
        for i, j in zip(chain, chain[1:]):
            if i != j:
                adjacency[i][j] = adjacency[j][i] = 1
    return DivisorChain(p, q, tuple(classes), tuple(self_ints),
                        tuple(tuple(row) for row in adjacency), labels)


def hj_expansions(p, q):
    """
    Magnitudes of the self-intersections of the horizontal and vertical chains.
    [hor]^- = p/(p - q) and, for q >= 2, [ver]^- = q/(q - (p mod q)). The vertical
    chain is empty when q = 1.
    """
    validate_ordered_pair(p, q)
    chain = chain_classes(p, q)
    hor = [-value for value in chain.chain_self_ints(HORIZONTAL)]
    ver = [-value for value in chain.chain_self_ints(VERTICAL)]
    return hor, ver


def puiseux_to_cabling(pairs):
    """
    Converts Puiseux pairs (p_i, r_i) to cabling parameters (p_i, s_i):
    s_1 = r_1 and s_i = r_i - r_{i-1} p_i + p_{i-1} p_i s_{i-1}.
    """
    pairs = [tuple(pair) for pair in pairs]
    if not pairs:
        raise DomainError("At least one Puiseux pair is required")
    denominator = 1
    previous_exponent = None
    for p_i, r_i in pairs:
        for value in (p_i, r_i):
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise DomainError(f"Puiseux pair entries must be positive integers, got {(p_i, r_i)}")
        if math.gcd(p_i, r_i) != 1:
            raise NotCoprime(f"Puiseux pair {(p_i, r_i)} is not coprime")
        denominator *= p_i
        exponent = Fraction(r_i, denominator)
        if previous_exponent is not None and exponent <= previous_exponent:
            raise DomainError(f"Characteristic exponents must increase, got {exponent} after {previous_exponent}")
        previous_exponent = exponent

    cabling = [pairs[0]]
    for (p_prev, r_prev), (p_i, r_i) in zip(pairs, pairs[1:]):
        s_prev = cabling[-1][1]
        cabling.append((p_i, r_i - r_prev * p_i + p_prev * p_i * s_prev))
    return cabling


def double_points(self_int, c1, p, q):
    """
    Number of double points 1/2 (2 + A.A - c1(A) - (p-1)(q-1)) of a rational curve in
    class A with one (p, q) cusp and otherwise nodal.
    """
    numerator = 2 + self_int - c1 - (p - 1) * (q - 1)
    if numerator % 2:
        raise NonIntegral(f"Adjunction gives half-integral double point count {numerator}/2")
    if numerator < 0:
        raise NegativeCount(f"Adjunction gives a negative double point count {numerator // 2}")
    return numerator // 2


## ------------------ Rendering ------------------
def _label(index):
    alphabet = '123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ'
    return alphabet[index % len(alphabet)]


def _render_ascii(diagram):
    grid = [[' '] * diagram.p for _ in range(diagram.q)]
    for index, square in enumerate(diagram.squares):
        for y in range(square.y, square.y + square.size):
            for x in range(square.x, square.x + square.size):
                grid[y][x] = _label(index)
    return ''.join(''.join(row) + '\n' for row in reversed(grid))


def _render_svg(diagram, scale):
    drawing = draw.Drawing(diagram.p * scale, diagram.q * scale)
    for square in diagram.squares:
        drawing.append(
            draw.Rectangle(
                square.x * scale,
                (diagram.q - square.y - square.size) * scale,
                square.size * scale,
                square.size * scale,
                fill=BOX_FILLS[square.kind],
                stroke=BOX_STROKE,
            )
        )
    return drawing.as_svg()


def _render_png(diagram, scale):
    image = Image.new('RGB', (diagram.p * scale + 1, diagram.q * scale + 1), 'white')
    canvas = ImageDraw.Draw(image)
    for square in diagram.squares:
        left = square.x * scale
        top = (diagram.q - square.y - square.size) * scale
        canvas.rectangle([left, top, left + square.size * scale, top + square.size * scale],
                         fill=BOX_FILLS[square.kind], outline=BOX_STROKE)
    buffer = io.BytesIO()
    image.save(buffer, format='PNG')
    return buffer.getvalue()


def render_box(p, q, fmt='ascii', scale=None):
    """
    Renders Box(p, q).

    Args:
        fmt (str): 'ascii' (one character per unit cell, labelled by square), 'svg' or 'png'.
        scale (int): Pixels per unit length for svg and png.

    Returns:
        str for ascii and svg, bytes for png.
    """
    diagram = box_diagram(p, q)
    if fmt == 'ascii':
        return _render_ascii(diagram)
    if fmt == 'svg':
        return _render_svg(diagram, scale or SVG_SCALE)
    if fmt == 'png':
        return _render_png(diagram, scale or PNG_SCALE)
    raise DomainError(f"Unknown box rendering format '{fmt}', expected ascii, svg or png")


if __name__ == '__main__':
    # Local Tests
    print(weight_sequence(51, 23).weights)
    print(hj_expansions(51, 23))
    print(render_box(3, 2))
