"""Skew products: base dynamics plus a family of fiber maps.

Two family types are supported.  Locally constant families look the
generator up from the word at indices [0, depth); with depth 1 this is the
classical random product.  The Holder family modulates a standard-map
parameter by a geometrically weighted symbol sum, giving a genuinely
base-dependent family with an explicit Holder certificate.
"""

import itertools
import math
from dataclasses import dataclass

from . import fiber_maps as fm
from .base_shift import sample_sequence
from .errors import CertificateViolationError, ConfigurationError
from .rng import counter_uniform, derive_seed


def admissible_words(space, length):
    """All admissible words of the given length, in lexicographic order."""
    return [
        w
        for w in itertools.product(range(space.alphabet_size), repeat=length)
        if all(space.admissible(a, b) for a, b in zip(w, w[1:]))
    ]


class LocallyConstantFamily:
    """Generator assignment depending only on the word at [0, depth)."""

    def __init__(self, depth, table):
        if depth < 1:
            raise ConfigurationError("depth must be >= 1")
        self.depth = int(depth)
        self.table = {}
        for word, f in table.items():
            if isinstance(word, int):
                word = (word,)
            word = tuple(int(s) for s in word)
            if len(word) != self.depth:
                raise ConfigurationError("table word %r has wrong length" % (word,))
            self.table[word] = f

    def map_for_word(self, word):
        try:
            return self.table[word]
        except KeyError:
            raise ConfigurationError("no generator for word %r" % (word,))


class HolderFamily:
    """f_x = StandardMap(K0 + eps * s(x)) with s a weighted symbol sum.

    s(x) = sum_{|j| <= window} coeffs[x_j] * gamma^|j|, gamma = lambda^alpha,
    which makes x -> f_x alpha-Holder with an explicit constant.
    """

    def __init__(self, K0, eps, alpha, space, window=16, coeffs=None):
        self.K0 = float(K0)
        self.eps = float(eps)
        self.alpha = float(alpha)
        self.window = int(window)
        d = space.alphabet_size
        if coeffs is None:
            coeffs = tuple(2.0 * i / (d - 1) - 1.0 for i in range(d))
        self.coeffs = tuple(float(c) for c in coeffs)
        self.gamma = space.metric_base ** self.alpha

    def parameter(self, x):
        c = self.coeffs
        s = c[x.symbol(0)]
        g = self.gamma
        w = 1.0
        for j in range(1, self.window + 1):
            w *= g
            s += w * (c[x.symbol(j)] + c[x.symbol(-j)])
        return self.K0 + self.eps * s

    def holder_constant(self):
        """Certified bound on d_C1(f_x, f_y) / d(x, y)^alpha."""
        c_max = max(abs(c) for c in self.coeffs)
        # standard-map C1 gap per unit of K: 1/2pi displacement, sqrt(2) derivative
        per_k = 1.0 / fm.TWO_PI + math.sqrt(2.0)
        return self.eps * per_k * 4.0 * c_max / (1.0 - self.gamma)


@dataclass(frozen=True)
class CocycleResult:
    end_point: tuple
    log_norm: float
    matrix_tail: tuple
    steps: int
    det_defect: float


class SkewSystem:
    """f(x, t) = (shift(x), f_x(t)) with an invariant product measure."""

    def __init__(self, space, measure, family):
        measure.validate_support(space)
        self.space = space
        self.measure = measure
        self.family = family
        self._inverse_cache = {}

    @property
    def is_locally_constant(self):
        return isinstance(self.family, LocallyConstantFamily)

    @property
    def holder_alpha(self):
        return self.family.alpha if not self.is_locally_constant else 1.0

    def fiber_map_at(self, x):
        if self.is_locally_constant:
            return self.family.map_for_word(x.word(0, self.family.depth))
        return fm.StandardMap(self.family.parameter(x))

    def inverse_fiber_map_at(self, x):
        f = self.fiber_map_at(x)
        # key by id but pin f in the entry: ids of dead objects get recycled
        entry = self._inverse_cache.get(id(f))
        if entry is None or entry[0] is not f:
            entry = (f, f.inverse())
            self._inverse_cache[id(f)] = entry
        return entry[1]

    def admissible_words(self, length):
        return admissible_words(self.space, length)

    def with_generator(self, word, new_map):
        """Copy of the system with one locally constant table entry replaced."""
        if not self.is_locally_constant:
            raise ConfigurationError("generator replacement needs a locally constant family")
        if isinstance(word, int):
            word = (word,)
        table = dict(self.family.table)
        if tuple(word) not in table:
            raise ConfigurationError("no generator for word %r" % (word,))
        table[tuple(word)] = new_map
        return SkewSystem(
            self.space, self.measure, LocallyConstantFamily(self.family.depth, table)
        )


def iterate_cocycle(sys, x, t, n, renorm_every=16):
    """Orbit endpoint and log operator norm of the derivative product.

    The running matrix is renormalized by its norm every ``renorm_every``
    steps; the factored-out norms go into a log accumulator, so the result
    is exact up to round-off for |n| up to 1e7.  Negative n follows the
    backward orbit with inverted generators.
    """
    if renorm_every <= 0:
        raise ConfigurationError("renorm_every must be positive")
    B = fm.IDENTITY
    log_acc = 0.0
    det_defect = 0.0
    steps = abs(int(n))
    forward = n >= 0
    since = 0
    for k in range(steps):
        if forward:
            f = sys.fiber_map_at(x if k == 0 else x.shift(k))
        else:
            f = sys.inverse_fiber_map_at(x.shift(-k - 1))
        t, d = f.apply(t)
        defect = abs(fm.mat_det(d) - 1.0)
        if defect > det_defect:
            det_defect = defect
        B = fm.mat_mul(d, B)
        since += 1
        if since == renorm_every:
            nb = fm.mat_norm(B)
            log_acc += math.log(nb)
            B = (B[0] / nb, B[1] / nb, B[2] / nb, B[3] / nb)
            since = 0
    tail_norm = fm.mat_norm(B)
    log_norm = log_acc + math.log(tail_norm)
    tail = (B[0] / tail_norm, B[1] / tail_norm, B[2] / tail_norm, B[3] / tail_norm)
    return CocycleResult(t, log_norm, tail, int(n), det_defect)


def fiber_c1_distance(f, g, grid=64, n_random=1000, seed=0):
    """sup over sampled fiber points of displacement + derivative gap."""
    worst = 0.0
    pts = [
        ((i + 0.5) / grid, (j + 0.5) / grid)
        for i in range(grid)
        for j in range(grid)
    ]
    pts.extend(fm.random_point(seed, 1, i) for i in range(n_random))
    for t in pts:
        tf, df = f.apply(t)
        tg, dg = g.apply(t)
        gap = fm.torus_distance(tf, tg) + fm.mat_sub_norm(df, dg)
        if gap > worst:
            worst = gap
    return worst


def _sampled_base_points(sys, n_samples, seed):
    if sys.is_locally_constant:
        from .base_shift import periodic_point

        out = []
        for w in sys.admissible_words(sys.family.depth):
            # any sequence starting with w selects table[w]; cyclic words suffice
            try:
                out.append(periodic_point(sys.space, w))
            except ConfigurationError:
                continue
        if out:
            return out
    return [
        sample_sequence(sys.space, sys.measure, derive_seed(seed, 11), i)
        for i in range(n_samples)
    ]


def c1_distance(sys_f, sys_g, n_base_samples=100, grid=32, n_random=200, seed=0):
    """Estimate of sup_x d_C1(f_x, g_x) over sampled base points."""
    if sys_f.space.alphabet_size != sys_g.space.alphabet_size:
        raise ConfigurationError("systems live over different bases")
    worst = 0.0
    for x in _sampled_base_points(sys_f, n_base_samples, seed):
        gap = fiber_c1_distance(
            sys_f.fiber_map_at(x), sys_g.fiber_map_at(x), grid, n_random, seed
        )
        if gap > worst:
            worst = gap
    return worst


def _perturbed_partner(sys, x, radius, seed, k):
    """A sequence agreeing with x exactly for |j| < radius."""
    other = sample_sequence(sys.space, sys.measure, derive_seed(seed, 13), k)
    xs, os = x.symbol, other.symbol

    def look(j):
        if abs(j) < radius:
            return xs(j)
        return os(j)

    from .base_shift import BaseSequence

    return BaseSequence(sys.space, look)


def holder_estimate(sys, n_pairs=100, seed=0, grid=16, n_random=100):
    """Worst sampled Holder quotient (H_hat, alpha) with a certificate check."""
    alpha = sys.holder_alpha
    if sys.is_locally_constant:
        declared = None
    else:
        declared = sys.family.holder_constant()
    if not sys.space.is_full_shift:
        raise ConfigurationError("holder_estimate pair splicing needs a full shift")
    h_hat = 0.0
    witness = None
    for k in range(n_pairs):
        x = sample_sequence(sys.space, sys.measure, derive_seed(seed, 17), k)
        radius = k % 8
        y = _perturbed_partner(sys, x, radius, seed, k)
        from .base_shift import distance

        d = distance(x, y)
        if d == 0.0:
            continue
        gap = fiber_c1_distance(
            sys.fiber_map_at(x), sys.fiber_map_at(y), grid, n_random, seed
        )
        q = gap / d ** alpha
        if q > h_hat:
            h_hat = q
            witness = (k, radius, d, gap)
    if declared is not None and h_hat > declared:
        raise CertificateViolationError(
            "sampled Holder quotient %.6g exceeds declared %.6g (witness %r)"
            % (h_hat, declared, witness)
        )
    return h_hat, alpha


def random_fiber_point(seed, index, stream=0):
    """Lebesgue sample on the fiber, counter-addressed for determinism."""
    return (
        counter_uniform(seed, 1000 + stream, 2 * index),
        counter_uniform(seed, 1000 + stream, 2 * index + 1),
    )
