"""Area-preserving diffeomorphisms of the 2-torus with exact derivatives.

Points are plain (u, v) tuples with coordinates in [0, 1); 2x2 matrices are
(a, b, c, d) tuples in row-major order.  The scalar representation keeps the
long cocycle loops fast; numpy enters only for sampling and diagnostics.
"""

import math
from dataclasses import dataclass

from .errors import ConfigurationError
from .rng import counter_uniform

IDENTITY = (1.0, 0.0, 0.0, 1.0)

TWO_PI = 2.0 * math.pi


def wrap(t):
    return (t[0] % 1.0, t[1] % 1.0)


def torus_delta(a, b):
    """Shortest displacement from b to a, componentwise in [-1/2, 1/2)."""
    du = (a[0] - b[0] + 0.5) % 1.0 - 0.5
    dv = (a[1] - b[1] + 0.5) % 1.0 - 0.5
    return du, dv


def torus_distance(a, b):
    du, dv = torus_delta(a, b)
    return math.hypot(du, dv)


def mat_mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_vec(m, v):
    a, b, c, d = m
    return (a * v[0] + b * v[1], c * v[0] + d * v[1])


def mat_det(m):
    return m[0] * m[3] - m[1] * m[2]


def mat_inv_det1(m):
    """Inverse of a determinant-one matrix."""
    a, b, c, d = m
    return (d, -b, -c, a)


def mat_norm(m):
    """Spectral norm of a 2x2 matrix, in closed form."""
    a, b, c, d = m
    t = a * a + b * b + c * c + d * d
    det = a * d - b * c
    disc = t * t - 4.0 * det * det
    if disc < 0.0:
        disc = 0.0
    return math.sqrt(0.5 * (t + math.sqrt(disc)))


def mat_conorm(m):
    """m(A) = ||A^{-1}||^{-1}: the smallest singular value."""
    det = abs(mat_det(m))
    n = mat_norm(m)
    return det / n if n > 0.0 else 0.0


def mat_sub_norm(m, n):
    return mat_norm((m[0] - n[0], m[1] - n[1], m[2] - n[2], m[3] - n[3]))


@dataclass(frozen=True)
class BumpProfile:
    """Smooth step: 1 on [0, plateau_end], 0 beyond support_end."""

    plateau_end: float = 1.0 / 3.0
    support_end: float = 2.0 / 3.0

    def __post_init__(self):
        if not 0.0 < self.plateau_end < self.support_end < 1.0:
            raise ConfigurationError("need 0 < plateau_end < support_end < 1")

    def value_and_slope(self, s):
        """rho(s) and rho'(s); the transition is the standard exp(-1/u) step."""
        a, b = self.plateau_end, self.support_end
        if s <= a:
            return 1.0, 0.0
        if s >= b:
            return 0.0, 0.0
        w = b - a
        u = (s - a) / w
        fu = math.exp(-1.0 / u)
        fv = math.exp(-1.0 / (1.0 - u))
        denom = fu + fv
        q = fu / denom
        dfu = fu / (u * u)
        dfv = fv / ((1.0 - u) * (1.0 - u))
        dq = (dfu * fv + fu * dfv) / (denom * denom)
        return 1.0 - q, -dq / w


class FiberMap:
    """Common interface: apply(t) -> (image, derivative); inverse() -> FiberMap."""

    kind = "abstract"

    def apply(self, t):
        raise NotImplementedError

    def inverse(self):
        raise NotImplementedError

    def __call__(self, t):
        return self.apply(t)[0]


class ToralAutomorphism(FiberMap):
    kind = "toral"

    def __init__(self, matrix):
        m = tuple(int(v) for v in matrix)
        if len(m) != 4:
            raise ConfigurationError("toral automorphism needs 4 integer entries")
        if m[0] * m[3] - m[1] * m[2] != 1:
            raise ConfigurationError("toral automorphism must have determinant 1")
        self.matrix = tuple(float(v) for v in m)

    def apply(self, t):
        a, b, c, d = self.matrix
        return ((a * t[0] + b * t[1]) % 1.0, (c * t[0] + d * t[1]) % 1.0), self.matrix

    def inverse(self):
        a, b, c, d = self.matrix
        return ToralAutomorphism((d, -b, -c, a))


class StandardMap(FiberMap):
    """(u, v) -> (u + v + (K/2pi) sin(2pi u), v + (K/2pi) sin(2pi u)) mod 1."""

    kind = "stdmap"

    def __init__(self, K):
        self.K = float(K)

    def apply(self, t):
        u, v = t
        kick = self.K / TWO_PI * math.sin(TWO_PI * u)
        s = self.K * math.cos(TWO_PI * u)
        return ((u + v + kick) % 1.0, (v + kick) % 1.0), (1.0 + s, 1.0, s, 1.0)

    def inverse(self):
        return _StandardMapInverse(self.K)


class _StandardMapInverse(FiberMap):
    kind = "stdmap_inv"

    def __init__(self, K):
        self.K = float(K)

    def apply(self, t):
        u1, v1 = t
        u = (u1 - v1) % 1.0
        v = (v1 - self.K / TWO_PI * math.sin(TWO_PI * u)) % 1.0
        s = self.K * math.cos(TWO_PI * u)
        # inverse of the forward Jacobian [[1+s, 1], [s, 1]] at the preimage
        return (u, v), (1.0, -1.0, -s, 1.0 + s)

    def inverse(self):
        return StandardMap(self.K)


class LocalizedTwist(FiberMap):
    """Rotation by angle * rho(dist/radius) about ``center``.

    In polar coordinates about the center the map is (s, theta) ->
    (s, theta + angle * rho(s)); it is the bit-exact identity outside the
    disc of radius support_end * radius.
    """

    kind = "twist"

    def __init__(self, center, radius, angle, profile=BumpProfile()):
        if not 0.0 < radius <= 0.25:
            raise ConfigurationError("twist radius must lie in (0, 1/4]")
        self.center = (center[0] % 1.0, center[1] % 1.0)
        self.radius = float(radius)
        self.angle = float(angle)
        self.profile = profile

    def apply(self, t):
        y1, y2 = torus_delta(t, self.center)
        r = math.hypot(y1, y2)
        s = r / self.radius
        if s >= self.profile.support_end:
            return t, IDENTITY
        rho, drho = self.profile.value_and_slope(s)
        phi = self.angle * rho
        cp, sp = math.cos(phi), math.sin(phi)
        z1 = cp * y1 - sp * y2
        z2 = sp * y1 + cp * y2
        image = ((self.center[0] + z1) % 1.0, (self.center[1] + z2) % 1.0)
        if drho == 0.0:
            return image, (cp, -sp, sp, cp)
        # D = Rot(phi) + (J Rot(phi) y) grad(phi)^T, grad(phi) = angle*rho'(s) y/(R r)
        g = self.angle * drho / (self.radius * r)
        return image, (
            cp - z2 * g * y1,
            -sp - z2 * g * y2,
            sp + z1 * g * y1,
            cp + z1 * g * y2,
        )

    def inverse(self):
        return LocalizedTwist(self.center, self.radius, -self.angle, self.profile)


class Composite(FiberMap):
    """Composition in function order: Composite([f, g]) acts as f o g."""

    kind = "compose"

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ConfigurationError("empty composition")
        self.factors = factors

    def apply(self, t):
        deriv = IDENTITY
        for f in reversed(self.factors):
            t, d = f.apply(t)
            deriv = mat_mul(d, deriv)
        return t, deriv

    def inverse(self):
        return Composite([f.inverse() for f in reversed(self.factors)])


def compose(*factors):
    return Composite(factors)


def apply(f, t):
    return f.apply(t)


def invert(f):
    return f.inverse()


def localized_twist_apply(center, radius, angle, t, profile=BumpProfile()):
    return LocalizedTwist(center, radius, angle, profile).apply(t)


def random_point(seed, stream_id, index):
    """Deterministic Lebesgue sample on the torus."""
    return (
        counter_uniform(seed, stream_id, 2 * index),
        counter_uniform(seed, stream_id, 2 * index + 1),
    )


def area_preservation_defect(f, n_samples=1000, seed=0):
    """Max over sampled points of |det Df(t) - 1|."""
    if n_samples < 1:
        raise ConfigurationError("n_samples must be >= 1")
    worst = 0.0
    for i in range(n_samples):
        _, d = f.apply(random_point(seed, 0, i))
        defect = abs(mat_det(d) - 1.0)
        if defect > worst:
            worst = defect
    return worst
