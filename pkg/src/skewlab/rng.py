"""Counter-based random streams.

Every draw is a pure function of (seed, stream_id, index), so sampling is
reproducible independently of call order or worker scheduling.  The mixing
function is the splitmix64 finalizer, which is the standard choice for
stateless counter hashing.
"""

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z):
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def counter_uniform(seed, stream_id, index):
    """Uniform float in [0, 1) determined by the triple of integers."""
    z = _mix((seed & _MASK) + _GOLDEN)
    z = _mix(z ^ _mix((stream_id & _MASK) + _GOLDEN))
    z = _mix(z + ((index + (1 << 62)) & _MASK) * _GOLDEN)
    return z / 18446744073709551616.0


def derive_seed(seed, *path):
    """Deterministic sub-seed for a labelled child stream."""
    z = _mix((seed & _MASK) + _GOLDEN)
    for part in path:
        z = _mix(z ^ _mix((part & _MASK) + _GOLDEN))
    return z
