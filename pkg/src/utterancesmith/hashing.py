"""Deterministic hashing and seeded pseudo-randomness.

Both primitives are fixed bit-for-bit so that embeddings, candidate ids and
sampled groups reproduce exactly across runs, platforms and languages:

* FNV-1a, 64-bit (offset basis 14695981039346656037, prime 1099511628211)
* SplitMix64 as the seeded PRNG behind k-means init and random sampling
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1

FNV_OFFSET_BASIS = 14695981039346656037
FNV_PRIME = 1099511628211


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a over a byte string."""
    h = FNV_OFFSET_BASIS
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h


def fnv1a_64_text(text: str) -> int:
    return fnv1a_64(text.encode("utf-8"))


def stable_id(*parts: str) -> str:
    """16-hex-digit id for a tuple of strings, stable across runs.

    Parts are joined with an unlikely separator so ("a", "bc") and ("ab", "c")
    hash differently.  Rendered as hex because 64-bit ints do not survive a
    round trip through JavaScript JSON consumers.
    """
    return format(fnv1a_64("\x1f".join(parts).encode("utf-8")), "016x")


class SplitMix64:
    """Tiny splittable PRNG; adequate for sampling, never for secrets."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 bits of the next output."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def split(self) -> "SplitMix64":
        """Independent child generator; advances this one by one draw."""
        return SplitMix64(self.next_u64())

    def sample_indices(self, population: int, k: int) -> list[int]:
        """k distinct indices from range(population), order of drawing."""
        if k > population:
            raise ValueError("sample larger than population")
        pool = list(range(population))
        out = []
        for i in range(k):
            j = i + self.below(population - i)
            pool[i], pool[j] = pool[j], pool[i]
            out.append(pool[i])
        return out
