"""Shared generators for exact random cube configurations."""

import random
from fractions import Fraction

from operadkit.cubes import CubeConfig, LittleCube, config


def rand_frac(rng: random.Random, lo: Fraction, hi: Fraction, den: int = 16) -> Fraction:
    """A random rational in (lo, hi), exclusive, with bounded denominator."""
    width = hi - lo
    num = rng.randint(1, den - 1)
    return lo + width * Fraction(num, den)


def random_config(rng: random.Random, dim: int, n: int, cells: int = 4,
                  allow_touching: bool = True) -> CubeConfig:
    """n cubes in distinct cells of a uniform grid, with random margins."""
    picks = rng.sample(
        [tuple(p) for p in _all_cells(dim, cells)], n
    )
    cubes = []
    for pick in picks:
        ints = []
        for axis in range(dim):
            lo = Fraction(pick[axis], cells)
            hi = Fraction(pick[axis] + 1, cells)
            if allow_touching and rng.random() < 0.3:
                ints.append((lo, hi))
            else:
                a = rand_frac(rng, lo, hi)
                b = rand_frac(rng, a, hi)
                ints.append((a, b))
        cubes.append(LittleCube(tuple(ints)))
    return CubeConfig(dim, tuple(cubes))


def _all_cells(dim, cells):
    if dim == 0:
        yield ()
        return
    for rest in _all_cells(dim - 1, cells):
        for c in range(cells):
            yield (c,) + rest


def random_small_config(rng: random.Random, k: int, ell: int, n: int, cells: int = 3) -> CubeConfig:
    """Grid-sampled small configurations: one cube strictly inside each of n
    distinct cells of a uniform grid over all k+ell axes."""
    dim = k + ell
    picks = rng.sample([tuple(p) for p in _all_cells(dim, cells)], n)
    cubes = []
    for pick in picks:
        ints = []
        for axis in range(dim):
            lo = Fraction(pick[axis], cells)
            hi = Fraction(pick[axis] + 1, cells)
            margin = (hi - lo) * Fraction(rng.randint(1, 4), 16)
            a = lo + margin
            b = hi - (hi - lo) * Fraction(rng.randint(1, 4), 16)
            if a >= b:
                a, b = lo + (hi - lo) / 4, hi - (hi - lo) / 4
            ints.append((a, b))
        cubes.append(LittleCube(tuple(ints)))
    order = list(range(n))
    rng.shuffle(order)
    return CubeConfig(dim, tuple(cubes[i] for i in order))


def random_partition_config(rng: random.Random, dim: int, n: int) -> CubeConfig:
    """A binary-space-partition tiling of the unit cube into n touching tiles.

    Every tile touches the boundary, so the configuration is never small."""
    tiles = [tuple((Fraction(0), Fraction(1)) for _ in range(dim))]
    while len(tiles) < n:
        idx = rng.randrange(len(tiles))
        tile = tiles.pop(idx)
        axis = rng.randrange(dim)
        lo, hi = tile[axis]
        cut = lo + (hi - lo) * Fraction(rng.randint(1, 7), 8)
        first = tuple((cut, hi) if a == axis else iv for a, iv in enumerate(tile))
        second = tuple((lo, cut) if a == axis else iv for a, iv in enumerate(tile))
        tiles.extend([second, first])
    rng.shuffle(tiles)
    return CubeConfig(dim, tuple(LittleCube(t) for t in tiles))


def diagonal_config(k: int, ell: int, n: int, num: int = 1, den: int = 8) -> CubeConfig:
    """n cubes along the diagonal of an n-by-n grid over the two axis groups,
    with margin num/den of the cell width on every side."""
    dim = k + ell
    cubes = []
    for i in range(n):
        ints = []
        for _ in range(dim):
            lo = Fraction(i, n)
            width = Fraction(1, n)
            ints.append((lo + width * Fraction(num, den), lo + width * (1 - Fraction(num, den))))
        cubes.append(LittleCube(tuple(ints)))
    return CubeConfig(dim, tuple(cubes))
