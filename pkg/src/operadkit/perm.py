"""Permutations of {1, ..., n} and the block wreath construction."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput, SizeMismatch


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1, ..., n}, stored as the image tuple (p(1), ..., p(n))."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise InvalidInput(f"not a bijection of 1..{len(self.images)}: {self.images!r}")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def from_images(images) -> "Permutation":
        return Permutation(tuple(int(i) for i in images))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self.images):
            raise SizeMismatch(f"index {i} out of range 1..{len(self.images)}")
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(i) == self(other(i))."""
        if other.size != self.size:
            raise SizeMismatch(f"cannot compose sizes {self.size} and {other.size}")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, start=1))

    def format(self) -> str:
        return "[" + ",".join(str(i) for i in self.images) + "]"

    @staticmethod
    def parse(text: str) -> "Permutation":
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise InvalidInput(f"expected bracketed image list, got {text!r}")
        inner = body[1:-1].strip()
        if not inner:
            return Permutation(())
        try:
            images = tuple(int(part) for part in inner.split(","))
        except ValueError as exc:
            raise InvalidInput(f"bad permutation literal {text!r}") from exc
        return Permutation(images)

    def __repr__(self) -> str:
        return f"Permutation({self.format()})"


def act_tuple(items, perm: Permutation) -> tuple:
    """Right action on a tuple by index selection: result[i] = items[perm(i)]."""
    if len(items) != perm.size:
        raise SizeMismatch(f"tuple of length {len(items)} vs permutation of size {perm.size}")
    return tuple(items[perm(i) - 1] for i in range(1, perm.size + 1))


def pad_fixed(perm: Permutation, left: int, right: int = 0) -> Permutation:
    """Embed a permutation so that `left` leading and `right` trailing points stay fixed."""
    images = (
        tuple(range(1, left + 1))
        + tuple(left + j for j in perm.images)
        + tuple(left + perm.size + i for i in range(1, right + 1))
    )
    return Permutation(images)


def block_sum(perms) -> Permutation:
    """Concatenate permutations block-diagonally."""
    images: list[int] = []
    offset = 0
    for p in perms:
        images.extend(offset + j for j in p.images)
        offset += p.size
    return Permutation(tuple(images))


def block_wreath(lam: Permutation, kappas, ks) -> Permutation:
    """Combine an outer block permutation with per-block inner permutations.

    Blocks have sizes ks = (k_1, ..., k_n) and kappas[i] permutes block i+1.
    The result maps position sum(k_{lam(i)}, i<j) + p to
    sum(k_i, i<lam(j)) + kappas[lam(j)](p).
    """
    kappas = list(kappas)
    ks = list(ks)
    n = lam.size
    if len(kappas) != n or len(ks) != n:
        raise SizeMismatch(f"expected {n} inner permutations and sizes, got {len(kappas)} and {len(ks)}")
    for kappa, k in zip(kappas, ks):
        if kappa.size != k:
            raise SizeMismatch(f"inner permutation size {kappa.size} does not match block size {k}")
        if k < 0:
            raise InvalidInput("block sizes must be non-negative")
    prefix = [0] * (n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] + ks[i]
    total = prefix[n]
    images = [0] * total
    pos = 0
    for j in range(1, n + 1):
        target_block = lam(j)
        for p in range(1, ks[target_block - 1] + 1):
            images[pos] = prefix[target_block - 1] + kappas[target_block - 1](p)
            pos += 1
    return Permutation(tuple(images))
