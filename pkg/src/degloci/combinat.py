"""k-strict partitions, characteristic indices and signed permutations."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterator, Sequence

from .exactalg import DomainError, UsageError


@dataclass(frozen=True)
class KStrictPartition:
    """A partition whose parts larger than ``k`` are distinct."""

    parts: tuple[int, ...]
    k: int = 0

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise DomainError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise DomainError(f"parts must be weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if self.k < 0:
            raise DomainError("k must be nonnegative")
        for i in range(len(parts) - 1):
            if parts[i] > self.k and parts[i] == parts[i + 1]:
                raise DomainError(f"{parts} is not {self.k}-strict")
        object.__setattr__(self, "parts", parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def part(self, i: int) -> int:
        """lambda_i with 1-based index; zero beyond the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def in_spk(self, n: int) -> bool:
        return self.length <= n - self.k and self.part(1) <= n + self.k

    @cached_property
    def chi(self) -> tuple[int, ...]:
        return tuple(char_index(self))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def parse_partition(text: str, k: int = 0) -> KStrictPartition:
    """Parse a comma separated list such as ``"3,1"``; the empty string is the empty partition."""
    text = text.strip().strip("()[]")
    if not text:
        return KStrictPartition((), k)
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"malformed partition {text!r}") from None
    return KStrictPartition(parts, k)


def char_index(lam: KStrictPartition) -> list[int]:
    """chi_1..chi_{r+1}, with lambda_{r+1} = 0 for the last entry."""
    k = lam.k
    r = lam.length
    chi = []
    for j in range(1, r + 2):
        lj = lam.part(j)
        count = sum(1 for i in range(1, j) if lam.part(i) + lj > 2 * k + j - i)
        chi.append(count + lj - k - j)
    for a, b in zip(chi, chi[1:]):
        if a <= b:
            raise DomainError(f"characteristic index {chi} is not strictly decreasing")
    gam = _gamma_from_chi(chi[:r])
    for j in range(1, r + 1):
        if chi[j - 1] != lam.part(j) - j + gam[j - 1] - k:
            raise DomainError("characteristic index disagrees with its gamma form")
    return chi


def _gamma_from_chi(chi: Sequence[int]) -> list[int]:
    r = len(chi)
    return [sum(1 for i in range(j) if chi[i] + chi[j] >= 0) for j in range(r)]


@dataclass(frozen=True)
class PairSets:
    C: frozenset[tuple[int, int]]
    D: frozenset[tuple[int, int]]
    gamma: tuple[int, ...]


def pair_sets(lam: KStrictPartition, r: int | None = None) -> PairSets:
    """C(lambda), D(lambda)_r and the gamma vector (pairs are 1-based)."""
    r = lam.length if r is None else r
    chi = list(lam.chi)
    while len(chi) < r:
        # indices beyond r+1 only arise if r exceeds the length; extend by the formula
        j = len(chi) + 1
        lj = lam.part(j)
        chi.append(sum(1 for i in range(1, j) if lam.part(i) + lj > 2 * lam.k + j - i) + lj - lam.k - j)
    C = set()
    D = set()
    for i, j in combinations(range(1, r + 1), 2):
        lhs = chi[i - 1] + chi[j - 1] >= 0
        rhs = lam.part(i) + lam.part(j) > 2 * lam.k + j - i
        if j <= lam.length and lhs != rhs:
            raise DomainError(f"pair criterion mismatch at {(i, j)} for {lam}")
        (C if lhs else D).add((i, j))
    gamma = tuple(sum(1 for i in range(1, j) if (i, j) in C) for j in range(1, r + 1))
    return PairSets(frozenset(C), frozenset(D), gamma)


@dataclass(frozen=True)
class SubsetData:
    """A subset I of D(lambda)_r with its a, c, d statistics (1-based tuples)."""

    I: frozenset[tuple[int, int]]
    r: int
    a: tuple[int, ...] = field(init=False)
    c: tuple[int, ...] = field(init=False)
    d: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        a = [0] * (self.r + 1)
        c = [0] * (self.r + 1)
        for i, j in self.I:
            a[i - 1] += 1
            c[j - 1] += 1
        d = [x - y for x, y in zip(a, c)]
        object.__setattr__(self, "a", tuple(a))
        object.__setattr__(self, "c", tuple(c))
        object.__setattr__(self, "d", tuple(d))

    def ai(self, i: int) -> int:
        return self.a[i - 1]

    def ci(self, i: int) -> int:
        return self.c[i - 1]

    def di(self, i: int) -> int:
        return self.d[i - 1]


def subset_enumerate(D: frozenset[tuple[int, int]] | set, r: int) -> Iterator[SubsetData]:
    """All subsets of D by increasing bitmask over the sorted pair list."""
    pairs = sorted(D)
    for mask in range(1 << len(pairs)):
        yield SubsetData(frozenset(p for b, p in enumerate(pairs) if mask >> b & 1), r)


def enumerate_spk(n: int, k: int) -> list[KStrictPartition]:
    """SP^k(n): k-strict partitions of length <= n-k with parts <= n+k."""
    out: list[KStrictPartition] = []
    maxlen = n - k
    if maxlen < 0:
        return out

    def rec(prefix: list[int], bound: int) -> None:
        out.append(KStrictPartition(tuple(prefix), k))
        if len(prefix) == maxlen:
            return
        for p in range(bound, 0, -1):
            if prefix and prefix[-1] == p and p > k:
                continue
            rec(prefix + [p], p)

    rec([], n + k)
    out.sort(key=lambda lam: lam.parts, reverse=True)
    return out


def enumerate_kstrict(k: int, max_size: int, max_length: int | None = None) -> list[KStrictPartition]:
    """All k-strict partitions with |lambda| <= max_size (and length bound)."""
    out: list[KStrictPartition] = []

    def rec(prefix: list[int], bound: int, remaining: int) -> None:
        out.append(KStrictPartition(tuple(prefix), k))
        if max_length is not None and len(prefix) == max_length:
            return
        for p in range(min(bound, remaining), 0, -1):
            if prefix and prefix[-1] == p and p > k:
                continue
            rec(prefix + [p], p, remaining - p)

    rec([], max_size, max_size)
    out.sort(key=lambda lam: lam.parts, reverse=True)
    return out


def partitions_in_box(rows: int, cols: int) -> list[tuple[int, ...]]:
    """Ordinary partitions fitting inside a rows x cols rectangle."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], bound: int) -> None:
        out.append(tuple(prefix))
        if len(prefix) == rows:
            return
        for p in range(bound, 0, -1):
            rec(prefix + [p], p)

    rec([], cols)
    return sorted(out, reverse=True)


# ---------------------------------------------------------------------------
# signed permutations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignedPerm:
    """w(1..N) in one-line notation; w(i) = i is implied beyond N."""

    one_line: tuple[int, ...]

    def __post_init__(self) -> None:
        w = tuple(int(v) for v in self.one_line)
        if sorted(abs(v) for v in w) != list(range(1, len(w) + 1)):
            raise DomainError(f"{w} is not a signed permutation")
        object.__setattr__(self, "one_line", w)

    @classmethod
    def identity(cls, n: int) -> SignedPerm:
        return cls(tuple(range(1, n + 1)))

    @property
    def N(self) -> int:
        return len(self.one_line)

    def __call__(self, i: int) -> int:
        if i < 0:
            return -self(-i)
        return self.one_line[i - 1] if i <= self.N else i

    def widen(self, n: int) -> SignedPerm:
        if n <= self.N:
            return self
        return SignedPerm(self.one_line + tuple(range(self.N + 1, n + 1)))

    def compose(self, other: SignedPerm) -> SignedPerm:
        """(self * other)(i) = self(other(i))."""
        n = max(self.N, other.N)
        return SignedPerm(tuple(self(other(i)) for i in range(1, n + 1)))

    def __str__(self) -> str:
        return "(" + " ".join(str(v) for v in self.one_line) + ")"

    def to_latex(self) -> str:
        return " ".join(rf"\bar{{{-v}}}" if v < 0 else str(v) for v in self.one_line)


def simple_reflection(i: int, n: int) -> SignedPerm:
    """s_0 negates position 1; s_i swaps positions i and i+1."""
    w = list(range(1, max(n, i + 1) + 1))
    if i == 0:
        w[0] = -1
    else:
        w[i - 1], w[i] = w[i], w[i - 1]
    return SignedPerm(tuple(w))


def apply_simple(w: SignedPerm, i: int) -> SignedPerm:
    """Right multiplication w * s_i."""
    return w.compose(simple_reflection(i, w.N))


def weyl_length(w: SignedPerm) -> int:
    """Hyperoctahedral length: inversions plus pairs i <= j with w(i)+w(j) < 0."""
    v = w.one_line
    n = len(v)
    inv = sum(1 for i in range(n) for j in range(i + 1, n) if v[i] > v[j])
    nsp = sum(1 for i in range(n) for j in range(i, n) if v[i] + v[j] < 0)
    return inv + nsp


def min_coset_rep(w: SignedPerm, k: int) -> SignedPerm:
    """The k-Grassmannian representative of w W_(k)."""
    v = w.one_line
    if k > len(v):
        w = w.widen(k)
        v = w.one_line
    head = sorted(abs(x) for x in v[:k])
    tail = sorted(v[k:])
    return SignedPerm(tuple(head) + tuple(tail))


def is_k_grassmannian(w: SignedPerm, k: int) -> bool:
    base = weyl_length(w)
    n = max(w.N, k + 1)
    w = w.widen(n)
    for i in range(0, n):
        if i == k:
            continue
        if weyl_length(apply_simple(w, i)) < base:
            return False
    return True


def partition_to_perm(lam: KStrictPartition, n: int) -> SignedPerm:
    """The k-Grassmannian element of W_n attached to lambda in SP^k(n)."""
    k = lam.k
    if not lam.in_spk(n):
        raise DomainError(f"{lam} is not in SP^{k}({n})")
    zeta = [p - k for p in lam.parts if p > k]
    nu = [p for p in lam.parts if p <= k]
    s = len(zeta)
    rest = sorted(set(range(1, n + 1)) - set(zeta))
    nu += [0] * (n - k - s - len(nu))
    u_pos = [i + k - nu[i - 1] for i in range(1, n - k - s + 1)]
    u = [rest[p - 1] for p in u_pos]
    v = sorted(set(rest) - set(u))
    return SignedPerm(tuple(v) + tuple(-z for z in zeta) + tuple(u))


def perm_to_partition(w: SignedPerm, k: int) -> KStrictPartition:
    """Inverse of :func:`partition_to_perm` on k-Grassmannian elements."""
    if not is_k_grassmannian(w, k):
        raise DomainError(f"{w} is not {k}-Grassmannian")
    w = w.widen(k)
    v = list(w.one_line[:k])
    tail = w.one_line[k:]
    zeta = sorted((-x for x in tail if x < 0), reverse=True)
    u = [x for x in tail if x > 0]
    nu = [sum(1 for p in v if p > ui) for ui in u]
    return KStrictPartition(tuple(z + k for z in zeta) + tuple(x for x in nu if x), k)


def perm_fixed_point_data(w: SignedPerm, k: int) -> tuple[list[int], list[int], list[int]]:
    """(v, zeta, u) read from a k-Grassmannian one-line form."""
    w = w.widen(k)
    v = list(w.one_line[:k])
    tail = w.one_line[k:]
    zeta = [-x for x in tail if x < 0]
    u = [x for x in tail if x > 0]
    return v, zeta, u


# ---------------------------------------------------------------------------
# positive roots and reflections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Root:
    """A positive root: kinds 'e' (eps_i), '2e' (2 eps_i), 'minus' (eps_j - eps_i), 'plus' (eps_j + eps_i)."""

    kind: str
    i: int
    j: int = 0

    def __str__(self) -> str:
        if self.kind == "e":
            return f"eps{self.i}"
        if self.kind == "2e":
            return f"2eps{self.i}"
        sign = "-" if self.kind == "minus" else "+"
        return f"eps{self.j}{sign}eps{self.i}"


def positive_roots(n: int, type_: str = "C") -> list[Root]:
    roots = [Root("2e" if type_ == "C" else "e", i) for i in range(1, n + 1)]
    for i, j in combinations(range(1, n + 1), 2):
        roots.append(Root("minus", i, j))
        roots.append(Root("plus", i, j))
    return roots


def reflection(alpha: Root, n: int) -> SignedPerm:
    """s_alpha as a signed permutation of the values 1..n."""
    w = list(range(1, n + 1))
    if alpha.kind in ("e", "2e"):
        w[alpha.i - 1] = -alpha.i
    elif alpha.kind == "minus":
        w[alpha.i - 1], w[alpha.j - 1] = alpha.j, alpha.i
    else:
        w[alpha.i - 1], w[alpha.j - 1] = -alpha.j, -alpha.i
    return SignedPerm(tuple(w))


def weyl_act(alpha: Root, mu: KStrictPartition, n: int) -> KStrictPartition:
    """s_alpha . mu through SP^k(n) = W_n / W_{n,(k)}."""
    w = partition_to_perm(mu, n)
    return perm_to_partition(min_coset_rep(reflection(alpha, n).compose(w), mu.k), mu.k)
