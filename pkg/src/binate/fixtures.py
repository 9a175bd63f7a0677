"""Small permutation groups used as fixtures: all 42 groups of order <= 16."""

from __future__ import annotations

from typing import Callable, Hashable, Sequence

from .finite import FiniteGroup, closure
from .perm import Permutation, parse_cycles


def cyclic(n: int) -> FiniteGroup:
    if n == 1:
        return closure([], degree=1)
    return _named(closure([Permutation(tuple((i + 1) % n for i in range(n)))]), f"Z{n}")


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return closure([], degree=1)
    gens = [Permutation.from_cycles([(1, 2)], n)]
    if n > 2:
        gens.append(Permutation.from_cycles([tuple(range(1, n + 1))], n))
    return _named(closure(gens), f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 3:
        return closure([], degree=max(n, 1))
    gens = [Permutation.from_cycles([(1, 2, k)], n) for k in range(3, n + 1)]
    return _named(closure(gens), f"A{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n (n >= 3)."""
    rot = Permutation(tuple((i + 1) % n for i in range(n)))
    ref = Permutation(tuple((-i) % n for i in range(n)))
    return _named(closure([rot, ref]), f"D{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H acting on the disjoint union of the two point sets."""
    m, n = G.degree, H.degree

    def left(p: Permutation) -> Permutation:
        return Permutation(p.images + tuple(range(m, m + n)))

    def right(p: Permutation) -> Permutation:
        return Permutation(tuple(range(m)) + tuple(m + i for i in p.images))

    gens = [left(g) for g in G.generators] + [right(h) for h in H.generators]
    name = f"{G.name}x{H.name}" if G.name and H.name else None
    return _named(closure(gens, degree=m + n), name)


def regular_representation(
    elements: Sequence[Hashable], mul: Callable, name: str | None = None
) -> FiniteGroup:
    """Left-regular permutation representation of an abstract finite group."""
    idx = {x: i for i, x in enumerate(elements)}
    gens = [Permutation(tuple(idx[mul(g, h)] for h in elements)) for g in elements]
    return _named(closure(gens, degree=len(elements)), name)


def semidirect_cyclic(m: int, n: int, r: int, name: str | None = None) -> FiniteGroup:
    """Z_m x| Z_n with the generator of Z_n acting as multiplication by r (r^n = 1 mod m)."""
    if pow(r, n, m) != 1 % m:
        raise ValueError(f"{r}^{n} != 1 mod {m}")
    els = [(a, b) for b in range(n) for a in range(m)]

    def mul(x, y):
        return ((x[0] + pow(r, x[1], m) * y[0]) % m, (x[1] + y[1]) % n)

    return regular_representation(els, mul, name)


def dicyclic(n: int) -> FiniteGroup:
    """Dic_n of order 4n: <a, x | a^2n, x^2 = a^n, x a x^-1 = a^-1>; Dic_2 = Q8."""
    els = [(k, s) for s in range(2) for k in range(2 * n)]

    def mul(p, q):
        (k, s), (l, t) = p, q
        k2 = k + (l if s == 0 else -l)
        if s and t:
            return ((k2 + n) % (2 * n), 0)
        return (k2 % (2 * n), (s + t) % 2)

    return regular_representation(els, mul, "Q8" if n == 2 else f"Dic{n}")


def quaternion() -> FiniteGroup:
    return dicyclic(2)


def _z2sq_by_z4() -> FiniteGroup:
    # (Z2 x Z2) x| Z4, generator of Z4 swapping the two factors
    els = [(a, b, k) for k in range(4) for a in range(2) for b in range(2)]

    def mul(x, y):
        a, b, k = x
        c, d, l = y
        if k % 2:
            c, d = d, c
        return ((a + c) % 2, (b + d) % 2, (k + l) % 4)

    return regular_representation(els, mul, "(Z2xZ2)xZ4")


def _pauli() -> FiniteGroup:
    # central product Z4 o D4 realised as the 1-qubit Pauli group
    # elements (phase in Z4, x bit, z bit) representing i^p X^x Z^z
    els = [(p, x, z) for p in range(4) for x in range(2) for z in range(2)]

    def mul(u, v):
        p, x1, z1 = u
        q, x2, z2 = v
        # Z^z1 X^x2 = (-1)^(z1 x2) X^x2 Z^z1
        return ((p + q + 2 * z1 * x2) % 4, (x1 + x2) % 2, (z1 + z2) % 2)

    return regular_representation(els, mul, "Pauli")


def _named(G: FiniteGroup, name: str | None) -> FiniteGroup:
    G.name = name
    return G


def small_groups(max_order: int = 16) -> list[tuple[str, FiniteGroup]]:
    """One representative of every isomorphism type of order <= ``max_order`` (at most 16)."""
    if max_order > 16:
        raise ValueError("fixture list covers orders <= 16 only")
    Z, D, dp = cyclic, dihedral, direct_product
    table: list[tuple[str, Callable[[], FiniteGroup]]] = [
        ("1", lambda: Z(1)),
        ("Z2", lambda: Z(2)),
        ("Z3", lambda: Z(3)),
        ("Z4", lambda: Z(4)),
        ("Z2xZ2", lambda: dp(Z(2), Z(2))),
        ("Z5", lambda: Z(5)),
        ("Z6", lambda: Z(6)),
        ("S3", lambda: symmetric(3)),
        ("Z7", lambda: Z(7)),
        ("Z8", lambda: Z(8)),
        ("Z4xZ2", lambda: dp(Z(4), Z(2))),
        ("Z2^3", lambda: dp(dp(Z(2), Z(2)), Z(2))),
        ("D4", lambda: D(4)),
        ("Q8", quaternion),
        ("Z9", lambda: Z(9)),
        ("Z3xZ3", lambda: dp(Z(3), Z(3))),
        ("Z10", lambda: Z(10)),
        ("D5", lambda: D(5)),
        ("Z11", lambda: Z(11)),
        ("Z12", lambda: Z(12)),
        ("Z6xZ2", lambda: dp(Z(6), Z(2))),
        ("A4", lambda: alternating(4)),
        ("D6", lambda: D(6)),
        ("Dic3", lambda: dicyclic(3)),
        ("Z13", lambda: Z(13)),
        ("Z14", lambda: Z(14)),
        ("D7", lambda: D(7)),
        ("Z15", lambda: Z(15)),
        ("Z16", lambda: Z(16)),
        ("Z4xZ4", lambda: dp(Z(4), Z(4))),
        ("(Z2xZ2)xZ4", _z2sq_by_z4),
        ("Z4xZ4_semi", lambda: semidirect_cyclic(4, 4, 3, "Z4xZ4_semi")),
        ("Z8xZ2", lambda: dp(Z(8), Z(2))),
        ("M16", lambda: semidirect_cyclic(8, 2, 5, "M16")),
        ("D8", lambda: D(8)),
        ("SD16", lambda: semidirect_cyclic(8, 2, 3, "SD16")),
        ("Q16", lambda: dicyclic(4)),
        ("Z4xZ2xZ2", lambda: dp(dp(Z(4), Z(2)), Z(2))),
        ("Z2xD4", lambda: dp(Z(2), D(4))),
        ("Z2xQ8", lambda: dp(Z(2), quaternion())),
        ("Pauli", _pauli),
        ("Z2^4", lambda: dp(dp(dp(Z(2), Z(2)), Z(2)), Z(2))),
    ]
    out = []
    for name, build in table:
        G = build()
        if G.order <= max_order:
            G.name = name
            out.append((name, G))
    return out


NAMED = {
    "S3": lambda: symmetric(3),
    "S4": lambda: symmetric(4),
    "A4": lambda: alternating(4),
    "A5": lambda: alternating(5),
    "Q8": quaternion,
    "D4": lambda: dihedral(4),
}


def named_group(text: str) -> FiniteGroup:
    """Resolve ``Zn``, ``Sn``, ``An``, ``Dn``, ``Q8`` or a generator list in cycle notation."""
    from .perm import parse_generators

    s = text.strip()
    if s in NAMED:
        return NAMED[s]()
    if len(s) > 1 and s[0] in "ZSAD" and s[1:].isdigit():
        n = int(s[1:])
        return {"Z": cyclic, "S": symmetric, "A": alternating, "D": dihedral}[s[0]](n)
    return closure(parse_generators(s))


def z2_with_name() -> tuple[FiniteGroup, dict[str, Permutation]]:
    """Z/2 = {1, g} on two points, with ``g`` named."""
    g = parse_cycles("(1 2)")
    return _named(closure([g]), "Z2"), {"g": g}
