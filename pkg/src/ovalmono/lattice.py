"""Integer lattices with symmetric bilinear forms and their reflection groups.

All arithmetic here is exact (Python integers and Fractions): finiteness
verdicts are certificates, not approximations. Vectors are integer tuples in
the generator basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

LatticeVector = tuple[int, ...]


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class GramLattice:
    """Rank-N integer lattice; gram[i][j] is the pairing of generators i, j."""

    gram: tuple[tuple[int, ...], ...]
    root_generated: bool = True

    def __post_init__(self):
        g = tuple(tuple(int(c) for c in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise LatticeError("gram matrix must be symmetric")
        if self.root_generated and any(g[i][i] != 2 for i in range(n)):
            raise LatticeError("root-generated lattice needs all diagonal entries 2")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, u: LatticeVector, v: LatticeVector) -> int:
        g = self.gram
        return sum(u[i] * g[i][j] * v[j]
                   for i in range(self.rank) for j in range(self.rank))

    def pair_basis(self, j: int, v: LatticeVector) -> int:
        return sum(self.gram[j][k] * v[k] for k in range(self.rank))

    def basis_vector(self, j: int) -> LatticeVector:
        return tuple(1 if k == j else 0 for k in range(self.rank))


@dataclass
class OrbitResult:
    finite: bool
    elements: frozenset[LatticeVector] | None = None
    bound: int | None = None
    growth_sample: list[LatticeVector] = field(default_factory=list)


@dataclass
class FinitenessVerdict:
    finite: bool
    # exact leading principal minors when finite; otherwise a kernel basis
    # and/or an orbit-growth witness
    minors: list[Fraction] = field(default_factory=list)
    kernel: list[LatticeVector] = field(default_factory=list)
    growth_witness: list[LatticeVector] = field(default_factory=list)


def reflect(lattice: GramLattice, v: LatticeVector, j: int) -> LatticeVector:
    """Reflection in generator j: v -> v - <e_j, v> e_j, exact."""
    n = lattice.rank
    if not 0 <= j < n:
        raise LatticeError(f"generator index {j} out of range")
    if lattice.gram[j][j] != 2:
        raise LatticeError(f"generator {j} has squared length {lattice.gram[j][j]}, not 2")
    if len(v) != n:
        raise LatticeError("vector length does not match lattice rank")
    c = lattice.pair_basis(j, v)
    out = list(v)
    out[j] -= c
    return tuple(out)


def orbit(lattice: GramLattice, start: LatticeVector, max_size: int = 10_000) -> OrbitResult:
    """Breadth-first closure of a vector under all generating reflections."""
    if max_size < 1:
        raise LatticeError("max_size must be positive")
    start = tuple(int(c) for c in start)
    seen = {start}
    frontier = [start]
    biggest = start
    while frontier:
        nxt = []
        for v in frontier:
            for j in range(lattice.rank):
                w = reflect(lattice, v, j)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if max(map(abs, w), default=0) > max(map(abs, biggest), default=0):
                        biggest = w
                    if len(seen) > max_size:
                        sample = sorted(nxt, key=lambda u: -max(map(abs, u)))[:4]
                        return OrbitResult(False, bound=max_size, growth_sample=sample)
        frontier = nxt
    return OrbitResult(True, elements=frozenset(seen))


def leading_principal_minors(lattice: GramLattice) -> list[Fraction]:
    """Exact leading principal minors of the gram matrix."""
    n = lattice.rank
    out = []
    for k in range(1, n + 1):
        sub = [[Fraction(lattice.gram[i][j]) for j in range(k)] for i in range(k)]
        out.append(_det_fraction(sub))
    return out


def _det_fraction(mat: list[list[Fraction]]) -> Fraction:
    n = len(mat)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, n):
            factor = mat[r][col] * inv
            if factor == 0:
                continue
            for c in range(col, n):
                mat[r][c] -= factor * mat[col][c]
    return det


def gram_kernel(lattice: GramLattice) -> list[LatticeVector]:
    """Basis of the rational kernel of the gram matrix, scaled to primitive
    integer vectors with positive first nonzero entry, sorted."""
    n = lattice.rank
    if n == 0:
        return []
    mat = [[Fraction(lattice.gram[i][j]) for j in range(n)] for i in range(n)]
    # reduced row echelon form
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if mat[r][col] != 0), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [c * inv for c in mat[row]]
        for r in range(n):
            if r != row and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -mat[r][fc]
        basis.append(_primitive(vec))
    return sorted(basis)


def _primitive(vec: list[Fraction]) -> LatticeVector:
    denom = 1
    for c in vec:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    ints = [v // g for v in ints]
    lead = next((v for v in ints if v != 0), 1)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def is_finite(lattice: GramLattice, orbit_cap: int = 10_000) -> FinitenessVerdict:
    """Finiteness certificate for the generated reflection group.

    Finite exactly when the form is positive definite (leading principal
    minors all positive). Degenerate forms (including positive semidefinite
    ones) report finite=False with a kernel witness; a capped orbit run
    attaches a growth witness when one shows up within the cap.
    """
    if not lattice.root_generated or any(lattice.gram[i][i] != 2
                                         for i in range(lattice.rank)):
        raise LatticeError("finiteness test needs a root-generated lattice")
    minors = leading_principal_minors(lattice)
    if all(m > 0 for m in minors):
        return FinitenessVerdict(True, minors=minors)
    kernel = gram_kernel(lattice)
    growth: list[LatticeVector] = []
    for j in range(lattice.rank):
        res = orbit(lattice, lattice.basis_vector(j), max_size=orbit_cap)
        if not res.finite:
            growth = res.growth_sample
            break
    return FinitenessVerdict(False, minors=minors, kernel=kernel,
                             growth_witness=growth)


def group_order_by_enumeration(lattice: GramLattice, max_order: int = 100_000):
    """Exact order of the generated reflection group by BFS over integer
    matrices, or None when max_order is exceeded. Intended for small ranks."""
    n = lattice.rank
    gens = []
    for j in range(n):
        rows = []
        for i in range(n):
            row = [1 if i == k else 0 for k in range(n)]
            if i == j:
                row = [row[k] - lattice.gram[j][k] for k in range(n)]
            rows.append(tuple(row))
        gens.append(tuple(rows))
    ident = tuple(tuple(1 if i == k else 0 for k in range(n)) for i in range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = tuple(
                    tuple(sum(g[i][k] * m[k][j] for k in range(n)) for j in range(n))
                    for i in range(n))
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
                    if len(seen) > max_order:
                        return None
        frontier = nxt
    return len(seen)


def irreducible_components(lattice: GramLattice) -> list[list[int]]:
    """Connected components of the generator graph (edges where the pairing
    of distinct generators is nonzero), as sorted lists of 0-based indices."""
    n = lattice.rank
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if lattice.gram[i][j] != 0:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(sorted(g) for g in groups.values())


# ---------------------------------------------------------------------------
# text format: first line N, then N rows of N integers

def parse_gram_text(text: str) -> GramLattice:
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    rows = [ln for ln in rows if ln]
    if not rows:
        raise LatticeError("empty gram matrix file")
    try:
        n = int(rows[0])
        mat = [tuple(int(tok) for tok in ln.split()) for ln in rows[1:n + 1]]
    except ValueError as exc:
        raise LatticeError(f"malformed gram matrix file: {exc}") from None
    if len(mat) != n or any(len(r) != n for r in mat):
        raise LatticeError("gram matrix file has wrong shape")
    diag_two = all(mat[i][i] == 2 for i in range(n))
    return GramLattice(tuple(mat), root_generated=diag_two)


def format_gram_text(lattice: GramLattice) -> str:
    lines = [str(lattice.rank)]
    for row in lattice.gram:
        lines.append(" ".join(str(c) for c in row))
    return "\n".join(lines) + "\n"
