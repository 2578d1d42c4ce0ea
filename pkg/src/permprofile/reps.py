"""Orthogonal irreducible representations of S_k and the induced basis of R^{k!}.

Each partition of k labels one irreducible representation, given here by
exact matrices over Q(sqrt2, sqrt3, sqrt5, sqrt7).  Matrices for all of S_k
are expanded from two generators (the transposition 2134...k and the
rotation 234...k1) by breadth-first search of the Cayley graph, so that
R(a * b) = R(a) R(b) with the package's left-to-right composition.

The i,j entries of one representation across all of S_k (in lex order)
form a *matrix element* vector in R^{k!}.  Scaled by sqrt(dim/k!), the k!
matrix elements of all representations are the columns of an exactly
orthogonal matrix U_k.  Grouping columns by r = k - (first part of the
partition) splits R^{k!} into the orthogonal subspaces V_0, ..., V_{k-1}
used throughout the moments and statistics modules.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations as iter_permutations
from math import factorial
from pathlib import Path

from ._generators import GENERATORS
from .errors import HomomorphismViolation, InvalidTableau, MissingGenerators
from .perms import Permutation, all_permutations
from .qfield import ONE, ZERO, QNum, qdot, sqrt_rational

MAX_EMBEDDED_K = 5

Matrix = tuple[tuple[QNum, ...], ...]


def transposition(k: int) -> Permutation:
    """The generator 2134...k."""
    return Permutation([2, 1] + list(range(3, k + 1)))


def rotation(k: int) -> Permutation:
    """The generator 234...k1."""
    return Permutation(list(range(2, k + 1)) + [1])


def partitions(k: int) -> list[tuple[int, ...]]:
    """All partitions of k in the canonical (reverse-lexicographic) order.

    The first part is non-increasing along the list, so the blocks
    r = k - first part come out contiguous and ordered r = 0, ..., k-1.
    """
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, cap: int, prefix: tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(k, k, ())
    return out


def dim_partition(lam: tuple[int, ...]) -> int:
    """Dimension of the representation for this partition (hook lengths)."""
    k = sum(lam)
    cols = [sum(1 for row in lam if row > j) for j in range(lam[0])]
    prod = 1
    for i, row in enumerate(lam):
        for j in range(row):
            prod *= (row - j) + (cols[j] - i) - 1
    return factorial(k) // prod


def standard_tableaux_count(lam: tuple[int, ...]) -> int:
    """Number of standard Young tableaux of this shape, by brute enumeration.

    Independent oracle for dim_partition; only sensible for small shapes.
    """
    k = sum(lam)
    rows = len(lam)

    def rec(filled: tuple[int, ...], value: int) -> int:
        if value > k:
            return 1
        total = 0
        for i in range(rows):
            if filled[i] < lam[i] and (i == 0 or filled[i] < filled[i - 1]):
                total += rec(filled[:i] + (filled[i] + 1,) + filled[i + 1 :], value + 1)
        return total

    return rec((0,) * rows, 1)


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(tuple(qdot(row, col) for col in bt) for row in a)


def _mat_identity(d: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d))


def _is_orthogonal(m: Matrix) -> bool:
    d = len(m)
    for i in range(d):
        for j in range(i, d):
            want = ONE if i == j else ZERO
            if qdot(m[i], m[j]) != want:
                return False
    return True


@dataclass(frozen=True)
class RepTable:
    """One irreducible representation: an exact matrix for every element of S_k."""

    lam: tuple[int, ...]
    dim: int
    matrices: dict[Permutation, Matrix]

    @property
    def k(self) -> int:
        return sum(self.lam)

    def matrix(self, perm: Permutation) -> Matrix:
        return self.matrices[perm]

    def entry_vector(self, i: int, j: int) -> tuple[QNum, ...]:
        """Matrix element (i, j), 1-based, as a vector over S_k in lex order."""
        if not (1 <= i <= self.dim and 1 <= j <= self.dim):
            raise ValueError(f"indices ({i},{j}) out of range for dim {self.dim}")
        return tuple(
            self.matrices[p][i - 1][j - 1] for p in all_permutations(self.k)
        )


def load_generators(
    k: int, lam: tuple[int, ...], generator_file: str | Path | None = None
) -> tuple[Matrix, Matrix]:
    """The pair (R(t_k), R(r_k)) of exact generator matrices for a partition.

    Embedded tables cover k <= 5.  For k = 6 a plug-in JSON file must be
    supplied (see read_generator_file for the format); a plug-in file also
    overrides the embedded matrices for smaller k when given.
    """
    lam = tuple(lam)
    if sum(lam) != k or any(a < b for a, b in zip(lam, lam[1:])) or min(lam, default=0) < 1:
        raise ValueError(f"{lam} is not a partition of {k}")
    if generator_file is not None:
        table = read_generator_file(generator_file, k)
        if lam in table:
            return table[lam]
    if lam == (k,):
        return ((ONE,),), ((ONE,),)
    if lam == (1,) * k:
        sign_rot = ONE if (k - 1) % 2 == 0 else -ONE
        return ((-ONE,),), ((sign_rot,),)
    if (k, lam) in GENERATORS:
        tau_m, rho_m = GENERATORS[(k, lam)]
        return tuple(map(tuple, tau_m)), tuple(map(tuple, rho_m))
    raise MissingGenerators(
        f"no generator matrices for k={k}, partition {lam}; "
        f"embedded tables cover k <= {MAX_EMBEDDED_K}, larger k needs a plug-in file"
    )


def read_generator_file(path: str | Path, k: int) -> dict[tuple[int, ...], tuple[Matrix, Matrix]]:
    """Parse a generator plug-in file.

    Format: a JSON list of objects {"k": int, "lambda": [parts],
    "tau": [[qnum]], "rho": [[qnum]]} where each qnum is
    {radicand: [num, den]} (see QNum.to_json_dict).
    """
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = [data]
    out = {}
    for rec in data:
        if rec.get("k") != k:
            continue
        lam = tuple(int(x) for x in rec["lambda"])
        tau_m = tuple(tuple(QNum.from_json_dict(e) for e in row) for row in rec["tau"])
        rho_m = tuple(tuple(QNum.from_json_dict(e) for e in row) for row in rec["rho"])
        out[lam] = (tau_m, rho_m)
    return out


def expand_rep(
    k: int, lam: tuple[int, ...], gens: tuple[Matrix, Matrix] | None = None,
    generator_file: str | Path | None = None,
) -> RepTable:
    """Expand generator matrices to all of S_k over the Cayley graph.

    Breadth-first search from the identity assigns each permutation the
    product of generator matrices along its discovered word.  Every edge of
    the Cayley graph (including the redundant ones) is checked for
    consistency, and every matrix for exact orthogonality, so corrupted
    generator data raises instead of producing a bad table.
    """
    if gens is None:
        gens = load_generators(k, lam, generator_file)
    tau_m, rho_m = gens
    dim = len(tau_m)
    gen_pairs = [(transposition(k), tau_m), (rotation(k), rho_m)]

    table: dict[Permutation, Matrix] = {Permutation.identity(k): _mat_identity(dim)}
    queue = deque([Permutation.identity(k)])
    while queue:
        p = queue.popleft()
        for g, mg in gen_pairs:
            q = p * g
            prod = _mat_mul(table[p], mg)
            known = table.get(q)
            if known is None:
                table[q] = prod
                queue.append(q)
            elif known != prod:
                raise HomomorphismViolation(
                    f"inconsistent Cayley edge at {q} for partition {lam}"
                )
    if len(table) != factorial(k):
        raise HomomorphismViolation(
            f"generators did not reach all of S_{k} (got {len(table)})"
        )
    for p, m in table.items():
        if not _is_orthogonal(m):
            raise HomomorphismViolation(f"matrix for {p} not orthogonal ({lam})")
    return RepTable(tuple(lam), dim, table)


@lru_cache(maxsize=None)
def rep_table(k: int, lam: tuple[int, ...]) -> RepTable:
    """Cached expansion from the embedded generator tables."""
    return expand_rep(k, lam)


@dataclass(frozen=True)
class BasisMatrix:
    """The orthogonal k! x k! matrix whose columns are the normalized matrix
    elements sqrt(dim/k!) * (entry (i,j) over S_k in lex order).

    Column order: partitions in canonical order, then (i, j) row-major.
    ``block`` maps each column to r = k - first part of its partition.
    """

    k: int
    labels: tuple[tuple[tuple[int, ...], int, int], ...]
    columns: tuple[tuple[QNum, ...], ...]
    block: tuple[int, ...]

    @property
    def size(self) -> int:
        return factorial(self.k)

    def block_columns(self, r: int) -> list[int]:
        return [c for c, b in enumerate(self.block) if b == r]

    def block_dims(self) -> list[int]:
        return [len(self.block_columns(r)) for r in range(self.k)]

    def column_of_label(self, lam: tuple[int, ...], i: int, j: int) -> int:
        return self.labels.index((tuple(lam), i, j))

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "columns": [
                {
                    "partition": list(lam),
                    "i": i,
                    "j": j,
                    "block": self.block[c],
                    "entries": [e.to_json_dict() for e in self.columns[c]],
                }
                for c, (lam, i, j) in enumerate(self.labels)
            ],
        }

    def to_csv(self) -> str:
        header = ["pattern"] + [
            f"{'.'.join(map(str, lam))}:{i}{j}" for lam, i, j in self.labels
        ]
        lines = [",".join(header)]
        for idx, p in enumerate(all_permutations(self.k)):
            row = ["".join(map(str, p.images))] + [
                str(col[idx]) for col in self.columns
            ]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def build_basis(k: int, generator_file: str | None = None) -> BasisMatrix:
    """Assemble the orthogonal basis of R^{k!} from all representations."""
    labels = []
    columns = []
    block = []
    for lam in partitions(k):
        if generator_file is None:
            table = rep_table(k, lam)
        else:
            table = expand_rep(k, lam, generator_file=generator_file)
        norm = sqrt_rational(Fraction(table.dim, factorial(k)))
        r = k - lam[0]
        for i in range(1, table.dim + 1):
            for j in range(1, table.dim + 1):
                vec = table.entry_vector(i, j)
                columns.append(tuple(norm * e for e in vec))
                labels.append((lam, i, j))
                block.append(r)
    basis = BasisMatrix(k, tuple(labels), tuple(columns), tuple(block))
    dims = basis.block_dims()
    if sum(dims) != factorial(k):
        raise HomomorphismViolation(f"block dimensions {dims} do not sum to {k}!")
    return basis


def project(v, r: int, basis: BasisMatrix) -> tuple[QNum, ...]:
    """Orthogonal projection of a length-k! vector onto the block-r subspace.

    Exact: rational inputs stay inside the radical field.
    """
    if not 0 <= r <= basis.k - 1:
        raise ValueError(f"block index {r} out of range 0..{basis.k - 1}")
    v = tuple(v)
    if len(v) != basis.size:
        raise ValueError(f"vector length {len(v)} != {basis.size}")
    out = [ZERO] * basis.size
    for c in basis.block_columns(r):
        col = basis.columns[c]
        coef = qdot(col, v)
        if coef.is_zero():
            continue
        for idx in range(basis.size):
            out[idx] = out[idx] + coef * col[idx]
    return tuple(out)


def subgroup_fixing_prefix(k: int, l: int) -> list[Permutation]:
    """The copy of S_l inside S_k fixing 1, ..., k-l pointwise."""
    if not 1 <= l <= k:
        raise ValueError(f"need 1 <= l <= k, got l={l}")
    head = tuple(range(1, k - l + 1))
    return [
        Permutation(head + tail)
        for tail in iter_permutations(range(k - l + 1, k + 1))
    ]


def coset_sum(rep: RepTable, l: int, alpha: Permutation, beta: Permutation) -> Matrix:
    """Sum of R(sigma) over the two-sided coset alpha S_l beta (l! terms)."""
    k = rep.k
    members = [alpha * tau * beta for tau in subgroup_fixing_prefix(k, l)]
    d = rep.dim
    total = [[ZERO] * d for _ in range(d)]
    for sigma in members:
        m = rep.matrix(sigma)
        for i in range(d):
            for j in range(d):
                total[i][j] = total[i][j] + m[i][j]
    return tuple(tuple(row) for row in total)


# -- group algebra and Young symmetrizers -----------------------------------


@dataclass(frozen=True)
class GroupAlgebraElt:
    """A finitely supported rational combination of permutations.

    The product convolves supports with the package's left-to-right
    composition.
    """

    coeffs: tuple[tuple[Permutation, Fraction], ...]

    @classmethod
    def from_dict(cls, d: dict[Permutation, Fraction]) -> "GroupAlgebraElt":
        items = tuple(
            (p, Fraction(c)) for p, c in sorted(d.items(), key=lambda pc: pc[0].images) if c
        )
        return cls(items)

    def as_dict(self) -> dict[Permutation, Fraction]:
        return dict(self.coeffs)

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElt):
            acc: dict[Permutation, Fraction] = {}
            for p, cp in self.coeffs:
                for q, cq in other.coeffs:
                    pq = p * q
                    s = acc.get(pq, Fraction(0)) + cp * cq
                    if s:
                        acc[pq] = s
                    else:
                        acc.pop(pq, None)
            return GroupAlgebraElt.from_dict(acc)
        if isinstance(other, (int, Fraction)):
            return GroupAlgebraElt.from_dict({p: c * other for p, c in self.coeffs})
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, GroupAlgebraElt):
            return NotImplemented
        acc = dict(self.coeffs)
        for q, cq in other.coeffs:
            s = acc.get(q, Fraction(0)) + cq
            if s:
                acc[q] = s
            else:
                acc.pop(q, None)
        return GroupAlgebraElt.from_dict(acc)

    def is_scalar_multiple_of(self, other: "GroupAlgebraElt") -> Fraction | None:
        """The rational m with self = m * other, or None."""
        if not other.coeffs:
            return Fraction(0) if not self.coeffs else None
        d_self, d_other = self.as_dict(), other.as_dict()
        p0, c0 = other.coeffs[0]
        m = d_self.get(p0, Fraction(0)) / c0
        for p, c in d_other.items():
            if d_self.get(p, Fraction(0)) != m * c:
                return None
        if any(p not in d_other for p in d_self):
            return None
        return m


def _perms_preserving(k: int, groups: list[tuple[int, ...]], signed: bool):
    """All permutations preserving each group setwise, with optional signs."""
    out: dict[Permutation, Fraction] = {}
    for choice in _product_of_permutations(groups):
        img = list(range(1, k + 1))
        for group, perm_of_group in choice:
            for src, dst in zip(group, perm_of_group):
                img[src - 1] = dst
        p = Permutation(img)
        sign = 1
        if signed:
            sign = _sign_of(img)
        out[p] = Fraction(sign)
    return out


def _product_of_permutations(groups):
    if not groups:
        yield []
        return
    head, *rest = groups
    for perm_of_head in iter_permutations(head):
        for tail in _product_of_permutations(rest):
            yield [(head, perm_of_head)] + tail


def _sign_of(img: list[int]) -> int:
    seen = [False] * len(img)
    sign = 1
    for start in range(len(img)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = img[i] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def tableau_shape(rows) -> tuple[int, ...]:
    return tuple(len(r) for r in rows)


def young_symmetrizer(rows) -> GroupAlgebraElt:
    """The Young symmetrizer of a tableau, given as rows of entries.

    The tableau's rows determine the row group P (permutations preserving
    each row setwise) and its columns the column group Q.  The result is
    the classical product of the row symmetrizer sum(P) and the signed
    column antisymmetrizer sum(sign * Q):  the convolution places each
    row-group element to the left of each column-group element.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    shape = tableau_shape(rows)
    k = sum(shape)
    if any(a < b for a, b in zip(shape, shape[1:])) or min(shape, default=0) < 1:
        raise InvalidTableau(f"shape {shape} is not a partition")
    content = sorted(x for r in rows for x in r)
    if content != list(range(1, k + 1)):
        raise InvalidTableau(f"rows {rows} do not contain 1..{k} exactly once")
    cols = []
    for j in range(shape[0]):
        cols.append(tuple(row[j] for row in rows if len(row) > j))
    a_t = GroupAlgebraElt.from_dict(_perms_preserving(k, rows, signed=False))
    b_t = GroupAlgebraElt.from_dict(_perms_preserving(k, cols, signed=True))
    # b * a reads left to right: each term applies a column permutation,
    # then a row permutation -- the classical composite
    return b_t * a_t


def row_group(rows) -> list[Permutation]:
    rows = [tuple(int(x) for x in r) for r in rows]
    return sorted(
        _perms_preserving(sum(len(r) for r in rows), rows, signed=False),
        key=lambda p: p.images,
    )


def column_group(rows) -> list[Permutation]:
    rows = [tuple(int(x) for x in r) for r in rows]
    shape = tableau_shape(rows)
    cols = [
        tuple(row[j] for row in rows if len(row) > j) for j in range(shape[0])
    ]
    return sorted(
        _perms_preserving(sum(shape), cols, signed=False), key=lambda p: p.images
    )
