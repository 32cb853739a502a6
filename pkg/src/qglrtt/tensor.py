"""Graded vector spaces, Koszul-signed tensor products, and R-matrices.

The natural representation attached to a parity sequence s lives on a space
with basis e_1 .. e_N graded by |e_i| = s_i.  Operators are sparse exact
matrices; tensor products of operators carry the Koszul sign, so for
homogeneous A, B:  (A (x) B)(v (x) w) = (-1)^{|B||v|} Av (x) Bw.
"""

from __future__ import annotations

from .parity import ParitySeq
from .scalars import QScalar, QZERO, QONE, Q


class Space:
    """A finite-dimensional Z_2-graded vector space over Q(q)."""

    __slots__ = ("parities",)

    def __init__(self, parities):
        object.__setattr__(self, "parities", tuple(int(p) % 2 for p in parities))

    def __setattr__(self, name, value):
        raise AttributeError("Space instances are immutable")

    @staticmethod
    def natural(s):
        return Space(ParitySeq(s).bits)

    @property
    def dim(self):
        return len(self.parities)

    def parity(self, i):
        return self.parities[i]

    def tensor(self, other):
        return Space(
            tuple(
                (p + r) % 2
                for p in self.parities
                for r in other.parities
            )
        )

    def __eq__(self, other):
        return isinstance(other, Space) and self.parities == other.parities

    def __hash__(self):
        return hash(self.parities)

    def __repr__(self):
        return "Space(%r)" % (self.parities,)


class Mat:
    """A sparse matrix over Q(q) acting on a graded space (0-based indices)."""

    __slots__ = ("space", "entries")

    def __init__(self, space, entries=None):
        self.space = space
        self.entries = {}
        if entries:
            for k, v in entries.items():
                if not v.is_zero():
                    self.entries[k] = v

    @staticmethod
    def identity(space):
        return Mat(space, {(i, i): QONE for i in range(space.dim)})

    @staticmethod
    def zero(space):
        return Mat(space)

    def copy(self):
        m = Mat(self.space)
        m.entries = dict(self.entries)
        return m

    def __getitem__(self, rc):
        return self.entries.get(rc, QZERO)

    def set(self, r, c, v):
        if v.is_zero():
            self.entries.pop((r, c), None)
        else:
            self.entries[(r, c)] = v

    def add_to(self, r, c, v):
        cur = self.entries.get((r, c))
        if cur is None:
            if not v.is_zero():
                self.entries[(r, c)] = v
        else:
            nv = cur + v
            if nv.is_zero():
                del self.entries[(r, c)]
            else:
                self.entries[(r, c)] = nv

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.space == other.space
            and self.entries == other.entries
        )

    def __add__(self, other):
        out = self.copy()
        for (r, c), v in other.entries.items():
            out.add_to(r, c, v)
        return out

    def __sub__(self, other):
        out = self.copy()
        for (r, c), v in other.entries.items():
            out.add_to(r, c, -v)
        return out

    def __neg__(self):
        return Mat(self.space, {k: -v for k, v in self.entries.items()})

    def scale(self, c):
        if c.is_zero():
            return Mat(self.space)
        return Mat(self.space, {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other):
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out = Mat(self.space)
        for (r, k), a in self.entries.items():
            hits = by_row.get(k)
            if hits:
                for c, b in hits:
                    out.add_to(r, c, a * b)
        return out

    def map_entries(self, f):
        return Mat(self.space, {k: f(v) for k, v in self.entries.items()})

    def apply(self, vec):
        """Apply to a sparse column vector {index: scalar}."""
        out = {}
        for (r, c), v in self.entries.items():
            a = vec.get(c)
            if a is not None:
                w = v * a
                if not w.is_zero():
                    cur = out.get(r)
                    if cur is None:
                        out[r] = w
                    else:
                        nv = cur + w
                        if nv.is_zero():
                            del out[r]
                        else:
                            out[r] = nv
        return out

    def nonzero_cells(self):
        return sorted(self.entries)

    def __repr__(self):
        return "Mat(dim=%d, nnz=%d)" % (self.space.dim, len(self.entries))


def graded_kron(a: Mat, b: Mat) -> Mat:
    """Tensor product of operators with the Koszul sign convention.

    Entrywise:  (A (x) B)[(i,j),(k,l)] = (-1)^{(|j|+|l|) |k|} A[i,k] B[j,l],
    which agrees with (A (x) B)(v (x) w) = (-1)^{|B||v|} Av (x) Bw for
    homogeneous B and extends it linearly when B mixes parities.
    """
    sa, sb = a.space, b.space
    out = Mat(sa.tensor(sb))
    db = sb.dim
    for (i, k), av in a.entries.items():
        pk = sa.parity(k)
        for (j, l), bv in b.entries.items():
            sign = -1 if pk and (sb.parity(j) + sb.parity(l)) % 2 else 1
            v = av * bv
            if sign < 0:
                v = -v
            out.add_to(i * db + j, k * db + l, v)
    return out


def embed_two_leg(m: Mat, p1: int, p2: int, v: Space, nlegs: int) -> Mat:
    """Embed an operator on V (x) V into legs p1 < p2 of V^{(x) nlegs}.

    Signs follow from applying the leg-p2 elementary factor first and the
    leg-p1 factor second; unaffected legs must match.
    """
    if not 0 <= p1 < p2 < nlegs:
        raise ValueError("need 0 <= p1 < p2 < nlegs")
    n = v.dim
    big = v
    for _ in range(nlegs - 1):
        big = big.tensor(v)
    out = Mat(big)
    others = [t for t in range(nlegs) if t not in (p1, p2)]

    def tuples(depth, cur, acc):
        if depth == len(others):
            acc.append(tuple(cur))
            return
        for x in range(n):
            cur.append(x)
            tuples(depth + 1, cur, acc)
            cur.pop()

    rest = []
    tuples(0, [], rest)
    for ((i, j), (k, l)) in [
        (divmod(rr, n), divmod(cc, n)) for (rr, cc) in m.entries
    ]:
        val = m.entries[(i * n + j, k * n + l)]
        pe2 = (v.parity(j) + v.parity(l)) % 2
        pe1 = (v.parity(i) + v.parity(k)) % 2
        for fill in rest:
            col = [0] * nlegs
            row = [0] * nlegs
            for t, x in zip(others, fill):
                col[t] = x
                row[t] = x
            col[p1], col[p2] = k, l
            row[p1], row[p2] = i, j
            # decomposing the two-leg matrix into elementary factors absorbs
            # one Koszul sign already stored in its entries, so only the
            # parities of the spectator legs enter here
            sgn = 0
            if pe2:
                sgn += sum(v.parity(col[t]) for t in range(p2) if t != p1)
            if pe1:
                sgn += sum(v.parity(col[t]) for t in range(p1))
            ridx = 0
            cidx = 0
            for t in range(nlegs):
                ridx = ridx * n + row[t]
                cidx = cidx * n + col[t]
            out.add_to(ridx, cidx, -val if sgn % 2 else val)
    return out


# ---------------------------------------------------------------------------
# R-matrices


def perm_matrix(s) -> Mat:
    """The graded flip P(e_i (x) e_j) = (-1)^{|i||j|} e_j (x) e_i."""
    s = ParitySeq(s)
    v = Space.natural(s)
    n = v.dim
    out = Mat(v.tensor(v))
    for i in range(n):
        for j in range(n):
            sign = -1 if v.parity(i) and v.parity(j) else 1
            out.add_to(j * n + i, i * n + j, QScalar.from_int(sign))
    return out


def rmatrix(s) -> Mat:
    """The constant R-matrix of the natural representation.

    R = sum_{i,j} q_i^{delta_ij} E_ii (x) E_jj
        + (q_i - q_i^{-1}) sum_{i<j} E_ji (x) E_ij.
    """
    s = ParitySeq(s)
    v = Space.natural(s)
    n = v.dim
    out = Mat(v.tensor(v))
    for i in range(n):
        for j in range(n):
            coeff = s.q_i(i + 1) if i == j else QONE
            out.add_to(i * n + j, i * n + j, coeff)
    for i in range(n):
        for j in range(i + 1, n):
            coeff = s.q_i(i + 1) - s.q_i(i + 1).inverse()
            # E_ji (x) E_ij sends e_i (x) e_j to e_j (x) e_i; as operators on
            # the flattened space this is entry [(j,i), (i,j)] with the
            # Koszul sign of moving E_ij past e_i
            sign_par = (v.parity(i) + v.parity(j)) % 2 and v.parity(i)
            val = -coeff if sign_par else coeff
            out.add_to(j * n + i, i * n + j, val)
    return out


def qminus() -> QScalar:
    return Q - QScalar.q_power(-1)


def rmatrix_tilde(s) -> Mat:
    """R~ = R - (q - q^{-1}) P, which also equals P R^{-1} P."""
    return rmatrix(s) - perm_matrix(s).scale(qminus())


def rmatrix_q_inverse(s) -> Mat:
    """The R-matrix with q replaced by q^{-1} entrywise."""
    return rmatrix(s).map_entries(lambda x: x.subs_q_inverse())


def rmatrix_tilde_q_inverse(s) -> Mat:
    return rmatrix_tilde(s).map_entries(lambda x: x.subs_q_inverse())


class SeriesMat:
    """A matrix-valued Laurent polynomial in several formal variables.

    Stored as {exponent tuple: Mat}; multiplication adds exponent tuples
    and composes the matrix coefficients (no extra signs: the matrices act
    on a common space and the variables are central).
    """

    __slots__ = ("nvars", "space", "terms")

    def __init__(self, nvars, space, terms=None):
        self.nvars = nvars
        self.space = space
        self.terms = {}
        if terms:
            for e, m in terms.items():
                if not m.is_zero():
                    self.terms[tuple(e)] = m

    def copy(self):
        out = SeriesMat(self.nvars, self.space)
        out.terms = {e: m.copy() for e, m in self.terms.items()}
        return out

    def add_term(self, expo, mat):
        expo = tuple(expo)
        cur = self.terms.get(expo)
        if cur is None:
            if not mat.is_zero():
                self.terms[expo] = mat
        else:
            s = cur + mat
            if s.is_zero():
                del self.terms[expo]
            else:
                self.terms[expo] = s

    def __add__(self, other):
        out = self.copy()
        for e, m in other.terms.items():
            out.add_term(e, m)
        return out

    def __sub__(self, other):
        out = self.copy()
        for e, m in other.terms.items():
            out.add_term(e, -m)
        return out

    def __matmul__(self, other):
        out = SeriesMat(self.nvars, self.space)
        for e1, m1 in self.terms.items():
            for e2, m2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out.add_term(e, m1 @ m2)
        return out

    def is_zero(self):
        return not self.terms

    def map_entries(self, f):
        return SeriesMat(
            self.nvars,
            self.space,
            {e: m.map_entries(f) for e, m in self.terms.items()},
        )

    def nonzero_report(self, varnames):
        out = []
        for e in sorted(self.terms):
            mono = "*".join(
                "%s^%d" % (v, k) for v, k in zip(varnames, e) if k
            ) or "1"
            for (r, c) in self.terms[e].nonzero_cells():
                out.append(
                    {"monomial": mono, "row": r, "col": c,
                     "value": str(self.terms[e][(r, c)])}
                )
        return out


def spectral_rmatrix(s, R=None, Rt=None):
    """R(u, v) = u R - v R~ as a two-variable SeriesMat."""
    R = rmatrix(s) if R is None else R
    Rt = rmatrix_tilde(s) if Rt is None else Rt
    out = SeriesMat(2, R.space)
    out.add_term((1, 0), R)
    out.add_term((0, 1), -Rt)
    return out


def _three_leg(mat2, p1, p2, s):
    v = Space.natural(s)
    return embed_two_leg(mat2, p1, p2, v, 3)


def ybe_residual_constant(s, R=None):
    """R12 R13 R23 - R23 R13 R12 on the triple tensor power."""
    s = ParitySeq(s)
    if R is None:
        R = rmatrix(s)
    r12 = _three_leg(R, 0, 1, s)
    r13 = _three_leg(R, 0, 2, s)
    r23 = _three_leg(R, 1, 2, s)
    return (r12 @ r13 @ r23) - (r23 @ r13 @ r12)


def ybe_residual_spectral(s, R=None, Rt=None):
    """Residual of R12(u,v) R13(u,w) R23(v,w) = R23(v,w) R13(u,w) R12(u,v).

    Returned as a SeriesMat in the monomials u^a v^b w^c.
    """
    s = ParitySeq(s)
    R = rmatrix(s) if R is None else R
    Rt = rmatrix_tilde(s) if Rt is None else Rt
    v3 = _three_leg(R, 0, 1, s).space

    def spectral(p1, p2, var1, var2):
        m = SeriesMat(3, v3)
        e1 = [0, 0, 0]
        e1[var1] = 1
        e2 = [0, 0, 0]
        e2[var2] = 1
        m.add_term(tuple(e1), _three_leg(R, p1, p2, s))
        m.add_term(tuple(e2), -_three_leg(Rt, p1, p2, s))
        return m

    r12 = spectral(0, 1, 0, 1)  # variables (u, v)
    r13 = spectral(0, 2, 0, 2)  # (u, w)
    r23 = spectral(1, 2, 1, 2)  # (v, w)
    return (r12 @ r13 @ r23) - (r23 @ r13 @ r12)


def crossing_residual(s):
    """Residual of R_{q,s}(u,v) R_{q^{-1},s}(u,v) = ((u-v)^2 - (q-q^{-1})^2 uv) Id."""
    s = ParitySeq(s)
    lhs = spectral_rmatrix(s) @ spectral_rmatrix(
        s, rmatrix_q_inverse(s), rmatrix_tilde_q_inverse(s)
    )
    ident = Mat.identity(rmatrix(s).space)
    rhs = SeriesMat(2, ident.space)
    rhs.add_term((2, 0), ident)
    rhs.add_term((1, 1), ident.scale(QScalar.from_int(-2) - qminus() ** 2))
    rhs.add_term((0, 2), ident)
    return lhs - rhs


def rtilde_residuals(s):
    """Exact residuals for the two characterisations of R~.

    Returns (R~ - (R - (q-q^{-1})P),  P R~ P R - Id); the second vanishing
    is equivalent to R~ = P R^{-1} P.
    """
    s = ParitySeq(s)
    R = rmatrix(s)
    Rt = rmatrix_tilde(s)
    P = perm_matrix(s)
    first = Rt - (R - P.scale(qminus()))
    second = (P @ Rt @ P @ R) - Mat.identity(R.space)
    return first, second


def check_ybe(s, spectral=True):
    """Run the YBE checks for one parity sequence; returns JSON-able reports."""
    s = ParitySeq(s)
    reports = []
    res = ybe_residual_constant(s)
    reports.append(
        {
            "sequence": str(s),
            "identity": "constant-ybe",
            "pass": res.is_zero(),
            "nonzero_entries": [
                {"row": r, "col": c, "value": str(res[(r, c)])}
                for (r, c) in res.nonzero_cells()
            ],
        }
    )
    if spectral:
        sres = ybe_residual_spectral(s)
        reports.append(
            {
                "sequence": str(s),
                "identity": "spectral-ybe",
                "pass": sres.is_zero(),
                "nonzero_entries": sres.nonzero_report(("u", "v", "w")),
            }
        )
    return reports
