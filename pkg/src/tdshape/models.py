"""Concrete Leonard-pair matrix models and semantic checks on them.

Generators of T act on V = K^(d+1) as the primitive idempotents E_i, E*_i, so a
word in T becomes a product of matrices.  Span statements about words are
checked by exact ranks of the flattened images.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import (BadCharacteristic, DegenerateParameters, DiameterMismatch,
                     EigenvalueMismatch, ParityMismatch)
from .exactla import (QQ, EchelonBasis, Matrix, format_scalar, matrix_sum,
                      parse_scalar, rank)
from .sequences import EigenvalueSequence, SequencePair
from .words import (Generator, Word, enumerate_nonredundant_lifting, is_nonrepeating,
                    is_zigzag)


@dataclass(frozen=True)
class LeonardModel:
    A: Matrix
    Astar: Matrix
    eigen: SequencePair
    E: tuple
    Estar: tuple
    field: object = QQ
    name: str = "custom"

    @property
    def d(self) -> int:
        return self.eigen.primal.d

    @property
    def size(self) -> int:
        return self.A.rows

    def identity(self) -> Matrix:
        return Matrix.identity(self.size, self.field)

    def generator(self, g: Generator) -> Matrix:
        return self.Estar[g.index] if g.starred else self.E[g.index]

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "A": [[format_scalar(a) for a in r] for r in self.A.entries],
            "Astar": [[format_scalar(a) for a in r] for r in self.Astar.entries],
            "theta": [format_scalar(v) for v in self.eigen.theta],
            "theta_star": [format_scalar(v) for v in self.eigen.theta_star],
        }


def idempotents(M: Matrix, eigen: EigenvalueSequence, check: bool = True) -> tuple:
    """E_i = prod_{j != i} (M - theta_j I) / (theta_i - theta_j)."""
    n = M.rows
    f = _field_of(eigen)
    eye = Matrix.identity(n, f)
    shifted = [M - eye.scale(th) for th in eigen]
    out = []
    for i, thi in enumerate(eigen):
        P = eye
        for j, thj in enumerate(eigen):
            if j != i:
                P = P @ shifted[j].scale(1 / (thi - thj))
        out.append(P)
    out = tuple(out)
    if check:
        problems = idempotent_problems(M, eigen, out)
        if problems:
            raise EigenvalueMismatch("; ".join(problems))
    return out


def idempotent_problems(M: Matrix, eigen, E) -> list:
    n = M.rows
    f = _field_of(eigen)
    eye = Matrix.identity(n, f)
    zero = Matrix.zeros(n, n, f)
    problems = []
    for i in range(len(E)):
        if E[i].is_zero():
            problems.append(f"E_{i} is zero")
        for j in range(len(E)):
            prod = E[i] @ E[j]
            if prod != (E[i] if i == j else zero):
                problems.append(f"E_{i} E_{j} != {'E_' + str(i) if i == j else '0'}")
    if matrix_sum(E) != eye:
        problems.append("sum of E_i != I")
    if matrix_sum(E[i].scale(th) for i, th in enumerate(eigen)) != M:
        problems.append("sum theta_i E_i != M")
    return problems


def _field_of(seq):
    v = seq[0]
    from .exactla import FpElement, GF
    return GF(v.p) if isinstance(v, FpElement) else QQ


# --------------------------------------------------------------------------
# Builders
# --------------------------------------------------------------------------

def _check_characteristic(d: int, field):
    p = field.characteristic
    if p and (p <= d or (p == 2 and d >= 1)):
        raise BadCharacteristic(f"characteristic {p} collapses the eigenvalues d-2i for d={d}")


def build_krawtchouk(d: int, field=QQ) -> LeonardModel:
    """A* = diag(d - 2i) and A the sl2 raising-plus-lowering matrix.

    Subdiagonal entries are i and superdiagonal entries d - i + 1, so both
    eigenvalue sequences are (d, d-2, ..., -d).
    """
    _check_characteristic(d, field)
    n = d + 1
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = field(i)
        rows[i - 1][i] = field(d - i + 1)
    A = Matrix(rows)
    theta = EigenvalueSequence([field(d - 2 * i) for i in range(n)])
    Astar = Matrix.diagonal(list(theta), field)
    return LeonardModel(A, Astar, SequencePair(theta, theta),
                        idempotents(A, theta), idempotents(Astar, theta), field,
                        f"krawtchouk(d={d})")


def qracah_parameters(d: int, q=2, h=1, h_star=1, s=3, s_star=7, r1=5,
                      theta0=0, theta_star0=0, field=QQ) -> dict:
    """Parameter array of a q-Racah Leonard system in split form."""
    q, h, hs, s_, ss, r1 = (field(x) for x in (q, h, h_star, s, s_star, r1))
    if q == 0 or any(q**k == 1 for k in range(1, 2 * d + 1)):
        raise DegenerateParameters(f"q={q} is zero or a root of unity of order <= {2 * d}")
    if 0 in (h, hs, s_, ss, r1):
        raise DegenerateParameters("h, h*, s, s*, r1 must be nonzero")
    r2 = s_ * ss * q ** (d + 1) / r1
    t0, ts0 = field(theta0), field(theta_star0)
    theta = [t0 + h * (1 - q**i) * (1 - s_ * q ** (i + 1)) / q**i for i in range(d + 1)]
    theta_star = [ts0 + hs * (1 - q**i) * (1 - ss * q ** (i + 1)) / q**i for i in range(d + 1)]
    phi = [None] + [h * hs * q ** (1 - 2 * i) * (1 - q**i) * (1 - q ** (i - d - 1))
                    * (1 - r1 * q**i) * (1 - r2 * q**i) for i in range(1, d + 1)]
    phi_dual = [None] + [h * hs * q ** (1 - 2 * i) * (1 - q**i) * (1 - q ** (i - d - 1))
                         * (r1 - ss * q**i) * (r2 - ss * q**i) / ss for i in range(1, d + 1)]
    return {"theta": theta, "theta_star": theta_star, "phi": phi, "phi_dual": phi_dual,
            "q": q, "r2": r2}


def build_qracah_leonard(d: int, q=2, field=QQ, **params) -> LeonardModel:
    """Split-form q-Racah model: A lower bidiagonal, A* upper bidiagonal.

    A has diagonal theta_i and subdiagonal 1; A* has diagonal theta*_i and
    superdiagonal phi_1..phi_d.
    """
    pa = qracah_parameters(d, q=q, field=field, **params)
    theta = EigenvalueSequence(pa["theta"])
    theta_star = EigenvalueSequence(pa["theta_star"])
    for name, seq in (("theta", theta), ("theta*", theta_star)):
        if len(set(seq.values)) != d + 1:
            raise DegenerateParameters(f"{name} has repeated values: {list(map(str, seq))}")
    for i in range(1, d + 1):
        if pa["phi"][i] == 0 or pa["phi_dual"][i] == 0:
            raise DegenerateParameters(f"phi_{i} or its dual vanishes")
    n = d + 1
    a = [[field.zero] * n for _ in range(n)]
    b = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = theta[i]
        b[i][i] = theta_star[i]
    for i in range(1, n):
        a[i][i - 1] = field.one
        b[i - 1][i] = pa["phi"][i]
    A, Astar = Matrix(a), Matrix(b)
    model = LeonardModel(A, Astar, SequencePair(theta, theta_star),
                         idempotents(A, theta), idempotents(Astar, theta_star), field,
                         f"qracah(d={d}, q={pa['q']})")
    report = validate_tdsystem(model)
    if not report.ok:
        raise DegenerateParameters(f"q-Racah model fails: {report.failures()}")
    return model


def build_model(family: str, d: int, field=QQ, q=2) -> LeonardModel:
    if family == "krawtchouk":
        return build_krawtchouk(d, field)
    if family == "qracah":
        return build_qracah_leonard(d, q=q, field=field)
    raise ValueError(f"unknown model family {family!r}")


# --------------------------------------------------------------------------
# Import of user-supplied matrices
# --------------------------------------------------------------------------

def rational_eigenvalues(M: Matrix) -> list:
    """Distinct rational eigenvalues, requiring the characteristic polynomial to split."""
    import sympy

    sm = sympy.Matrix([[sympy.Rational(a.numerator, a.denominator) for a in r]
                       for r in M.entries])
    lam = sympy.Symbol("lam")
    roots = sympy.roots(sympy.Poly(sm.charpoly(lam).as_expr(), lam), filter="Q")
    if sum(roots.values()) != M.rows:
        raise EigenvalueMismatch("characteristic polynomial does not split over Q")
    return sorted(Fraction(int(r.p), int(r.q)) for r in roots)


def standard_order(values: list, M: Matrix, other: Matrix) -> list:
    """Order eigenvalues of M so that ``other`` acts tridiagonally on its eigenspaces.

    The eigenspaces are linked when E_i other E_j != 0; a standard ordering
    is a walk along that graph when it is a path.  Falls back to the input
    order otherwise, leaving the failure to :func:`validate_tdsystem`.
    """
    seq = EigenvalueSequence(values)
    E = idempotents(M, seq, check=False)
    n = len(values)
    adj = {i: [j for j in range(n) if j != i and not (E[i] @ other @ E[j]).is_zero()]
           for i in range(n)}
    if n == 1:
        return list(values)
    ends = [i for i in range(n) if len(adj[i]) == 1]
    if len(ends) != 2 or any(len(v) > 2 for v in adj.values()):
        return list(values)
    order, prev = [min(ends)], None
    while len(order) < n:
        nxt = [j for j in adj[order[-1]] if j != prev]
        if not nxt:
            return list(values)
        prev = order[-1]
        order.append(nxt[0])
    return [values[i] for i in order]


def model_from_matrices(A: Matrix, Astar: Matrix, theta=None, theta_star=None,
                        name: str = "imported") -> LeonardModel:
    if theta is None:
        theta = standard_order(rational_eigenvalues(A), A, Astar)
    if theta_star is None:
        theta_star = standard_order(rational_eigenvalues(Astar), Astar, A)
    th, ths = EigenvalueSequence(theta), EigenvalueSequence(theta_star)
    return LeonardModel(A, Astar, SequencePair(th, ths),
                        idempotents(A, th, check=False), idempotents(Astar, ths, check=False),
                        QQ, name)


def model_from_json(data) -> LeonardModel:
    """Read ``{"d", "A", "Astar"}`` with optional ``theta``/``theta_star`` orderings."""
    if isinstance(data, str):
        data = json.loads(data)
    A = Matrix([[parse_scalar(x) for x in r] for r in data["A"]])
    Astar = Matrix([[parse_scalar(x) for x in r] for r in data["Astar"]])
    theta = [parse_scalar(x) for x in data["theta"]] if "theta" in data else None
    theta_star = [parse_scalar(x) for x in data["theta_star"]] if "theta_star" in data else None
    model = model_from_matrices(A, Astar, theta, theta_star)
    if "d" in data and data["d"] != model.d:
        raise DiameterMismatch(f"declared d={data['d']} but A has {model.d + 1} eigenvalues")
    return model


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------

@dataclass
class ModelReport:
    checks: dict = field(default_factory=dict)

    def record(self, name: str, passed: bool, witness=None):
        self.checks[name] = {"pass": bool(passed), "witness": witness}

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks.values())

    def failures(self) -> list:
        return [k for k, c in self.checks.items() if not c["pass"]]

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks}


def algebra_rank(gens: list, size: int, field, max_length: int) -> tuple:
    """Rank of the unital algebra generated by ``gens``, by left multiplication.

    Returns (rank, longest word length used).  Stops at full rank.
    """
    basis = EchelonBasis(size * size)
    eye = Matrix.identity(size, field)
    basis.add(eye.flat())
    frontier, length = [eye], 0
    while frontier and basis.rank < size * size and length < max_length:
        length += 1
        new = []
        for X in frontier:
            for g in gens:
                Y = g @ X
                if basis.add(Y.flat()):
                    new.append(Y)
                    if basis.rank == size * size:
                        return basis.rank, length
        frontier = new
    return basis.rank, length


def validate_tdsystem(m: LeonardModel) -> ModelReport:
    report = ModelReport()
    th, ths = m.eigen.theta, m.eigen.theta_star
    nd, nds = len(th), len(ths)
    distinct = len(set(th)) == nd and len(set(ths)) == nds and nd == nds
    report.record("distinct_eigenvalues", distinct,
                  {"theta": [str(v) for v in th], "theta_star": [str(v) for v in ths]})
    problems = m.eigen.problems() if nd == nds else ["diameters differ"]
    report.record("eigenvalue_sequences", not problems, problems or None)
    p = idempotent_problems(m.A, m.eigen.primal, m.E)
    report.record("idempotents_A", not p, p or None)
    p = idempotent_problems(m.Astar, m.eigen.dual, m.Estar)
    report.record("idempotents_Astar", not p, p or None)

    bad = [(i, j) for i in range(nds) for j in range(nds)
           if abs(i - j) > 1 and not (m.Estar[i] @ m.A @ m.Estar[j]).is_zero()]
    report.record("A_tridiagonal_on_Estar", not bad, bad or None)
    bad = [(i, j) for i in range(nd) for j in range(nd)
           if abs(i - j) > 1 and not (m.E[i] @ m.Astar @ m.E[j]).is_zero()]
    report.record("Astar_tridiagonal_on_E", not bad, bad or None)

    bad = []
    d = max(nd, nds) - 1
    for X, Es, tag in ((m.A, m.Estar, "E*_i A^k E*_j"), (m.Astar, m.E, "E_i A*^k E_j")):
        power = m.identity()
        for k in range(d + 1):
            for i in range(len(Es)):
                for j in range(len(Es)):
                    if k < abs(i - j) and not (Es[i] @ power @ Es[j]).is_zero():
                        bad.append((tag, i, j, k))
            power = power @ X
    report.record("triangularity", not bad, bad or None)

    n = m.size
    r, length = algebra_rank([m.A, m.Astar], n, m.field, 2 * n * n)
    report.record("irreducible", r == n * n, {"algebra_rank": r, "full": n * n,
                                              "word_length": length})
    return report


# --------------------------------------------------------------------------
# Words as matrices
# --------------------------------------------------------------------------

def word_image(m: LeonardModel, w: Word) -> Matrix:
    if w.d != m.d:
        raise DiameterMismatch(f"word over d={w.d} applied to a model with d={m.d}")
    out = m.identity()
    for g in w.letters:
        out = out @ m.generator(g)
    return out


def _word_images(m: LeonardModel, n: int, begin: Generator, end: Generator | None):
    """Yield (indices, image) for every word of length n from begin (to end)."""
    d = m.d

    def walk(prefix, image, starred):
        if len(prefix) == n:
            yield prefix, image
            return
        nxt_star = not starred
        last = len(prefix) == n - 1
        choices = [end.index] if (last and end is not None) else range(d + 1)
        for z in choices:
            g = m.Estar[z] if nxt_star else m.E[z]
            yield from walk(prefix + (z,), image @ g, nxt_star)

    start = m.generator(begin)
    if n == 1:
        if end is None or end == begin:
            yield (begin.index,), start
        return
    yield from walk((begin.index,), start, begin.starred)


def span_ranks(m: LeonardModel, n: int, begin: Generator, end: Generator) -> dict:
    expect = begin.starred if n % 2 == 1 else not begin.starred
    if end.starred != expect:
        raise ParityMismatch(f"no word of length {n} runs from {begin} to {end}")
    dim = m.size ** 2
    all_span, zig_span = EchelonBasis(dim), EchelonBasis(dim)
    count = zcount = 0
    pending = []
    for idx, img in _word_images(m, n, begin, end):
        count += 1
        if is_zigzag(idx):
            zcount += 1
            zig_span.add(img.flat())
        else:
            pending.append(img.flat())
    outside = sum(1 for v in pending if not zig_span.contains(v))
    all_span.extend(zig_span._rows)
    all_span.extend(pending)
    return {"n": n, "begin": str(begin), "end": str(end), "words": count,
            "zigzag_words": zcount, "rank_all": all_span.rank, "rank_zigzag": zig_span.rank,
            "outside": outside}


def verify_span_equality(m: LeonardModel, n: int, begin: Generator, end: Generator) -> bool:
    r = span_ranks(m, n, begin, end)
    return r["rank_all"] == r["rank_zigzag"] and r["outside"] == 0


def eDDDe_ranks(m: LeonardModel, n: int) -> dict:
    """Ranks of e*_0 D D* D ... D e*_0 and e*_0 D e*_0 D ... D e*_0 (n D's each)."""
    if n < 1:
        raise ValueError("n >= 1")
    dim = m.size ** 2
    full, thin = EchelonBasis(dim), EchelonBasis(dim)
    e0 = Generator(True, 0)
    for idx, img in _word_images(m, 2 * n + 1, e0, e0):
        v = img.flat()
        full.add(v)
        if all(idx[k] == 0 for k in range(0, 2 * n + 1, 2)):
            thin.add(v)
    return {"n": n, "rank_full": full.rank, "rank_thin": thin.rank}


def verify_eDDDe(m: LeonardModel, n: int) -> bool:
    r = eDDDe_ranks(m, n)
    return r["rank_full"] == r["rank_thin"]


@dataclass
class ShapeReport:
    d: int
    rho: list
    rho_star: list
    bound: list
    containment: list
    summand_dims: list

    @property
    def bound_holds(self) -> bool:
        return all(r <= b for r, b in zip(self.rho, self.bound))

    @property
    def ok(self) -> bool:
        return (self.bound_holds and all(self.containment) and self.rho == self.rho_star
                and sum(self.rho) == sum(self.rho_star)
                and all(s <= b for s, b in zip(self.summand_dims, self.bound)))

    def to_json(self) -> dict:
        return {"d": self.d, "rho": self.rho, "rho_star": self.rho_star, "bound": self.bound,
                "containment": self.containment, "summand_dims": self.summand_dims,
                "pass": self.ok}

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return (f"rho = {' '.join(map(str, self.rho))}; "
                f"bound {' '.join(map(str, self.bound))}; {verdict}")


def verify_shape_bound(m: LeonardModel) -> ShapeReport:
    """rho_s <= rho_0 C(d, s), via the lifting-word cover of E_s V.

    For each s the column space of E_s must lie in the sum of the column
    spaces of w (ending in E_0) and w' (ending in E*_0) over the nonredundant
    lifting words beginning with e_s; that sum has at most C(d, s) summands
    of dimension at most rho_0.
    """
    d, n = m.d, m.size
    rho = [rank(E) for E in m.E]
    rho_star = [rank(E) for E in m.Estar]
    bound = [rho[0] * comb(d, s) for s in range(d + 1)]
    containment, dims = [], []
    for s in range(d + 1):
        cover = EchelonBasis(n)
        for w in enumerate_nonredundant_lifting(d, s, start_starred=False):
            cover.extend(word_image(m, w).columns())
        dims.append(cover.rank)
        containment.append(all(cover.contains(c) for c in m.E[s].columns()))
    return ShapeReport(d, rho, rho_star, bound, containment, dims)


def probe_independence(m: LeonardModel, n: int, mode: str = "zigzag",
                       start_starred: bool = False) -> dict:
    """Rank of the images of a conjectured-independent word family.

    ``zigzag``: zigzag words of length n with the given starting type.
    ``nonrepeatingZigzag``: nonrepeating zigzag words of length 1..n.
    A rank below the count is evidence about this module only.
    """
    dim = m.size ** 2
    basis = EchelonBasis(dim)
    count = 0
    lengths = [n] if mode == "zigzag" else range(1, n + 1)
    for length in lengths:
        for b in range(m.d + 1):
            for idx, img in _word_images(m, length, Generator(start_starred, b), None):
                if not is_zigzag(idx):
                    continue
                if mode != "zigzag" and not is_nonrepeating(idx):
                    continue
                count += 1
                basis.add(img.flat())
    return {"mode": mode, "n": n, "start_starred": start_starred, "count": count,
            "rank": basis.rank, "ambient": dim, "independent": basis.rank == count}
