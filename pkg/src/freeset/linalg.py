"""Linear solvers for the slope systems.

Two independent backends:

* ``solve_float``: dense LU with partial pivoting (LAPACK through scipy), a
  pivot-size guard and one round of iterative refinement.
* ``solve_rational``: sparse Gaussian elimination over the rationals with a
  Markowitz-style pivot choice.  gmpy2's ``mpq`` is used internally when it is
  installed; inputs and outputs are ``Fraction``.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import SingularSystem

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction


def permutation_parity(perm: Sequence[int]) -> int:
    """+1 for even permutations, -1 for odd."""
    seen = [False] * len(perm)
    parity = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


def solve_float(A: np.ndarray, b: np.ndarray, pivot_rtol: float = 1e-12) -> Tuple[np.ndarray, int]:
    """Solve ``A x = b``; returns the solution and the sign of det A."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n = A.shape[0]
    if n == 0:
        return np.zeros(0), 1
    norm = float(np.max(np.sum(np.abs(A), axis=1)))
    if not np.isfinite(norm) or norm == 0.0:
        raise SingularSystem("matrix is zero or not finite")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularSystem
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    diag = np.diag(lu)
    small = np.abs(diag) < pivot_rtol * norm
    if np.any(small):
        raise SingularSystem("pivot below threshold", index=int(np.argmax(small)),
                             pivot=float(np.min(np.abs(diag))), norm=norm)
    x = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
    r = b - A @ x
    x = x + scipy.linalg.lu_solve((lu, piv), r, check_finite=False)
    swaps = int(np.sum(piv != np.arange(n)))
    det_sign = (-1) ** swaps * int(np.prod(np.sign(diag)))
    return x, det_sign


def solve_rational(rows: Sequence[Dict[int, Fraction]], rhs: Sequence[Fraction], n: int) -> Tuple[List[Fraction], int]:
    """Exact sparse elimination.  ``rows[i]`` maps column -> coefficient.

    Raises SingularSystem when no non-zero pivot remains.  Returns the
    solution and the exact sign of the determinant.
    """
    if len(rows) != n or len(rhs) != n:
        raise SingularSystem("system is not square", rows=len(rows), cols=n)
    R: List[Dict[int, object]] = []
    for row in rows:
        R.append({c: _Q(v.numerator, v.denominator) if isinstance(v, Fraction) else _Q(v)
                  for c, v in row.items() if v != 0})
    B = [_Q(v.numerator, v.denominator) if isinstance(v, Fraction) else _Q(v) for v in rhs]
    col_rows: Dict[int, set] = {c: set() for c in range(n)}
    for i, row in enumerate(R):
        for c in row:
            col_rows[c].add(i)
    alive = set(range(n))
    pivots: List[Tuple[int, int]] = []
    sign = 1
    for _ in range(n):
        best = None
        for i in sorted(alive, key=lambda r: (len(R[r]), r))[:8]:
            row = R[i]
            if not row:
                continue
            for c in sorted(row):
                cost = (len(row) - 1) * (len(col_rows[c]) - 1)
                key = (cost, i, c)
                if best is None or key < best:
                    best = key
            if best is not None and best[0] == 0:
                break
        if best is None:
            raise SingularSystem("zero pivot in exact elimination", step=len(pivots))
        _, pr, pc = best
        prow = R[pr]
        pval = prow[pc]
        if pval < 0:
            sign = -sign
        alive.discard(pr)
        for c in prow:
            col_rows[c].discard(pr)
        for i in sorted(col_rows[pc]):
            row = R[i]
            f = row[pc] / pval
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv == 0:
                    if c in row:
                        del row[c]
                        col_rows[c].discard(i)
                else:
                    if c not in row:
                        col_rows[c].add(i)
                    row[c] = nv
            B[i] = B[i] - f * B[pr]
        pivots.append((pr, pc))
    x: Dict[int, object] = {}
    for pr, pc in reversed(pivots):
        row = R[pr]
        acc = B[pr]
        for c, v in row.items():
            if c != pc:
                acc -= v * x[c]
        x[pc] = acc / row[pc]
    sign *= permutation_parity([p[0] for p in pivots]) * permutation_parity([p[1] for p in pivots])
    out = []
    for c in range(n):
        q = x[c]
        out.append(Fraction(int(q.numerator), int(q.denominator)))
    return out, sign
