"""Functions multiplicative over Ostrowski digits.

An AlphaFunction is stored by its atom table: atoms[k][e] is the value at
e * q_k, and the value at any n is the product of the atoms of its digits
(empty product at n = 0).  The canonical family is g(n) = e(theta * sigma(n));
twisting by e(-n * beta) stays inside the class because n = sum eps_k q_k
splits the phase across digit positions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .cfrac import ConvergentTable
from .errors import RangeError, ValidationError
from .numeration import encode, psi, psi_range
from .numerics import frac_mul_int, unit1

ATOM_UNIT_TOL = 1e-12  # slack for the forced v[k][0] = 1 and |v| <= bound checks


@dataclass(frozen=True)
class AlphaFunction:
    """A digit-multiplicative function given by its atom table.

    Row k covers digits 0..a_{k+1} (the row-0 slot at a_1 is carried for
    uniformity but never read, since eps_0 < a_1).  v[k][0] = 1 is forced.
    """

    scale: ConvergentTable
    atoms: tuple[tuple[complex, ...], ...]
    modulus_bound: float = 1.0
    theta: float | None = None  # set when g(n) = e(theta * sigma(n)) exactly

    def __post_init__(self):
        rows = tuple(tuple(complex(v) for v in row) for row in self.atoms)
        object.__setattr__(self, "atoms", rows)
        scale = self.scale
        if len(rows) != scale.rows:
            raise ValidationError(
                f"atom table has {len(rows)} rows, scale certifies {scale.rows} digit positions"
            )
        for k, row in enumerate(rows):
            want = (scale.quotients[k] if k < scale.K else scale.a_next) + 1
            if len(row) != want:
                raise ValidationError(f"atom row {k} has {len(row)} entries, expected {want}")
            if abs(row[0] - 1.0) > ATOM_UNIT_TOL:
                raise ValidationError(f"atom v[{k}][0] = {row[0]} but must equal 1")
            for e, v in enumerate(row):
                if abs(v) > self.modulus_bound + ATOM_UNIT_TOL:
                    raise ValidationError(
                        f"|v[{k}][{e}]| = {abs(v)} exceeds modulus bound {self.modulus_bound}"
                    )

    @property
    def is_unimodular(self) -> bool:
        return all(abs(abs(v) - 1.0) <= ATOM_UNIT_TOL for row in self.atoms for v in row)


def _rows_for(scale: ConvergentTable):
    """(k, digit ceiling a_{k+1}) for every certified digit position."""
    for k in range(scale.rows):
        yield k, (scale.quotients[k] if k < scale.K else scale.a_next)


def from_theta(theta: float, scale: ConvergentTable) -> AlphaFunction:
    """g(n) = e(theta * sigma(n)): every atom at digit e is e(theta * e)."""
    atoms = tuple(
        tuple(unit1(frac_mul_int(e, theta)) for e in range(top + 1))
        for _, top in _rows_for(scale)
    )
    return AlphaFunction(scale, atoms, 1.0, float(theta))


def twist(g: AlphaFunction, beta: float) -> AlphaFunction:
    """Pointwise product with e(-n * beta), realized on the atom table.

    The phase of the atom at e * q_k picks up -e * q_k * beta; reduction mod 1
    goes through exact integer arithmetic (q_k can be as large as 2**63).
    beta = 0 leaves every atom untouched.
    """
    scale = g.scale
    atoms = tuple(
        tuple(
            v * unit1(frac_mul_int(e * scale.q[k], -beta))
            for e, v in enumerate(row)
        )
        for k, row in enumerate(g.atoms)
    )
    return AlphaFunction(scale, atoms, g.modulus_bound, g.theta if beta == 0.0 else None)


def evaluate(g: AlphaFunction, n: int) -> complex:
    """g(n) as the product of digit atoms, in increasing digit order."""
    out = complex(1.0)
    for k, e in enumerate(encode(n, g.scale).digits):
        if e:
            out *= g.atoms[k][e]
    return out


def evaluate_truncated(g: AlphaFunction, lam: int, n: int) -> complex:
    """g_lam(n) = g(psi_lam(n)): only digits below level lam contribute."""
    return evaluate(g, psi(n, lam, g.scale))


def values_range(g: AlphaFunction, count: int) -> np.ndarray:
    """g(n) for n = 0..count-1 as one complex array.

    Level-by-level assembly: the values over [0, q_{i+1}) are a copies of the
    block over [0, q_i) scaled by the atoms at position i, plus a final copy
    of the block over [0, q_{i-1}) scaled by the maximal atom.  Atom products
    accumulate in increasing digit order, the same order evaluate uses; the
    two paths agree exactly when the atoms are exactly representable and to a
    few ulps per factor otherwise (vector and scalar complex products round
    differently).  Prefixes are stable: a longer build extends a shorter one
    bit for bit.
    """
    if count < 0 or count > g.scale.limit:
        raise RangeError(f"count={count} outside [0, {g.scale.limit}] for this scale")
    if count == 0:
        return np.zeros(0, dtype=np.complex128)
    prev = np.ones(1, dtype=np.complex128)  # values over [0, q_0)
    if count == 1:
        return prev.copy()
    q1 = g.scale.q[1]
    cur = np.array(g.atoms[0][:q1], dtype=np.complex128)  # single-digit values
    i = 1
    while len(cur) < count:
        row = g.atoms[i]
        a = len(row) - 1
        out_len = min(a * len(cur) + len(prev), count)
        out = np.empty(out_len, dtype=np.complex128)
        pos = 0
        for b in range(a):
            if pos >= out_len:
                break
            take = min(len(cur), out_len - pos)
            if b == 0:
                out[pos : pos + take] = cur[:take]
            else:
                np.multiply(cur[:take], row[b], out=out[pos : pos + take])
            pos += take
        if pos < out_len:
            take = min(len(prev), out_len - pos)
            np.multiply(prev[:take], row[a], out=out[pos : pos + take])
            pos += take
        if out_len >= count:
            return out[:count]
        prev, cur = cur, out
        i += 1
    return cur[:count]


def trunc_values_range(g: AlphaFunction, lam: int, count: int) -> np.ndarray:
    """g_lam(n) for n = 0..count-1: the base block gathered through psi_lam."""
    base = values_range(g, g.scale.q[lam]) if lam > 0 else values_range(g, 1)
    idx = psi_range(g.scale, lam, count)
    return base[idx]


def load_atoms(document: str | dict, scale: ConvergentTable) -> AlphaFunction:
    """Build an AlphaFunction from a JSON atom table.

    The document maps digit positions to rows of [re, im] pairs:
    {"0": [[1,0], [re,im], ...], "1": ...}.  Every certified position needs a
    row of length a_{k+1} + 1; v[k][0] must be 1.  The modulus bound is taken
    as the largest atom modulus found.
    """
    data = json.loads(document) if isinstance(document, str) else document
    rows = []
    for k, top in _rows_for(scale):
        key = str(k)
        if key not in data:
            raise ValidationError(f"atom table missing row {k}")
        raw = data[key]
        if len(raw) != top + 1:
            raise ValidationError(f"atom row {k} has {len(raw)} entries, expected {top + 1}")
        try:
            rows.append(tuple(complex(float(re), float(im)) for re, im in raw))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"atom row {k} entries must be [re, im] pairs") from exc
    bound = max(abs(v) for row in rows for v in row)
    return AlphaFunction(scale, tuple(rows), bound, None)


# --- function spec grammar ---------------------------------------------------

def parse_fn_spec(text: str, scale: ConvergentTable) -> AlphaFunction:
    """Parse a function spec string against a scale.

    Grammar: ``theta:<real>`` | ``theta:<real>+beta:<real>`` | ``atoms:<path>``
    | ``atoms:<path>+beta:<real>``.  New named families can be registered in
    FN_BUILDERS.
    """
    t = text.strip()
    beta = None
    if "+beta:" in t:
        t, beta_part = t.split("+beta:", 1)
        try:
            beta = float(beta_part)
        except ValueError as exc:
            raise ValidationError(f"bad beta value {beta_part!r}") from exc
    if ":" not in t:
        raise ValidationError(f"unrecognized function spec {text!r}")
    name, arg = t.split(":", 1)
    builder = FN_BUILDERS.get(name)
    if builder is None:
        raise ValidationError(f"unknown function family {name!r} in {text!r}")
    g = builder(arg, scale)
    return twist(g, beta) if beta is not None else g


def _build_theta(arg: str, scale: ConvergentTable) -> AlphaFunction:
    try:
        theta = float(arg)
    except ValueError as exc:
        raise ValidationError(f"bad theta value {arg!r}") from exc
    return from_theta(theta, scale)


def _build_atoms(arg: str, scale: ConvergentTable) -> AlphaFunction:
    with open(arg, "r", encoding="utf-8") as fh:
        return load_atoms(fh.read(), scale)


FN_BUILDERS = {
    "theta": _build_theta,
    "atoms": _build_atoms,
}
