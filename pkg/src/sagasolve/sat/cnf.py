"""CNF formulas with a small Tseitin circuit builder.

Gates fold constants and are structurally hashed, so building the same gate
twice returns the same output literal. The constant TRUE is a variable that
is created on first use and pinned by a unit clause.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence


class CnfFormula:
    def __init__(self) -> None:
        self.num_vars = 0
        self.clauses: list[list[int]] = []
        self.probes: dict[str, list[int]] = {}
        self._true: int | None = None
        self._cache: dict[tuple, int] = {}

    # -- variables and clauses -------------------------------------------

    def fresh_vars(self, n: int, probe_name: str | None = None) -> list[int]:
        if n < 1:
            raise ValueError("fresh_vars needs n >= 1")
        if probe_name is not None and probe_name in self.probes:
            raise ValueError(f"duplicate probe name {probe_name!r}")
        out = list(range(self.num_vars + 1, self.num_vars + n + 1))
        self.num_vars += n
        if probe_name is not None:
            self.probes[probe_name] = out
        return out

    def fresh(self) -> int:
        return self.fresh_vars(1)[0]

    def add_probe(self, name: str, lits: Sequence[int]) -> None:
        """Name a group of literals (which may be constants or negations)."""
        if name in self.probes:
            raise ValueError(f"duplicate probe name {name!r}")
        for lit in lits:
            self._check(lit)
        self.probes[name] = list(lits)

    def probe(self, name: str) -> list[int]:
        return self.probes[name]

    def add_clause(self, lits: Iterable[int]) -> None:
        clause = list(lits)
        for lit in clause:
            self._check(lit)
        self.clauses.append(clause)

    def _check(self, lit: int) -> None:
        if lit == 0 or abs(lit) > self.num_vars:
            raise ValueError(f"literal {lit} does not name an allocated variable")

    # -- constants --------------------------------------------------------

    @property
    def true(self) -> int:
        if self._true is None:
            self._true = self.fresh()
            self.clauses.append([self._true])
        return self._true

    @property
    def false(self) -> int:
        return -self.true

    def const(self, value: bool) -> int:
        return self.true if value else -self.true

    def is_const(self, lit: int) -> bool:
        return self._true is not None and abs(lit) == self._true

    def const_value(self, lit: int) -> bool | None:
        if not self.is_const(lit):
            return None
        return lit > 0

    # -- gates ------------------------------------------------------------

    def and_(self, *lits: int) -> int:
        t = self.true
        seen = set()
        for lit in lits:
            if lit == t:
                continue
            if lit == -t or -lit in seen:
                return -t
            seen.add(lit)
        if not seen:
            return t
        if len(seen) == 1:
            return next(iter(seen))
        ins = tuple(sorted(seen))
        key = ("and", ins)
        out = self._cache.get(key)
        if out is not None:
            return out
        out = self.fresh()
        for lit in ins:
            self.clauses.append([-out, lit])
        self.clauses.append([out] + [-lit for lit in ins])
        self._cache[key] = out
        return out

    def or_(self, *lits: int) -> int:
        return -self.and_(*(-lit for lit in lits))

    def xor(self, a: int, b: int) -> int:
        ca, cb = self.const_value(a), self.const_value(b)
        if ca is not None:
            return -b if ca else b
        if cb is not None:
            return -a if cb else a
        if a == b:
            return self.false
        if a == -b:
            return self.true
        negate = (a < 0) != (b < 0)
        x, y = sorted((abs(a), abs(b)))
        key = ("xor", x, y)
        out = self._cache.get(key)
        if out is None:
            out = self.fresh()
            self.clauses += [[-out, x, y], [-out, -x, -y], [out, -x, y], [out, x, -y]]
            self._cache[key] = out
        return -out if negate else out

    def eq(self, a: int, b: int) -> int:
        return -self.xor(a, b)

    def ite(self, c: int, t: int, e: int) -> int:
        cv = self.const_value(c)
        if cv is not None:
            return t if cv else e
        if t == e:
            return t
        if t == -e:
            return self.eq(c, t)
        tv, ev = self.const_value(t), self.const_value(e)
        if tv is not None:
            return self.or_(c, e) if tv else self.and_(-c, e)
        if ev is not None:
            return self.or_(-c, t) if ev else self.and_(c, t)
        if c == t:
            return self.or_(c, e)
        if c == -t:
            return self.and_(-c, e)
        if c == e:
            return self.and_(c, t)
        if c == -e:
            return self.or_(-c, t)
        if c < 0:
            c, t, e = -c, e, t
        key = ("ite", c, t, e)
        out = self._cache.get(key)
        if out is None:
            out = self.fresh()
            self.clauses += [[-c, -t, out], [-c, t, -out], [c, -e, out], [c, e, -out],
                             [-t, -e, out], [t, e, -out]]
            self._cache[key] = out
        return out

    def eq_const(self, bits: Sequence[int], value: int) -> int:
        """Literal that holds iff the little-endian bit group equals ``value``."""
        if value < 0 or value >> len(bits):
            return self.false
        return self.and_(*(b if value >> i & 1 else -b for i, b in enumerate(bits)))

    # -- bit vectors ------------------------------------------------------

    def const_bits(self, value: int, width: int) -> list[int]:
        return [self.const(bool(value >> i & 1)) for i in range(width)]

    def mux_bits(self, c: int, then: Sequence[int], other: Sequence[int]) -> list[int]:
        return [self.ite(c, a, b) for a, b in zip(then, other)]

    def bits_equal(self, a: Sequence[int], b: Sequence[int]) -> int:
        return self.and_(*(self.eq(x, y) for x, y in zip(a, b)))


def gate_and(f: CnfFormula, *lits: int) -> int:
    return f.and_(*lits)


def gate_or(f: CnfFormula, *lits: int) -> int:
    return f.or_(*lits)


def gate_not(f: CnfFormula, lit: int) -> int:
    return -lit


def gate_xor(f: CnfFormula, a: int, b: int) -> int:
    return f.xor(a, b)


def gate_ite(f: CnfFormula, c: int, t: int, e: int) -> int:
    return f.ite(c, t, e)


def gate_eq_const(f: CnfFormula, bits: Sequence[int], value: int) -> int:
    return f.eq_const(bits, value)
