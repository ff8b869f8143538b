"""Exact scalars, sparse polynomials and symmetric matrices.

Everything in the toolkit computes over one of two coefficient fields: the
rationals or a prime field GF(p).  Scalars are plain ``Fraction`` / ``int``
values tagged with their ``Field``; polynomials and matrices delegate the heavy
lifting to sympy's ``PolyRing`` and ``DomainMatrix`` over the matching domain.
"""
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyRing

from src.errors import FieldMismatchError, InputError

MINUS_INFINITY = float('-inf')

Exponent = Tuple[int, ...]
Number = Union[int, Fraction, str, 'ExactScalar']


@dataclass(frozen=True)
class Field:
    """Descriptor of a coefficient field.

    === Attributes ===

    characteristic: 0 for the rationals, otherwise the prime p.
    """
    characteristic: int

    @classmethod
    def rationals(cls) -> 'Field':
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> 'Field':
        """The prime field GF(p); p is checked for primality."""
        if not isinstance(p, int) or p < 2 or not isprime(p):
            raise InputError("field modulus is not a prime: " + str(p))
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def domain(self) -> Any:
        return _domain(self.characteristic)

    def __str__(self) -> str:
        if self.is_rational:
            return 'QQ'
        return 'GF(' + str(self.characteristic) + ')'

    def scalar(self, value: Number) -> 'ExactScalar':
        return ExactScalar.of(value, self)

    def zero(self) -> 'ExactScalar':
        return ExactScalar.of(0, self)

    def one(self) -> 'ExactScalar':
        return ExactScalar.of(1, self)

    def to_domain(self, value: Number) -> Any:
        """Convert <value> into an element of the sympy domain of this field."""
        s = self.scalar(value)
        if self.is_rational:
            return self.domain(s.value.numerator, s.value.denominator)
        return self.domain(s.value)

    def from_domain(self, element: Any) -> 'ExactScalar':
        dom = self.domain
        if self.is_rational:
            return ExactScalar(Fraction(int(dom.numer(element)),
                                        int(dom.denom(element))), self)
        return ExactScalar(int(dom.to_int(element)) % self.characteristic, self)


@lru_cache(maxsize=None)
def _domain(characteristic: int) -> Any:
    if characteristic == 0:
        return QQ
    return GF(characteristic)


QQ_FIELD = Field.rationals()


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    try:
        if '/' in text:
            num, den = text.split('/')
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise InputError("malformed coefficient literal: " + repr(text))
    return value


@dataclass(frozen=True)
class ExactScalar:
    """A rational in lowest terms, or a residue in [0, p).

    === Attributes ===

    value: a Fraction over QQ, an int in [0, p) over GF(p).
    field: the field the value lives in.
    """
    value: Union[Fraction, int]
    field: Field

    @classmethod
    def of(cls, value: Number, field: Field) -> 'ExactScalar':
        if isinstance(value, ExactScalar):
            if value.field == field:
                return value
            if value.field.is_rational:
                return cls.of(value.value, field)
            raise FieldMismatchError("cannot move " + str(value.field)
                                     + " scalar into " + str(field))
        if isinstance(value, str):
            value = _parse_fraction(value)
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise InputError("not an exact scalar: " + repr(value))
        if field.is_rational:
            return cls(Fraction(value), field)
        p = field.characteristic
        frac = Fraction(value)
        if frac.denominator % p == 0:
            raise InputError("prime " + str(p) + " divides the denominator of "
                             + str(frac))
        return cls(frac.numerator * pow(frac.denominator, -1, p) % p, field)

    def _coerce(self, other: Number) -> 'ExactScalar':
        if isinstance(other, ExactScalar):
            if other.field != self.field:
                raise FieldMismatchError("mixed fields: " + str(self.field)
                                         + " and " + str(other.field))
            return other
        return ExactScalar.of(other, self.field)

    def _wrap(self, value: Union[Fraction, int]) -> 'ExactScalar':
        if self.field.is_rational:
            return ExactScalar(value, self.field)
        return ExactScalar(value % self.field.characteristic, self.field)

    def __add__(self, other: Number) -> 'ExactScalar':
        return self._wrap(self.value + self._coerce(other).value)

    __radd__ = __add__

    def __sub__(self, other: Number) -> 'ExactScalar':
        return self._wrap(self.value - self._coerce(other).value)

    def __rsub__(self, other: Number) -> 'ExactScalar':
        return self._wrap(self._coerce(other).value - self.value)

    def __mul__(self, other: Number) -> 'ExactScalar':
        return self._wrap(self.value * self._coerce(other).value)

    __rmul__ = __mul__

    def __neg__(self) -> 'ExactScalar':
        return self._wrap(-self.value)

    def inverse(self) -> 'ExactScalar':
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in " + str(self.field))
        if self.field.is_rational:
            return ExactScalar(1 / self.value, self.field)
        p = self.field.characteristic
        return ExactScalar(pow(self.value, -1, p), self.field)

    def __truediv__(self, other: Number) -> 'ExactScalar':
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Number) -> 'ExactScalar':
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> 'ExactScalar':
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if self.field.is_rational:
            return ExactScalar(self.value ** exponent, self.field)
        return ExactScalar(pow(self.value, exponent, self.field.characteristic),
                           self.field)

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def to_string(self) -> str:
        """Lossless literal: "num" or "num/den"."""
        if self.field.is_rational:
            frac = self.value
            if frac.denominator == 1:
                return str(frac.numerator)
            return str(frac.numerator) + '/' + str(frac.denominator)
        return str(self.value)

    def __str__(self) -> str:
        return self.to_string()


def scalars(values: Sequence[Number], field: Field) -> List[ExactScalar]:
    return [ExactScalar.of(v, field) for v in values]


@lru_cache(maxsize=None)
def poly_ring(n_vars: int, field: Field) -> PolyRing:
    """Cached grevlex ring in x0, ..., x(n_vars-1) over <field>."""
    if n_vars < 1:
        raise InputError("a polynomial needs at least one variable")
    names = ','.join('x' + str(i) for i in range(n_vars))
    return PolyRing(names, field.domain, grevlex)


class SparsePoly:
    """Multivariate polynomial in n_vars variables over an exact field.

    Thin immutable wrapper around a sympy ``PolyElement``: the term map is the
    element's dict (exponent vector -> nonzero coefficient).

    === Attributes ===

    field: coefficient field.
    element: the underlying sympy ring element. Never mutated.
    """
    field: Field
    element: Any

    def __init__(self, element: Any, field: Field) -> None:
        self.element = element
        self.field = field

    # --- construction ---

    @classmethod
    def from_terms(cls, n_vars: int, terms: Dict[Exponent, Number],
                   field: Field = QQ_FIELD) -> 'SparsePoly':
        ring = poly_ring(n_vars, field)
        coeffs = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n_vars or any(e < 0 for e in exps):
                raise InputError("bad exponent vector " + str(exps)
                                 + " for " + str(n_vars) + " variables")
            c = field.to_domain(coeff)
            if c:
                coeffs[exps] = coeffs.get(exps, field.domain.zero) + c
        return cls(ring.from_dict(coeffs), field)

    @classmethod
    def zero(cls, n_vars: int, field: Field = QQ_FIELD) -> 'SparsePoly':
        return cls(poly_ring(n_vars, field).zero, field)

    @classmethod
    def constant(cls, n_vars: int, value: Number,
                 field: Field = QQ_FIELD) -> 'SparsePoly':
        return cls.from_terms(n_vars, {(0,) * n_vars: value}, field)

    @classmethod
    def variable(cls, n_vars: int, index: int,
                 field: Field = QQ_FIELD) -> 'SparsePoly':
        return cls(poly_ring(n_vars, field).gens[index], field)

    @classmethod
    def linear_form(cls, coefficients: Sequence[Number],
                    field: Field = QQ_FIELD) -> 'SparsePoly':
        n = len(coefficients)
        terms = {}
        for i, c in enumerate(coefficients):
            exps = [0] * n
            exps[i] = 1
            terms[tuple(exps)] = c
        return cls.from_terms(n, terms, field)

    # --- structure ---

    @property
    def ring(self) -> PolyRing:
        return self.element.ring

    @property
    def n_vars(self) -> int:
        return self.ring.ngens

    @property
    def terms(self) -> Dict[Exponent, ExactScalar]:
        return {exps: self.field.from_domain(c)
                for exps, c in self.element.items()}

    def sorted_terms(self) -> List[Tuple[Exponent, ExactScalar]]:
        """Terms in descending grevlex order (canonical display)."""
        return [(exps, self.field.from_domain(c))
                for exps, c in self.element.terms()]

    @property
    def degree(self) -> Union[int, float]:
        if not self.element:
            return MINUS_INFINITY
        return max(sum(exps) for exps in self.element)

    def is_zero(self) -> bool:
        return not self.element

    def is_homogeneous(self, degree: Optional[int] = None) -> bool:
        degrees = {sum(exps) for exps in self.element}
        if not degrees:
            return True
        if len(degrees) != 1:
            return False
        return degree is None or degrees == {degree}

    def coefficient(self, exps: Exponent) -> ExactScalar:
        c = self.element.get(tuple(exps))
        if c is None:
            return self.field.zero()
        return self.field.from_domain(c)

    # --- arithmetic ---

    def _check(self, other: 'SparsePoly') -> None:
        if other.field != self.field:
            raise FieldMismatchError("mixed fields: " + str(self.field)
                                     + " and " + str(other.field))
        if other.n_vars != self.n_vars:
            raise InputError("polynomials live in different variable counts: "
                             + str(self.n_vars) + " and " + str(other.n_vars))

    def __add__(self, other: 'SparsePoly') -> 'SparsePoly':
        self._check(other)
        return SparsePoly(self.element + other.element, self.field)

    def __sub__(self, other: 'SparsePoly') -> 'SparsePoly':
        self._check(other)
        return SparsePoly(self.element - other.element, self.field)

    def __mul__(self, other: Union['SparsePoly', Number]) -> 'SparsePoly':
        if isinstance(other, SparsePoly):
            self._check(other)
            return SparsePoly(self.element * other.element, self.field)
        return self.scale(other)

    __rmul__ = __mul__

    def __neg__(self) -> 'SparsePoly':
        return SparsePoly(-self.element, self.field)

    def __pow__(self, exponent: int) -> 'SparsePoly':
        if exponent < 0:
            raise InputError("negative polynomial power")
        return SparsePoly(self.element ** exponent, self.field)

    def scale(self, c: Number) -> 'SparsePoly':
        return SparsePoly(self.element * self.field.to_domain(c), self.field)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return (self.field == other.field and self.n_vars == other.n_vars
                and dict(self.element) == dict(other.element))

    def __hash__(self) -> int:
        return hash((self.field, self.n_vars,
                     frozenset(self.terms_as_strings().items())))

    def __repr__(self) -> str:
        return 'SparsePoly(' + str(self.element.as_expr()) + ', ' \
            + str(self.field) + ')'

    # --- evaluation and substitution ---

    def evaluate(self, point: Sequence[Number]) -> ExactScalar:
        if len(point) != self.n_vars:
            raise InputError("point has " + str(len(point)) + " coordinates, "
                             "expected " + str(self.n_vars))
        total = self.field.zero()
        values = [self.field.scalar(v) for v in point]
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(values, exps):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def compose(self, images: Sequence['SparsePoly']) -> 'SparsePoly':
        """Substitute images[i] for x_i; all images share one target ring."""
        if len(images) != self.n_vars:
            raise InputError("compose needs " + str(self.n_vars)
                             + " images, got " + str(len(images)))
        target = images[0].ring
        for image in images:
            if image.field != self.field or image.ring != target:
                raise FieldMismatchError("compose images do not share a ring")
        powers: Dict[Tuple[int, int], Any] = {}

        def power(i: int, e: int) -> Any:
            key = (i, e)
            if key not in powers:
                powers[key] = images[i].element ** e
            return powers[key]

        result = target.zero
        for exps, c in self.element.items():
            term = target.ground_new(c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            result = result + term
        return SparsePoly(result, self.field)

    def homogenize(self, degree: Optional[int] = None) -> 'SparsePoly':
        """Homogenize with a new first variable s: sum of s^(d-a) f_a.

        d defaults to the degree of f; a larger <degree> keeps the closure of
        a form of that degree whose top components vanish.
        """
        if self.is_zero():
            return SparsePoly.zero(self.n_vars + 1, self.field)
        d = int(self.degree) if degree is None else degree
        if d < self.degree:
            raise InputError(f"cannot homogenize a degree {self.degree} "
                             f"polynomial to degree {d}")
        ring = poly_ring(self.n_vars + 1, self.field)
        coeffs = {(d - sum(exps),) + tuple(exps): c
                  for exps, c in self.element.items()}
        return SparsePoly(ring.from_dict(coeffs), self.field)

    def to_field(self, field: Field) -> 'SparsePoly':
        """Reduce a rational polynomial into <field> (identity if equal)."""
        if field == self.field:
            return self
        if not self.field.is_rational:
            raise FieldMismatchError("only rational polynomials can be reduced")
        terms = {exps: c for exps, c in self.terms.items()}
        return SparsePoly.from_terms(self.n_vars, terms, field)

    # --- literal format ---

    def terms_as_strings(self) -> Dict[Exponent, str]:
        return {exps: c.to_string() for exps, c in self.terms.items()}

    def to_json(self) -> Dict[str, Any]:
        return {'vars': self.n_vars,
                'terms': [[c.to_string(), list(exps)]
                          for exps, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data: Union[str, Dict[str, Any]],
                  field: Field = QQ_FIELD) -> 'SparsePoly':
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n_vars = int(data['vars'])
            raw = data['terms']
        except (KeyError, TypeError, ValueError):
            raise InputError("polynomial literal needs 'vars' and 'terms'")
        terms: Dict[Exponent, Number] = {}
        for entry in raw:
            if not isinstance(entry, list) or len(entry) != 2:
                raise InputError("bad term entry " + repr(entry))
            coeff, exps = entry
            exps = tuple(exps)
            value = _parse_fraction(str(coeff))
            terms[exps] = terms.get(exps, 0) + value
        return cls.from_terms(n_vars, terms, field)


def poly_graded_parts(f: SparsePoly) -> Dict[int, SparsePoly]:
    """Homogeneous components of f keyed by degree; zero parts are omitted."""
    buckets: Dict[int, Dict[Exponent, Any]] = {}
    for exps, c in f.element.items():
        buckets.setdefault(sum(exps), {})[exps] = c
    return {d: SparsePoly(f.ring.from_dict(buckets[d]), f.field)
            for d in sorted(buckets)}


def restrict_to_subspace(f: SparsePoly,
                         basis: Sequence[Sequence[Number]]) -> SparsePoly:
    """Compose f with the parametrization t -> sum_j t_j basis[j].

    The result lives in len(basis) variables.
    """
    if not basis:
        raise InputError("degenerate subspace: empty basis")
    field = f.field
    rows = []
    for vector in basis:
        if len(vector) != f.n_vars:
            raise InputError("basis vector has length " + str(len(vector))
                             + ", expected " + str(f.n_vars))
        rows.append(scalars(vector, field))
    if vector_rank(rows, field) != len(rows):
        raise InputError("degenerate subspace")
    m = len(rows)
    images = [SparsePoly.linear_form([rows[j][i] for j in range(m)], field)
              for i in range(f.n_vars)]
    return f.compose(images)


def linear_form_vector(f: SparsePoly) -> List[ExactScalar]:
    """Coefficient vector of a linear form (the zero form gives zeros)."""
    if not f.is_homogeneous(1):
        raise InputError("not a linear form: " + repr(f))
    vector = [f.field.zero()] * f.n_vars
    for exps, c in f.terms.items():
        vector[exps.index(1)] = c
    return vector


# --- symmetric matrices ---


@dataclass(frozen=True)
class SymMatrix:
    """Symmetric n x n matrix over an exact field.

    === Attributes ===

    n: dimension.
    entries: rows of ExactScalar, entries[i][j] == entries[j][i].
    field: field of every entry.
    """
    n: int
    entries: Tuple[Tuple[ExactScalar, ...], ...]
    field: Field

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]],
                  field: Field = QQ_FIELD) -> 'SymMatrix':
        n = len(rows)
        entries = tuple(tuple(scalars(row, field)) for row in rows)
        for row in entries:
            if len(row) != n:
                raise InputError("matrix is not square")
        for i in range(n):
            for j in range(i + 1, n):
                if entries[i][j] != entries[j][i]:
                    raise InputError("matrix is not symmetric at ("
                                     + str(i) + ", " + str(j) + ")")
        return cls(n, entries, field)

    @classmethod
    def zero(cls, n: int, field: Field = QQ_FIELD) -> 'SymMatrix':
        return cls.from_rows([[0] * n for _ in range(n)], field)

    @classmethod
    def diagonal(cls, values: Sequence[Number],
                 field: Field = QQ_FIELD) -> 'SymMatrix':
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)]
                              for i in range(n)], field)

    def __getitem__(self, index: Tuple[int, int]) -> ExactScalar:
        i, j = index
        return self.entries[i][j]

    def __add__(self, other: 'SymMatrix') -> 'SymMatrix':
        return SymMatrix.from_rows([[a + b for a, b in zip(r, s)]
                                    for r, s in zip(self.entries, other.entries)],
                                   self.field)

    def scale(self, c: Number) -> 'SymMatrix':
        return SymMatrix.from_rows([[a * c for a in row]
                                    for row in self.entries], self.field)

    def congruent(self, a: Sequence[Sequence[Number]]) -> 'SymMatrix':
        """A^T S A for a square or tall matrix A (rows indexed like S)."""
        a_dm = to_domain_matrix([scalars(row, self.field) for row in a],
                                self.field)
        product = a_dm.transpose() * self.to_domain_matrix() * a_dm
        return SymMatrix.from_rows(from_domain_matrix(product, self.field),
                                   self.field)

    def to_field(self, field: Field) -> 'SymMatrix':
        if field == self.field:
            return self
        return SymMatrix.from_rows([[e.value for e in row]
                                    for row in self.entries], field)

    def to_domain_matrix(self) -> DomainMatrix:
        return to_domain_matrix(self.entries, self.field)

    def to_json(self) -> List[List[str]]:
        return [[e.to_string() for e in row] for row in self.entries]

    @classmethod
    def from_json(cls, rows: List[List[Any]],
                  field: Field = QQ_FIELD) -> 'SymMatrix':
        return cls.from_rows([[_parse_fraction(str(e)) for e in row]
                              for row in rows], field)


def quadratic_form_matrix(f: SparsePoly) -> SymMatrix:
    """Symmetric matrix of a quadratic form: a_ii on the diagonal, a_ij/2 off it."""
    if not f.is_homogeneous(2):
        raise InputError("not a quadratic form: " + repr(f))
    if f.field.characteristic == 2:
        raise InputError("quadratic forms are not symmetric matrices in "
                         "characteristic 2")
    n = f.n_vars
    half = f.field.scalar(Fraction(1, 2))
    rows = [[f.field.zero()] * n for _ in range(n)]
    for exps, c in f.terms.items():
        support = [i for i, e in enumerate(exps) if e]
        if len(support) == 1:
            i = support[0]
            rows[i][i] = c
        else:
            i, j = support
            rows[i][j] = c * half
            rows[j][i] = c * half
    return SymMatrix.from_rows(rows, f.field)


def matrix_rank(m: SymMatrix) -> int:
    """Exact rank by elimination over the matrix's field."""
    if m.n == 0:
        return 0
    return m.to_domain_matrix().rank()


# --- dense linear algebra helpers ---


def to_domain_matrix(rows: Sequence[Sequence[ExactScalar]],
                     field: Field) -> DomainMatrix:
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    data = [[field.to_domain(e) for e in row] for row in rows]
    return DomainMatrix(data, (n_rows, n_cols), field.domain)


def from_domain_matrix(dm: DomainMatrix, field: Field) -> List[List[ExactScalar]]:
    return [[field.from_domain(e) for e in row] for row in dm.to_list()]


def vector_rank(rows: Sequence[Sequence[ExactScalar]], field: Field) -> int:
    if not rows or not rows[0]:
        return 0
    return to_domain_matrix(rows, field).rank()


def row_reduce(rows: Sequence[Sequence[ExactScalar]], n_cols: int,
               field: Field) -> Tuple[List[List[ExactScalar]], Tuple[int, ...]]:
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    if not rows:
        return [], ()
    reduced, pivots = to_domain_matrix(rows, field).rref()
    out = from_domain_matrix(reduced, field)
    return out[:len(pivots)], tuple(pivots)


def nullspace_basis(rows: Sequence[Sequence[ExactScalar]], n_cols: int,
                    field: Field) -> List[List[ExactScalar]]:
    """Basis of {v : row . v = 0 for every row}."""
    reduced, pivots = row_reduce(rows, n_cols, field)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f_col in free:
        v = [field.zero()] * n_cols
        v[f_col] = field.one()
        for r, p_col in enumerate(pivots):
            v[p_col] = -reduced[r][f_col]
        basis.append(v)
    return basis


def solve_combination(target: Sequence[ExactScalar],
                      basis: Sequence[Sequence[ExactScalar]],
                      field: Field) -> Optional[List[ExactScalar]]:
    """Coefficients c with sum_j c_j basis[j] == target, or None."""
    m = len(basis)
    n = len(target)
    if m == 0:
        return [] if all(t.is_zero() for t in target) else None
    augmented = [[basis[j][i] for j in range(m)] + [target[i]] for i in range(n)]
    reduced, pivots = row_reduce(augmented, m + 1, field)
    if m in pivots:
        return None
    solution = [field.zero()] * m
    for r, p_col in enumerate(pivots):
        solution[p_col] = reduced[r][m]
    return solution


def binomial(a: int, b: int) -> int:
    """Binomial coefficient with the zero-outside-range convention."""
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)
