"""Line-oriented input files for categories and algebras.

A category file is a sequence of keyword lines; ``#`` starts a comment,
blank lines are ignored.  Scalar values use the same textual grammar
that :meth:`Scalar.to_expr` emits (``1/2 - 3*x^2`` over the field
generator ``x``), extended with parentheses, so every printed scalar
parses back to itself.  Errors carry the file name and line number.

Keywords, in their required order:

    category <name>
    field <name> [<monic-or-not polynomial in x>]
    embedding <float>                  # optional numeric hint for x
    labels <name> ...
    unit <label>
    dual <label> <label>               # one line per label
    fuse <a> <b> <c> [<mult>]          # nonzero N entries, unit rows implied
    F <a> <b> <c> <d> : <e> <f> [<al> <be> <ga> <de>] = <expr>
    pivotal <label> = <expr>           # omitted labels default to 1
    spherical                          # flag
    generator <circle|interval> [<label> ...]   # boundary for `simples`

followed by any number of algebra and bimodule blocks:

    algebra <name>
    carrier <label> ...                # summands of the underlying object
    mult <i> <j> <k> = <expr>          # component of summand i x j into k
    unit-map <k> = <expr>
    counit <k> = <expr>
    comult <k> <i> <j> = <expr>        # component of summand k into i x j

    bimodule <name> <left-algebra> <right-algebra>
    carrier <label> ...
    left-action <i> <m> <n> = <expr>   # algebra summand i x module m into n
    right-action <m> <j> <n> = <expr>  # module m x algebra summand j into n

Bimodule blocks may only refer to algebras declared above them.  Unit
rows of N (``N(1,a,a) = N(a,1,a) = 1``) are filled in by the
loader; explicit ``fuse`` lines involving the unit must agree with
them.  F entries with a unit leg are rejected: their value is fixed by
the gauge and synthesized by the engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from ..exactlin import NumberField, Scalar
from ..fusion import FusionCategoryData


class ParseError(ValueError):
    def __init__(self, where: str, line: int, message: str):
        super().__init__(f"{where}:{line}: {message}")
        self.where = where
        self.line = line
        self.message = message


# -- scalar expression grammar ---------------------------------------------

_OPS = set("+-*/^()")


def _tokenize(text: str, where: str, line: int) -> List[Tuple[str, object]]:
    tokens: List[Tuple[str, object]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append((ch, ch))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j])))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
            continue
        raise ParseError(where, line, f"unexpected character {ch!r} in expression")
    tokens.append(("end", None))
    return tokens


class _PolyParser:
    """Recursive descent over dense rational polynomials in x."""

    def __init__(self, tokens, where: str, line: int):
        self.tokens = tokens
        self.pos = 0
        self.where = where
        self.line = line

    def fail(self, message: str):
        raise ParseError(self.where, self.line, message)

    def peek(self) -> str:
        return self.tokens[self.pos][0]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> List[Fraction]:
        poly = self.expr()
        if self.peek() != "end":
            self.fail(f"trailing input in expression")
        return poly

    def expr(self) -> List[Fraction]:
        if self.peek() == "-":
            self.take()
            out = _poly_neg(self.term())
        else:
            out = self.term()
        while self.peek() in ("+", "-"):
            op, _ = self.take()
            rhs = self.term()
            out = _poly_add(out, rhs if op == "+" else _poly_neg(rhs))
        return out

    def term(self) -> List[Fraction]:
        out = self.power()
        while self.peek() in ("*", "/"):
            op, _ = self.take()
            rhs = self.power()
            if op == "*":
                out = _poly_mul(out, rhs)
            else:
                if len(rhs) != 1:
                    self.fail("division only by a rational constant")
                if rhs[0] == 0:
                    self.fail("division by zero")
                out = [c / rhs[0] for c in out]
        return out

    def power(self) -> List[Fraction]:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            kind, value = self.take()
            if kind != "int":
                self.fail("exponent must be a nonnegative integer")
            out = [Fraction(1)]
            for _ in range(value):
                out = _poly_mul(out, base)
            return out
        return base

    def atom(self) -> List[Fraction]:
        kind, value = self.take()
        if kind == "int":
            return [Fraction(value)]
        if kind == "name":
            if value != "x":
                self.fail(f"unknown symbol {value!r}; the field generator is x")
            return [Fraction(0), Fraction(1)]
        if kind == "(":
            out = self.expr()
            kind2, _ = self.take()
            if kind2 != ")":
                self.fail("unbalanced parenthesis")
            return out
        if kind == "-":
            return _poly_neg(self.atom())
        self.fail("malformed expression")


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    ]


def _poly_neg(a):
    return [-c for c in a]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1 if a and b else 0)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def parse_rational_poly(text: str, where: str = "<expr>", line: int = 0) -> List[Fraction]:
    return _PolyParser(_tokenize(text, where, line), where, line).parse()


def parse_scalar(
    field: NumberField, text: str, where: str = "<expr>", line: int = 0
) -> Scalar:
    """Parse a scalar expression, reducing powers of x in the field."""
    poly = parse_rational_poly(text, where, line)
    out = field.zero
    xp = field.one
    for i, c in enumerate(poly):
        if i:
            xp = xp * field.gen
        if c:
            out = out + xp * field.from_rational(c)
    return out


# -- algebra blocks --------------------------------------------------------


@dataclass
class AlgebraSpec:
    """Raw Frobenius algebra block, before morphisms are built."""

    name: str
    carrier: Tuple[int, ...]
    mult: Dict[Tuple[int, int, int], Scalar] = dc_field(default_factory=dict)
    unit_map: Dict[int, Scalar] = dc_field(default_factory=dict)
    counit: Dict[int, Scalar] = dc_field(default_factory=dict)
    comult: Dict[Tuple[int, int, int], Scalar] = dc_field(default_factory=dict)


@dataclass
class BimoduleSpec:
    """Raw bimodule block over two named algebras.

    left_action keys are (algebra summand, module summand, module
    summand); right_action keys put the algebra summand second,
    mirroring the leg order of the actions themselves.
    """

    name: str
    left: str
    right: str
    carrier: Tuple[int, ...]
    left_action: Dict[Tuple[int, int, int], Scalar] = dc_field(default_factory=dict)
    right_action: Dict[Tuple[int, int, int], Scalar] = dc_field(default_factory=dict)


@dataclass(frozen=True)
class GeneratorSpec:
    """A plain decorated 1-manifold the inventory commands should visit."""

    manifold: str
    labels: Tuple[int, ...]


@dataclass
class CategoryDocument:
    category: FusionCategoryData
    algebras: Dict[str, AlgebraSpec]
    bimodules: Dict[str, BimoduleSpec]
    generators: List[GeneratorSpec]
    where: str


# -- category files --------------------------------------------------------

_CATEGORY_KEYS = (
    "category",
    "field",
    "embedding",
    "labels",
    "unit",
    "dual",
    "fuse",
    "F",
    "pivotal",
    "spherical",
    "generator",
    "algebra",
    "carrier",
    "mult",
    "unit-map",
    "counit",
    "comult",
    "bimodule",
    "left-action",
    "right-action",
)


class _FileReader:
    def __init__(self, text: str, where: str):
        self.where = where
        self.lines = text.splitlines()

    def logical_lines(self):
        for idx, raw in enumerate(self.lines, start=1):
            body = raw.split("#", 1)[0].strip()
            if body:
                yield idx, body


def parse_category_text(text: str, where: str = "<string>") -> CategoryDocument:
    reader = _FileReader(text, where)
    name: Optional[str] = None
    number_field: Optional[NumberField] = None
    labels: Optional[List[str]] = None
    unit: Optional[int] = None
    dual: Dict[int, int] = {}
    n_entries: Dict[Tuple[int, int, int], int] = {}
    f_entries: Dict[tuple, Scalar] = {}
    pivotal: Dict[int, Scalar] = {}
    spherical = False
    generators: List[GeneratorSpec] = []
    algebras: Dict[str, AlgebraSpec] = {}
    bimodules: Dict[str, BimoduleSpec] = {}
    current_algebra: Optional[AlgebraSpec] = None
    current_bimodule: Optional[BimoduleSpec] = None

    def need_field(line) -> NumberField:
        if number_field is None:
            raise ParseError(where, line, "field must be declared first")
        return number_field

    def label_id(tok: str, line: int) -> int:
        if labels is None:
            raise ParseError(where, line, "labels must be declared first")
        try:
            return labels.index(tok)
        except ValueError:
            raise ParseError(where, line, f"unknown label {tok!r}") from None

    def index_into(tok: str, line: int, size: int, what: str) -> int:
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(where, line, f"{what} index expected, got {tok!r}") from None
        if not 0 <= v < size:
            raise ParseError(where, line, f"{what} index {v} out of range")
        return v

    def summand_id(tok: str, line: int) -> int:
        if current_algebra is None:
            raise ParseError(where, line, "no algebra block is open")
        return index_into(tok, line, len(current_algebra.carrier), "summand")

    def split_assignment(body: str, line: int) -> Tuple[List[str], str]:
        if "=" not in body:
            raise ParseError(where, line, "expected '= <expression>'")
        head, expr = body.split("=", 1)
        return head.split(), expr.strip()

    for line, body in reader.logical_lines():
        parts = body.split()
        key = parts[0]
        rest = parts[1:]
        if key not in _CATEGORY_KEYS:
            raise ParseError(where, line, f"unknown keyword {key!r}")
        if key == "category":
            if len(rest) != 1:
                raise ParseError(where, line, "category takes exactly one name")
            name = rest[0]
        elif key == "field":
            if not rest:
                raise ParseError(where, line, "field needs a name")
            field_name = rest[0]
            poly_text = body.split(None, 2)[2] if len(rest) > 1 else ""
            if poly_text:
                coeffs = parse_rational_poly(poly_text, where, line)
            else:
                coeffs = [Fraction(0), Fraction(1)]
            try:
                number_field = NumberField(field_name, tuple(coeffs))
            except ValueError as exc:
                raise ParseError(where, line, str(exc)) from None
        elif key == "embedding":
            if number_field is None:
                raise ParseError(where, line, "embedding must follow the field line")
            try:
                hint = float(rest[0])
            except (IndexError, ValueError):
                raise ParseError(where, line, "embedding needs a floating point value") from None
            number_field = NumberField(
                number_field.name, number_field.modulus, embedding_hint=hint
            )
        elif key == "labels":
            if not rest:
                raise ParseError(where, line, "labels needs at least one name")
            if len(set(rest)) != len(rest):
                raise ParseError(where, line, "duplicate label names")
            labels = list(rest)
        elif key == "unit":
            if len(rest) != 1:
                raise ParseError(where, line, "unit takes exactly one label")
            unit = label_id(rest[0], line)
        elif key == "dual":
            if len(rest) != 2:
                raise ParseError(where, line, "dual takes two labels")
            a = label_id(rest[0], line)
            b = label_id(rest[1], line)
            if a in dual and dual[a] != b:
                raise ParseError(where, line, f"conflicting dual for {rest[0]!r}")
            dual[a] = b
        elif key == "fuse":
            if len(rest) not in (3, 4):
                raise ParseError(where, line, "fuse takes three labels and an optional multiplicity")
            a, b, c = (label_id(t, line) for t in rest[:3])
            mult = 1
            if len(rest) == 4:
                try:
                    mult = int(rest[3])
                except ValueError:
                    raise ParseError(where, line, "fusion multiplicity must be an integer") from None
                if mult <= 0:
                    raise ParseError(where, line, "fusion multiplicity must be positive")
            if unit is not None and unit in (a, b):
                expected = 1 if (c == b if a == unit else c == a) else 0
                if mult != expected:
                    raise ParseError(where, line, "unit fusion rows are fixed by the unit laws")
                continue
            if (a, b, c) in n_entries and n_entries[(a, b, c)] != mult:
                raise ParseError(where, line, "conflicting fuse line")
            n_entries[(a, b, c)] = mult
        elif key == "F":
            head, expr = split_assignment(body[1:].strip(), line)
            if ":" not in head:
                raise ParseError(where, line, "F line needs ':' between outer and inner labels")
            colon = head.index(":")
            outer, inner = head[:colon], head[colon + 1 :]
            if len(outer) != 4 or len(inner) not in (2, 6):
                raise ParseError(
                    where, line,
                    "F takes four labels, ':', two labels, optional four multiplicity indices",
                )
            a, b, c, d = (label_id(t, line) for t in outer)
            e, f = label_id(inner[0], line), label_id(inner[1], line)
            if len(inner) == 6:
                try:
                    al, be, ga, de = (int(t) for t in inner[2:])
                except ValueError:
                    raise ParseError(where, line, "multiplicity indices must be integers") from None
            else:
                al = be = ga = de = 0
            if unit is not None and unit in (a, b, c):
                raise ParseError(
                    where, line,
                    "F entries with a unit leg are fixed by the gauge; remove this line",
                )
            keyt = (a, b, c, d, e, f, al, be, ga, de)
            if keyt in f_entries:
                raise ParseError(where, line, "duplicate F entry")
            f_entries[keyt] = parse_scalar(need_field(line), expr, where, line)
        elif key == "pivotal":
            head, expr = split_assignment(body[len("pivotal") :].strip(), line)
            if len(head) != 1:
                raise ParseError(where, line, "pivotal takes one label")
            a = label_id(head[0], line)
            pivotal[a] = parse_scalar(need_field(line), expr, where, line)
        elif key == "spherical":
            if rest:
                raise ParseError(where, line, "spherical is a bare flag")
            spherical = True
        elif key == "generator":
            if not rest or rest[0] not in ("circle", "interval"):
                raise ParseError(where, line, "generator takes 'circle' or 'interval' and labels")
            spec = GeneratorSpec(rest[0], tuple(label_id(t, line) for t in rest[1:]))
            if spec in generators:
                raise ParseError(where, line, "duplicate generator line")
            generators.append(spec)
        elif key == "algebra":
            if len(rest) != 1:
                raise ParseError(where, line, "algebra takes exactly one name")
            if rest[0] in algebras:
                raise ParseError(where, line, f"duplicate algebra {rest[0]!r}")
            current_algebra = AlgebraSpec(rest[0], ())
            current_bimodule = None
            algebras[rest[0]] = current_algebra
        elif key == "bimodule":
            if len(rest) != 3:
                raise ParseError(where, line, "bimodule takes a name and two algebra names")
            bname, lname, rname = rest
            if bname in bimodules:
                raise ParseError(where, line, f"duplicate bimodule {bname!r}")
            for aname in (lname, rname):
                if aname not in algebras:
                    raise ParseError(
                        where, line, f"unknown algebra {aname!r}; declare it first"
                    )
            current_bimodule = BimoduleSpec(bname, lname, rname, ())
            current_algebra = None
            bimodules[bname] = current_bimodule
        elif key == "carrier":
            block = current_bimodule if current_bimodule is not None else current_algebra
            if block is None:
                raise ParseError(where, line, "carrier must follow an algebra or bimodule line")
            if block.carrier:
                raise ParseError(where, line, "duplicate carrier line")
            if not rest:
                raise ParseError(where, line, "carrier needs at least one label")
            block.carrier = tuple(label_id(t, line) for t in rest)
        elif key in ("mult", "comult"):
            head, expr = split_assignment(body[len(key) :].strip(), line)
            if len(head) != 3:
                raise ParseError(where, line, f"{key} takes three summand indices")
            i, j, k = (summand_id(t, line) for t in head)
            value = parse_scalar(need_field(line), expr, where, line)
            target = current_algebra.mult if key == "mult" else current_algebra.comult
            if (i, j, k) in target:
                raise ParseError(where, line, f"duplicate {key} entry")
            target[(i, j, k)] = value
        elif key in ("unit-map", "counit"):
            head, expr = split_assignment(body[len(key) :].strip(), line)
            if len(head) != 1:
                raise ParseError(where, line, f"{key} takes one summand index")
            k = summand_id(head[0], line)
            value = parse_scalar(need_field(line), expr, where, line)
            target = current_algebra.unit_map if key == "unit-map" else current_algebra.counit
            if k in target:
                raise ParseError(where, line, f"duplicate {key} entry")
            target[k] = value
        elif key in ("left-action", "right-action"):
            head, expr = split_assignment(body[len(key) :].strip(), line)
            if current_bimodule is None:
                raise ParseError(where, line, "no bimodule block is open")
            if len(head) != 3:
                raise ParseError(where, line, f"{key} takes three summand indices")
            aname = current_bimodule.left if key == "left-action" else current_bimodule.right
            a_size = len(algebras[aname].carrier)
            m_size = len(current_bimodule.carrier)
            # index order mirrors the leg order of the action
            if key == "left-action":
                keyt = (
                    index_into(head[0], line, a_size, "algebra summand"),
                    index_into(head[1], line, m_size, "module summand"),
                    index_into(head[2], line, m_size, "module summand"),
                )
                target = current_bimodule.left_action
            else:
                keyt = (
                    index_into(head[0], line, m_size, "module summand"),
                    index_into(head[1], line, a_size, "algebra summand"),
                    index_into(head[2], line, m_size, "module summand"),
                )
                target = current_bimodule.right_action
            if keyt in target:
                raise ParseError(where, line, f"duplicate {key} entry")
            target[keyt] = parse_scalar(need_field(line), expr, where, line)

    if name is None:
        raise ParseError(where, 0, "missing category line")
    if number_field is None:
        raise ParseError(where, 0, "missing field line")
    if labels is None:
        raise ParseError(where, 0, "missing labels line")
    if unit is None:
        raise ParseError(where, 0, "missing unit line")
    missing = [labels[a] for a in range(len(labels)) if a not in dual]
    if missing:
        raise ParseError(where, 0, f"missing dual lines for: {', '.join(missing)}")

    for a in range(len(labels)):
        n_entries[(unit, a, a)] = 1
        n_entries[(a, unit, a)] = 1

    piv = tuple(pivotal.get(a, number_field.one) for a in range(len(labels)))
    cat = FusionCategoryData(
        name,
        number_field,
        labels,
        unit,
        tuple(dual[a] for a in range(len(labels))),
        n_entries,
        f_entries,
        piv,
        spherical,
    )
    for spec in algebras.values():
        if not spec.carrier:
            raise ParseError(where, 0, f"algebra {spec.name!r} has no carrier line")
    for bspec in bimodules.values():
        if not bspec.carrier:
            raise ParseError(where, 0, f"bimodule {bspec.name!r} has no carrier line")
    return CategoryDocument(cat, algebras, bimodules, generators, where)


def load_category_file(path) -> CategoryDocument:
    p = Path(path)
    return parse_category_text(p.read_text(), str(p))


def builtin_category_path(name: str) -> Path:
    from importlib import resources

    base = resources.files("stringnet") / "data" / f"{name}.cat"
    with resources.as_file(base) as p:
        return Path(p)


def builtin_category(name: str) -> CategoryDocument:
    return load_category_file(builtin_category_path(name))


def builtin_names() -> List[str]:
    from importlib import resources

    out = []
    for entry in (resources.files("stringnet") / "data").iterdir():
        if entry.name.endswith(".cat"):
            out.append(entry.name[: -len(".cat")])
    return sorted(out)
