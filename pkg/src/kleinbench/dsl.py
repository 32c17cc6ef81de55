"""Input language for fibration data.

    alpha = (u - v)(u + v);
    beta  = u * (2u + zeta^3 v);

Each right-hand side is a product of linear forms in u, v.  Coefficients are
integers, fractions p/q, powers of zeta, or parenthesised sums of those.
A bare sum (no parentheses) is allowed only as the single factor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .cyclo import ONE, ZERO, CycloNum

LinearForm = tuple[CycloNum, CycloNum]

_TOKEN = re.compile(r"\s*(?:(\d+)|(zeta|ζ)|([uv])|([A-Za-z_]\w*)|(.))")


class DSLError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
        self.text = text


@dataclass
class Token:
    kind: str     # int, zeta, var, name, op, end
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1):
            out.append(Token("int", m.group(1), start))
        elif m.group(2):
            out.append(Token("zeta", m.group(2), start))
        elif m.group(3):
            out.append(Token("var", m.group(3), start))
        elif m.group(4):
            out.append(Token("name", m.group(4), start))
        elif m.group(5):
            if not m.group(5).isspace():
                out.append(Token("op", m.group(5), start))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, tokens: list[Token]):
        self.text = text
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise DSLError(msg, tok.pos, self.text)

    def eat(self, kind: str, value: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (value is not None and t.value != value):
            self.error(f"expected {value or kind}, found {t.value or 'end of input'!r}")
        self.i += 1
        return t

    def at(self, kind: str, value: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (value is None or t.value == value)

    # program := (name '=' product ';')*
    def program(self) -> dict[str, list[LinearForm]]:
        defs: dict[str, list[LinearForm]] = {}
        while not self.at("end"):
            name = self.eat("name")
            if name.value not in ("alpha", "beta"):
                self.error(f"unknown name {name.value!r} (expected alpha or beta)", name)
            if name.value in defs:
                self.error(f"{name.value} defined twice", name)
            self.eat("op", "=")
            defs[name.value] = self.product()
            self.eat("op", ";")
        return defs

    def product(self) -> list[LinearForm]:
        start = self.tok
        if self.at("op", "("):
            factors = [self.paren_factor()]
            while self.at("op", "(") or self.at("op", "*"):
                if self.at("op", "*"):
                    self.eat("op", "*")
                factors.append(self.paren_factor())
            return factors
        # a single bare linear form, or a bare product of monomial factors u*v
        form, const = self.linear()
        if const is not None:
            if form != (ZERO, ZERO):
                self.error("a linear form cannot have a constant term", start)
            if const != ONE:
                self.error("the empty product must be written 1", start)
            return []
        factors = [form]
        multi = form[0] and form[1]
        while self.at("op", "*") or self.at("op", "(") or self.at("var"):
            if multi:
                self.error("a sum times a factor needs parentheses: (..)(..)")
            if self.at("op", "*"):
                self.eat("op", "*")
            factors.append(self.paren_factor() if self.at("op", "(") else self.bare_factor())
        if len(factors) > 1 and (self.at("op", "+") or self.at("op", "-")):
            self.error("sum of products: not a product of linear forms")
        return factors

    def bare_factor(self) -> LinearForm:
        start = self.tok
        form, const = self.linear(single_term=True)
        if const is not None:
            self.error("constant factor inside a product of linear forms", start)
        return form

    def paren_factor(self) -> LinearForm:
        start = self.eat("op", "(")
        form, const = self.linear()
        if const is not None:
            self.error("factor is not a linear form in u, v", start)
        if self.at("op", "*") or self.at("var") or self.at("op", "^"):
            self.error("factor is not linear")
        self.eat("op", ")")
        return form

    def linear(self, single_term: bool = False) -> tuple[LinearForm, CycloNum | None]:
        """sum of [sign] [coeff] var terms; returns (form, constant or None)."""
        cu, cv = ZERO, ZERO
        const: CycloNum | None = None
        first = True
        while True:
            sign = ONE
            if self.at("op", "+") or self.at("op", "-"):
                sign = -ONE if self.eat("op").value == "-" else ONE
            elif not first:
                break
            if single_term and not first:
                break
            coeff, var = self.term()
            coeff = coeff * sign
            if var == "u":
                cu = cu + coeff
            elif var == "v":
                cv = cv + coeff
            else:
                const = coeff if const is None else const + coeff
            first = False
            if single_term:
                break
            if not (self.at("op", "+") or self.at("op", "-")):
                break
        if const is not None and (cu or cv):
            self.error("a linear form cannot have a constant term")
        if const is None and not cu and not cv:
            self.error("zero linear form")
        return (cu, cv), const

    def term(self) -> tuple[CycloNum, str | None]:
        coeff = None
        if not self.at("var"):
            coeff = self.coefficient()
            if self.at("op", "*") and self.toks[self.i + 1].kind == "var":
                self.eat("op", "*")
        var = None
        if self.at("var"):
            var = self.eat("var").value
            if self.at("op", "^"):
                self.error("power of a variable: factor is not linear")
        if coeff is None:
            coeff = ONE
        return coeff, var

    def coefficient(self) -> CycloNum:
        if self.at("int"):
            num = int(self.eat("int").value)
            if self.at("op", "/"):
                self.eat("op", "/")
                den = int(self.eat("int").value)
                if den == 0:
                    self.error("zero denominator")
                value = CycloNum.from_int(Fraction(num, den))
            else:
                value = CycloNum.from_int(num)
            if self.at("zeta"):
                value = value * self.zeta_power()
            return value
        if self.at("zeta"):
            return self.zeta_power()
        if self.at("op", "("):
            # parenthesised coefficient: only if it contains no u, v
            save = self.i
            self.eat("op", "(")
            acc = ZERO
            sign = ONE
            while True:
                if self.at("op", "+") or self.at("op", "-"):
                    sign = -ONE if self.eat("op").value == "-" else ONE
                if self.at("var"):
                    self.i = save
                    self.error("expected a coefficient")
                acc = acc + self.coefficient() * sign
                sign = ONE
                if not (self.at("op", "+") or self.at("op", "-")):
                    break
            self.eat("op", ")")
            return acc
        self.error(f"unexpected {self.tok.value or 'end of input'!r}")
        raise AssertionError  # unreachable

    def zeta_power(self) -> CycloNum:
        self.eat("zeta")
        k = 1
        if self.at("op", "^"):
            self.eat("op", "^")
            k = int(self.eat("int").value)
        return CycloNum.zeta(k)


def parse_dsl(text: str) -> dict:
    """Returns {"n", "alpha", "beta"} with factor lists of (coeff_u, coeff_v)."""
    p = _Parser(text, tokenize(text))
    defs = p.program()
    for key in ("alpha", "beta"):
        if key not in defs:
            raise DSLError(f"missing definition of {key}", len(text), text)
    if len(defs["alpha"]) != len(defs["beta"]):
        raise DSLError(
            f"alpha has degree {len(defs['alpha'])} but beta has degree {len(defs['beta'])}",
            len(text), text,
        )
    return {"n": len(defs["alpha"]), "alpha": defs["alpha"], "beta": defs["beta"]}


def format_form(form: LinearForm) -> str:
    a, b = form
    parts = []
    for c, name in ((a, "u"), (b, "v")):
        if not c:
            continue
        if c == ONE:
            parts.append(name)
        elif c == -ONE:
            parts.append(f"-{name}")
        else:
            parts.append(f"({c})*{name}")
    return " + ".join(parts).replace("+ -", "- ")
