"""Named corpus of functions, operators, relations and points.

The corpus is a directory with ``functions``, ``operators``, ``relations``
and ``points`` subdirectories of JSON files. The packaged corpus is used
unless ``RELFORGE_CORPUS`` points elsewhere. Every object is revalidated
against its series mod z^64 when it is loaded.
"""

import json
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import efunc
from .errors import CorpusValidationError, PreconditionFailed, UnknownCorpusEntry
from .evalnum import CoefficientBound
from .grammar import parse_expression, parse_scalar
from .mahler import AutomatonSeq, DegreeBounds, MahlerFunction
from .numberfield import NumberField
from .ore import OreOperator, SigmaOp, apply_operator
from .polyring import GRAEFFE_CAP, Poly, RatFunc
from .relations import RelationPoly, evaluate_truncated, verify_relation
from .series import PowerSeries

VALIDATION_TERMS = 64
KINDS = ("functions", "operators", "relations", "points")
SUFFIXES = {"functions": (".fn",), "operators": (".op",), "relations": (".rel",), "points": (".pt",)}


@dataclass
class BoundsProfile:
    m: int = 4
    d: int = 8
    N: int = 512
    graeffe_cap: int = GRAEFFE_CAP

    def degree_bounds(self, m=None, d=None, N=None):
        return DegreeBounds(m if m is not None else self.m, d if d is not None else self.d,
                            N if N is not None else self.N)


@dataclass
class Point:
    name: str
    value: object
    field: object = None
    note: str = ""

    def to_json(self):
        d = {"name": self.name, "value": _scalar_text(self.value)}
        if self.field is not None:
            d["field"] = self.field.to_json()
        return d


@dataclass
class StoredRelation:
    name: str
    relation: RelationPoly
    functions: dict
    note: str = ""
    bindings: dict = dc_field(default_factory=dict)


def _scalar_text(x):
    from .grammar import format_coefficient
    return format_coefficient(x)


def default_corpus_dir():
    env = os.environ.get("RELFORGE_CORPUS")
    if env:
        return Path(env)
    return Path(str(resources.files("relforge") / "corpus"))


def _poly(text, field=None):
    p = parse_expression(str(text), field)
    if isinstance(p, RatFunc):
        raise PreconditionFailed(f"expected a polynomial, got {text!r}")
    return p


class Workspace:
    """Registry of named corpus objects loaded lazily from a corpus directory."""

    def __init__(self, directory=None, profile=None):
        self.directory = Path(directory) if directory is not None else default_corpus_dir()
        self.profile = profile or BoundsProfile()
        self._cache = {k: {} for k in KINDS}
        self._files = {k: {} for k in KINDS}
        for kind in KINDS:
            sub = self.directory / kind
            if not sub.is_dir():
                continue
            for path in sorted(sub.glob("*.json")):
                name = path.stem
                if name in self._files[kind]:
                    raise PreconditionFailed(f"duplicate {kind} entry {name!r}")
                self._files[kind][name] = path

    def names(self, kind):
        return sorted(self._files[kind])

    def _resolve(self, kind, name):
        name = str(name)
        for suffix in SUFFIXES[kind] + (".json",):
            if name.endswith(suffix):
                name = name[: -len(suffix)]
                break
        if name not in self._files[kind]:
            raise UnknownCorpusEntry(f"no {kind[:-1]} named {name!r} in {self.directory}")
        return name

    def _read(self, kind, name):
        with open(self._files[kind][name]) as fh:
            return json.load(fh)

    def _get(self, kind, name, loader):
        name = self._resolve(kind, name)
        if name not in self._cache[kind]:
            self._cache[kind][name] = loader(name, self._read(kind, name))
        return self._cache[kind][name]

    # points

    def point(self, name):
        """A Point; plain rational literals such as '1/3' are accepted too."""
        text = str(name)
        if text.replace("/", "").replace("-", "").isdigit():
            return Point(text, Fraction(text))
        return self._get("points", text, self._load_point)

    def _load_point(self, name, data):
        field = NumberField.from_json(data["field"]) if "field" in data else None
        value = parse_scalar(data["value"], field)
        return Point(name, value, field, data.get("note", ""))

    # functions

    def function(self, name):
        return self._get("functions", name, self._load_function)

    def _load_function(self, name, data):
        kind = data["type"]
        if kind == "mahler":
            f = self._load_mahler(name, data)
        elif kind == "efunction":
            f = self._load_efunction(name, data)
        elif kind == "polynomial":
            f = self._load_polynomial(name, data)
        else:
            raise PreconditionFailed(f"unknown function type {kind!r}")
        f.note = data.get("note", "")
        return f

    def _load_mahler(self, name, data):
        q = int(data["q"])
        eq = data.get("equation")
        L = inhom = None
        if eq is not None:
            L = SigmaOp(q, [_poly(c) for c in eq["coeffs"]])
            inhom = _poly(eq["inhom"]) if eq.get("inhom") else None
        if "automaton" in data:
            a = AutomatonSeq.from_json(data["automaton"], name)
            f = MahlerFunction.from_automaton(a, L, inhom, name)
            if L is not None and not f.relation_holds(VALIDATION_TERMS):
                raise CorpusValidationError(f"{name}: equation does not hold mod z^{VALIDATION_TERMS}")
        elif eq is not None:
            initial = [Fraction(c) for c in eq.get("initial", [])]
            f = MahlerFunction.from_equation(q, L.num, inhom, initial, name)
            if not f.relation_holds(VALIDATION_TERMS):
                raise CorpusValidationError(f"{name}: initial terms are inconsistent")
        else:
            raise PreconditionFailed(f"{name}: an automaton or an equation is required")
        if "bound" in data:
            f.bound = _bound_from_json(data["bound"], "geometric")
        return f

    def _load_efunction(self, name, data):
        rule = data.get("rule", name)
        try:
            base = efunc.get_efunction(rule)
        except UnknownCorpusEntry:
            raise PreconditionFailed(f"{name}: unknown coefficient rule {rule!r}") from None
        L = OreOperator.from_json(data["annihilator"])
        bound = _bound_from_json(data["bound"], "factorial") if "bound" in data else base.bound
        f = efunc.EFunction(name, base.series, L, bound, data.get("bound", {}).get("proof", ""),
                            data.get("note", ""))
        if not f.check_annihilator(VALIDATION_TERMS):
            raise CorpusValidationError(f"{name}: annihilator does not kill the series mod z^{VALIDATION_TERMS}")
        return f

    def _load_polynomial(self, name, data):
        """A function defined as a polynomial in prolongations of other corpus functions."""
        Q = RelationPoly.from_json(data["definition"])
        funcs = {label: self.function(target) for label, target in data["functions"].items()}

        def extend(s, n):
            m = max(n, 2 * len(s._c), 16)
            c = list(evaluate_truncated(Q, funcs, m).coeffs)
            s._c[:] = c + [Fraction(0)] * (m - len(c))

        series = PowerSeries(extend, None, name)
        f = MahlerFunction(int(data["q"]), series, name=name)
        if "bound" in data:
            f.bound = _bound_from_json(data["bound"], "geometric")
        f.definition = Q
        f.components = funcs
        return f

    # operators

    def operator(self, name):
        return self._get("operators", name, self._load_operator)

    def _load_operator(self, name, data):
        L = OreOperator.from_json(data["operator"])
        target = data.get("annihilates")
        if target is not None:
            f = self.function(target)
            if not apply_operator(L, f.series, VALIDATION_TERMS).is_zero_mod(VALIDATION_TERMS):
                raise CorpusValidationError(f"{name}: operator does not annihilate {target} mod z^{VALIDATION_TERMS}")
        L.name = name
        L.annihilates = target
        return L

    # relations

    def relation(self, name):
        return self._get("relations", name, self._load_relation)

    def _load_relation(self, name, data):
        Q = RelationPoly.from_json(data)
        bindings = dict(data.get("functions", {}))
        funcs = {label: self.function(target) for label, target in bindings.items()}
        if funcs:
            res = verify_relation(Q, funcs, VALIDATION_TERMS)
            if not res.passed:
                raise CorpusValidationError(f"{name}: relation fails at order {res.first_failure}")
        return StoredRelation(name, Q, funcs, data.get("note", ""), bindings)

    def validate_all(self):
        """Load every entry; returns {kind: [names]}."""
        out = {}
        for kind in KINDS:
            getter = {"functions": self.function, "operators": self.operator,
                      "relations": self.relation, "points": self.point}[kind]
            out[kind] = []
            for name in self.names(kind):
                getter(name)
                out[kind].append(name)
        return out


def _bound_from_json(data, default_kind):
    rho = data.get("rho", data.get("K"))
    kind = data.get("kind", "factorial" if "K" in data else default_kind)
    return CoefficientBound(Fraction(data["C"]), Fraction(rho), int(data.get("n0", 0)),
                            data.get("provenance", "user-supplied" if kind == "geometric" else "closed form"), kind)
