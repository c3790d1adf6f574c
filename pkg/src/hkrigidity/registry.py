"""Axiom registry: the residue of vanishing problems the certificate
search cannot close, together with the classical rigidity facts that do.

Every entry is a problem (pole line set, twist class) stored in canonical
form under the index symmetry, an identifier, and a one-line
justification.  The shipped file is derived mechanically from the
exponent-5 covering, where every character block vanishes because the
covering surface is a smooth complex-ball quotient and therefore
infinitesimally rigid; pole dropping transports those facts to the
reduced problems recorded here.  The serialization is canonical
(tab-separated fields, entries sorted), so regeneration is byte-stable
and the file digest is meaningful.
"""

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

from .picard import DivisorClass, make_pair
from .characters import orbit_representatives
from .vanishing import ProofEngine, canonical_problem, problem_of

DATA_PACKAGE = "hkrigidity"
DATA_PATH = "data/registry.txt"

_HEADER = (
    "# Vanishing axiom registry.\n"
    "# Each line: id, canonical pole set, twist class, justification.\n"
    "# Derived from the exponent-5 covering; do not edit by hand.\n"
)

_JUSTIFICATION_INVARIANT = (
    "invariant block; the degree-5 del Pezzo surface has no infinitesimal "
    "deformations, and Serre duality converts that into this vanishing"
)
_JUSTIFICATION_BALL = (
    "block of the exponent-5 covering, a smooth complex-ball quotient, "
    "hence infinitesimally rigid (Calabi-Vesentini); pole dropping carries "
    "the vanishing to this reduced problem"
)


class RegistryFormatError(ValueError):
    """The registry text violates the canonical serialization."""


@dataclass(frozen=True)
class RegistryEntry:
    id: str
    logset: tuple
    twist: DivisorClass
    justification: str

    @property
    def key(self):
        return (self.logset, self.twist.as_tuple())


class Registry:
    def __init__(self, entries):
        self.entries = tuple(entries)
        self._by_key = {}
        ids = set()
        for entry in self.entries:
            ckey, _ = canonical_problem(frozenset(entry.logset), entry.twist)
            if ckey != entry.key:
                raise RegistryFormatError(
                    f"entry {entry.id} is not in canonical form")
            if entry.key in self._by_key:
                raise RegistryFormatError(
                    f"duplicate canonical problem for entry {entry.id}")
            if entry.id in ids:
                raise RegistryFormatError(f"duplicate id {entry.id}")
            ids.add(entry.id)
            self._by_key[entry.key] = entry

    def __len__(self):
        return len(self.entries)

    def lookup(self, key):
        """Entry for a canonical (logset, twist) key, or None."""
        return self._by_key.get(key)


def loads(text):
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise RegistryFormatError(f"line {lineno}: expected 4 fields")
        values = {}
        for field in fields:
            name, sep, value = field.partition("=")
            if not sep or name not in ("id", "logset", "twist", "justification"):
                raise RegistryFormatError(f"line {lineno}: bad field {name!r}")
            values[name] = value
        if len(values) != 4:
            raise RegistryFormatError(f"line {lineno}: missing fields")
        try:
            logset = tuple(make_pair(i, j) for i, j in json.loads(values["logset"]))
            twist = DivisorClass.from_tuple(json.loads(values["twist"]))
        except (ValueError, TypeError) as exc:
            raise RegistryFormatError(f"line {lineno}: {exc}") from exc
        if list(logset) != sorted(set(logset)):
            raise RegistryFormatError(f"line {lineno}: pole set not sorted")
        entries.append(RegistryEntry(values["id"], logset, twist,
                                     values["justification"]))
    if [e.key for e in entries] != sorted(e.key for e in entries):
        raise RegistryFormatError("entries not sorted by (logset, twist)")
    return Registry(entries)


def dumps(registry):
    lines = [_HEADER.rstrip("\n")]
    for entry in registry.entries:
        logset = json.dumps([list(p) for p in entry.logset],
                            separators=(",", ":"))
        twist = json.dumps(list(entry.twist.as_tuple()), separators=(",", ":"))
        lines.append("\t".join((
            f"id={entry.id}",
            f"logset={logset}",
            f"twist={twist}",
            f"justification={entry.justification}",
        )))
    return "\n".join(lines) + "\n"


def load_path(path):
    with open(path, encoding="utf-8") as handle:
        return loads(handle.read())


def default_registry_text():
    return resources.files(DATA_PACKAGE).joinpath(DATA_PATH).read_text("utf-8")


def default_registry():
    return loads(default_registry_text())


def digest(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def derive(n=5, depth_limit=2):
    """Regenerate the registry from scratch at the given exponent.

    Runs the full pipeline with no registry over one representative per
    character orbit and collects every problem left unresolved; at
    exponent 5 each of these is covered by ball-quotient rigidity.  A
    non-vanishing verdict at the derivation exponent would contradict
    that theorem, so it raises."""
    engine = ProofEngine(registry=None, depth_limit=depth_limit)
    keys = set()
    for psi, _size in orbit_representatives(n):
        cert = engine.prove(problem_of(psi))
        if cert.kind == "nonvanishing":
            raise RuntimeError(
                f"non-vanishing at exponent {n} contradicts ball-quotient "
                f"rigidity: {psi}")
        if cert.kind == "unresolved":
            keys.add((cert.canonical_logset, cert.canonical_twist))
    entries = []
    for num, key in enumerate(sorted(keys), start=1):
        logset, twist = key
        justification = (_JUSTIFICATION_INVARIANT if not logset
                         else _JUSTIFICATION_BALL)
        entries.append(RegistryEntry(f"axiom-{num:02d}", logset,
                                     DivisorClass.from_tuple(twist),
                                     justification))
    return Registry(entries)
