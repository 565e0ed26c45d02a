"""
Manifests: a ring and a set of named objects in the shared JSON format.

    {"ring": {"N": 4},
     "objects": {"C": {"kind": "module", "factors": [2]},
                 "f": {"kind": "morphism", "from": "C", "to": [4], "matrix": [[2]]},
                 "m": 0}}

Wherever an object is expected a value can be the name of another object of
the manifest or an inline object. Inline objects may omit "kind" when it
can be told from their keys. References are ordered with a dependency graph
and parsed leaves first.
"""
from dataclasses import dataclass, field
import json
import os
from typing import Any, Callable

import networkx as nx

from homext.chaincx import ChainComplex, ChainMap
from homext.errors import HomextError, MalformedInputError
from homext.extalg import Extension
from homext.modcat import Module, Morphism, Ring, TestClass

# Keys whose values may hold references to other objects
REFERENCE_KEYS = ("from", "to", "modules", "maps", "generators", "items")


def canonical(o: Any) -> str:
    """ The serialization written by every command; stable across runs. """
    return json.dumps(o, sort_keys=True)


def kind_of(o: Any) -> str:
    """ The kind of a raw JSON value, explicit or told from its keys. """
    if isinstance(o, bool):
        raise MalformedInputError("booleans are not objects", "kind")
    if isinstance(o, int):
        return "int"
    if isinstance(o, list):
        return "module"
    if not isinstance(o, dict):
        raise MalformedInputError(f"cannot read an object from {o!r}", "kind")
    if "kind" in o:
        return o["kind"]
    for key, kind in (("components", "chainmap"), ("matrix", "morphism"), ("lo", "complex"),
                      ("factors", "module"), ("maps", "extension"), ("generators", "class"),
                      ("preset", "class"), ("items", "list")):
        if key in o:
            return kind
    raise MalformedInputError(f"cannot tell the kind of an object with keys {sorted(o)}", "kind")


def references(o: Any) -> set[str]:
    """ The names an object refers to, inline objects included. """
    out: set[str] = set()
    if isinstance(o, str):
        out.add(o)
    elif isinstance(o, list):
        for v in o:
            if isinstance(v, (str, dict)):
                out |= references(v)
    elif isinstance(o, dict):
        for key in REFERENCE_KEYS:
            if key in o:
                out |= references(o[key])
    return out


def encode(o: Any) -> Any:
    """ A library object as manifest JSON with its kind. """
    match o:
        case bool():
            raise MalformedInputError("booleans are not objects", "kind")
        case int():
            return {"kind": "int", "value": o}
        case Module():
            return {"kind": "module", **o.to_json()}
        case Morphism():
            return {"kind": "morphism", **o.to_json()}
        case ChainComplex():
            return {"kind": "complex", **o.to_json()}
        case ChainMap():
            return {"kind": "chainmap", **o.to_json()}
        case Extension():
            return {"kind": "extension", **o.to_json()}
        case TestClass():
            return {"kind": "class", **o.to_json()}
        case list() | tuple():
            return {"kind": "list", "items": [encode(v) for v in o]}
    raise MalformedInputError(f"cannot store a {type(o).__name__}", "kind")


@dataclass
class Manifest:
    ring: Ring
    objects: dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Any:
        if name not in self.objects:
            raise MalformedInputError(f"no object named {name!r}", name)
        return self.objects[name]

    def __contains__(self, name: str) -> bool:
        return name in self.objects

    # ------------------------------
    #  PARSING
    # ------------------------------
    def parse(self, o: Any, field_name: str = "object") -> Any:
        """ Reads one value: a name of this manifest or an inline object. """
        if isinstance(o, str):
            return self[o]
        try:
            return self._parse(kind_of(o), o)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, HomextError):
                raise
            raise MalformedInputError(str(e), field_name) from e

    def expect(self, o: Any, types: type | tuple[type, ...], field_name: str) -> Any:
        value = self.parse(o, field_name)
        if isinstance(value, bool) or not isinstance(value, types):
            names = types.__name__ if isinstance(types, type) else " or ".join(t.__name__ for t in types)
            raise MalformedInputError(f"expected a {names}, got {type(value).__name__}", field_name)
        return value

    def _parse(self, kind: str, o: Any) -> Any:
        ring = self.ring
        match kind:
            case "int":
                value = o if isinstance(o, int) else o.get("value")
                if isinstance(value, bool) or not isinstance(value, int):
                    raise MalformedInputError("expected an integer", "value")
                return value
            case "module":
                return Module.from_json(o, ring)
            case "morphism":
                return Morphism.from_json(self._ends(o, Module), ring)
            case "complex":
                modules = [self.expect(x, Module, "modules") for x in _list(o, "modules")]
                return ChainComplex.from_json({**o, "modules": modules}, ring)
            case "chainmap":
                return ChainMap.from_json(self._ends(o, ChainComplex), ring)
            case "extension":
                maps = tuple(self.expect(f, (Morphism, ChainMap), "maps") for f in _list(o, "maps"))
                if "degree" in o and o["degree"] != len(maps) - 1:
                    raise MalformedInputError(f"degree {o['degree']} does not match {len(maps)} maps", "degree")
                return Extension(maps)
            case "class":
                presets: dict[str, Callable[[Ring], TestClass]] = {
                    "free": TestClass.free, "everything": TestClass.everything}
                if "preset" in o:
                    if o["preset"] not in presets:
                        raise MalformedInputError(f"unknown preset {o['preset']!r}", "preset")
                    return presets[o["preset"]](ring)
                gens = tuple(self.expect(g, Module, "generators") for g in _list(o, "generators"))
                return TestClass(ring, gens)
            case "list":
                return [self.parse(v, "items") for v in _list(o, "items")]
        raise MalformedInputError(f"unknown kind {kind!r}", "kind")

    def _ends(self, o: dict[str, Any], ty: type) -> dict[str, Any]:
        for key in ("from", "to"):
            if key not in o:
                raise MalformedInputError("missing key", key)
        return {**o, "from": self.expect(o["from"], ty, "from"), "to": self.expect(o["to"], ty, "to")}

    # ------------------------------
    #  LOAD / SAVE
    # ------------------------------
    @staticmethod
    def from_json(o: dict[str, Any]) -> 'Manifest':
        if not isinstance(o, dict) or "ring" not in o:
            raise MalformedInputError("missing ring", "ring")
        manifest = Manifest(Ring.from_json(o["ring"]))
        raw = o.get("objects", {})
        if not isinstance(raw, dict):
            raise MalformedInputError("expected a mapping of names to objects", "objects")

        graph = nx.DiGraph()
        graph.add_nodes_from(raw)
        for name, value in raw.items():
            for ref in references(value):
                if ref not in raw:
                    raise MalformedInputError(f"dangling reference {ref!r} in {name!r}", name)
                graph.add_edge(ref, name)
        try:
            order = list(nx.topological_sort(graph))
        except nx.NetworkXUnfeasible:
            cycle = [u for u, _ in nx.find_cycle(graph)]
            raise MalformedInputError(f"cyclic references {cycle}", cycle[0])

        for name in order:
            manifest.objects[name] = manifest.parse(raw[name], name)
        return manifest

    @staticmethod
    def load(path: str) -> 'Manifest':
        try:
            with open(path, encoding="utf-8") as f:
                o = json.load(f)
        except json.JSONDecodeError as e:
            raise MalformedInputError(f"invalid JSON: {e}", "manifest")
        except OSError as e:
            raise MalformedInputError(f"cannot read {path}: {e.strerror}", "manifest")
        return Manifest.from_json(o)

    def to_json(self):
        return {"ring": self.ring.to_json(), "objects": {k: encode(v) for k, v in self.objects.items()}}

    def save(self, path: str):
        save_json(path, self.to_json())


def save_json(path: str, o: Any):
    """ Writes canonical JSON, creating the directory if needed. """
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    with open(path, "w", encoding="utf-8") as f:
        f.write(canonical(o) + "\n")


def _list(o: dict[str, Any], key: str) -> list:
    value = o.get(key)
    if not isinstance(value, list):
        raise MalformedInputError("expected a list", key)
    return value
