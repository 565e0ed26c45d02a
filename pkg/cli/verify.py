"""
The proposition registry behind `verify`: every id names a verifier, the
instance fields it reads and the seeded generator that fuzzes it.
"""
from dataclasses import dataclass
import random
import traceback
from typing import Any, Callable, Optional

from homext.adjunct import (VerificationReport, verify_ftilde_degreewise, verify_prop_1, verify_prop_4_2,
                            verify_prop_5, verify_relativedwsd)
from homext.chaincx import ChainComplex
from homext.errors import HomextError, MalformedInputError, PreconditionError, UnsupportedError
from homext.extalg import Extension
from homext.gorenstein import (GorensteinContext, verify_dw_eq_dg, verify_gext, verify_gext_disks,
                               verify_isosgorspheres)
from homext.modcat import Module, Ring, TestClass
from homext.testing import fuzz

from cli.manifest import Manifest, encode

Instance = dict[str, Any]


@dataclass(frozen=True)
class Prop:
    id: str
    # Fields read from the instance and their types
    fields: dict[str, type | tuple[type, ...]]
    run: Callable[[Instance, Ring], VerificationReport]
    generate: Callable[[random.Random, Ring], Instance]


def _ctx(ring: Ring) -> GorensteinContext:
    return GorensteinContext(ring)


def _with_variant(generate: Callable[[random.Random, Ring], Instance], variant: int):
    def wrapped(rng: random.Random, ring: Ring) -> Instance:
        inst = generate(rng, ring)
        inst["variant"] = variant
        return inst
    return wrapped


INSTANCE_FIELDS = {"X": ChainComplex, "C": Module, "m": int, "F": TestClass}


def _registry() -> dict[str, Prop]:
    props: list[Prop] = []
    for v in range(1, 5):
        props.append(Prop(
            f"1.{v}", {"C": Module, "X": ChainComplex, "m": int},
            lambda i, r, v=v: verify_prop_1(v, i["C"], i["X"], i["m"]),
            _with_variant(fuzz.adjunction_instance, v)))
        props.append(Prop(
            f"4.2.{v}", INSTANCE_FIELDS,
            lambda i, r, v=v: verify_prop_4_2(v, i["X"], i["C"], i["m"], i["F"]),
            fuzz.disk_instance))
        for mode in ("mono", "iso"):
            props.append(Prop(
                f"5.{mode}.{v}", INSTANCE_FIELDS,
                lambda i, r, v=v, mode=mode: verify_prop_5(v, i["X"], i["C"], i["m"], i["F"], mode),
                fuzz.sphere_instance))
    props += [
        Prop("4.dwsd", {"S": Extension, "F": TestClass},
             lambda i, r: verify_relativedwsd(i["S"], i["F"]), fuzz.disk_ended_instance),
        Prop("4.ftilde", {"X": ChainComplex, "F": TestClass},
             lambda i, r: verify_ftilde_degreewise(i["X"], i["F"]), fuzz.exact_complex_instance),
        Prop("6.gext", {"M": Module, "N_mod": Module},
             lambda i, r: verify_gext(i["M"], i["N_mod"], _ctx(r)), fuzz.gext_instance),
        Prop("6.dwdg", {"X": list, "B": list},
             lambda i, r: verify_dw_eq_dg(i["X"], i["B"], _ctx(r)), fuzz.dwdg_instance),
        Prop("6.spheres", {"X": ChainComplex, "M": Module, "m": int},
             lambda i, r: verify_isosgorspheres(i["X"], i["M"], i["m"], _ctx(r), i.get("variant", 1)),
             fuzz.gorenstein_sphere_instance),
        Prop("6.disks", {"X": ChainComplex, "M": Module, "m": int},
             lambda i, r: verify_gext_disks(i["X"], i["M"], i["m"], _ctx(r)),
             fuzz.gorenstein_disk_instance),
    ]
    return {p.id: p for p in props}


PROPS = _registry()


def lookup(prop_id: str) -> Prop:
    if prop_id not in PROPS:
        raise MalformedInputError(f"unknown proposition {prop_id!r}; known: {', '.join(PROPS)}", "prop")
    return PROPS[prop_id]


def instance_from_manifest(prop: Prop, manifest: Manifest) -> Instance:
    inst: Instance = {}
    for name, ty in prop.fields.items():
        value = manifest[name]
        if isinstance(value, bool) or not isinstance(value, ty):
            raise MalformedInputError(f"expected a {ty.__name__ if isinstance(ty, type) else ty}", name)
        inst[name] = value
    if "variant" in manifest:
        inst["variant"] = manifest["variant"]
    return inst


def fuzz_instance(prop: Prop, seed: int, index: int, ring: Optional[Ring]) -> tuple[Ring, Instance]:
    rng = fuzz.instance_rng(seed, index)
    ring = ring or fuzz.random_ring(rng)
    return ring, prop.generate(rng, ring)


# |-----------------------------------------------------------------|
# |                          Outcomes                               |
# |-----------------------------------------------------------------|

@dataclass
class Outcome:
    """ One evaluated instance as a table row plus what is needed to replay it. """
    index: int
    prop: str
    N: int
    # pass, partial (a hypothesis is not met, only what applies was checked),
    # flagged (the verifier refused the instance) or fail
    status: str
    left_order: int
    right_order: int
    failed: str
    message: str
    report: Optional[dict[str, Any]]
    # Manifest replaying the instance, kept for failures only
    replay: Optional[dict[str, Any]]

    def row(self) -> dict[str, Any]:
        return {"index": self.index, "prop": self.prop, "N": self.N, "status": self.status,
                "left_order": self.left_order, "right_order": self.right_order,
                "failed": self.failed, "message": self.message}

    def line(self) -> str:
        out = f"[{self.index}] {self.prop} N={self.N} {self.status} left={self.left_order} right={self.right_order}"
        if self.failed:
            out += f" failed={self.failed}"
        if self.message:
            out += f" ({self.message})"
        return out


def evaluate(prop: Prop, index: int, ring: Ring, inst: Instance) -> Outcome:
    """ Runs one instance; precondition refusals are flagged, anything else unexpected fails. """
    def outcome(status: str, message: str = "", report: Optional[VerificationReport] = None) -> Outcome:
        replay = None
        if status == "fail":
            replay = {"ring": ring.to_json(), "objects": {k: encode(v) for k, v in inst.items()}}
        return Outcome(
            index, prop.id, ring.N, status,
            report.left_order if report else 0,
            report.right_order if report else 0,
            ",".join(k for k, ok in report.checks.items() if not ok) if report else "",
            message, report.to_json() if report else None, replay)

    try:
        report = prop.run(inst, ring)
    except (PreconditionError, UnsupportedError) as e:
        return outcome("flagged", f"hypothesis not met: {e}")
    except HomextError as e:
        return outcome("fail", f"{type(e).__name__}: {e}")
    except AssertionError as e:
        return outcome("fail", f"internal check failed: {e or traceback.format_exc(limit=1).strip()}")
    except Exception as e:
        return outcome("fail", f"unexpected {type(e).__name__}: {e}")
    if not report.ok:
        return outcome("fail", "", report)
    if not all(report.hypotheses.values()):
        missing = sorted(k for k, ok in report.hypotheses.items() if not ok)
        return outcome("partial", "hypothesis not met: " + ",".join(missing), report)
    return outcome("pass", "", report)


def run_fuzzed(prop: Prop, seed: int, index: int, ring: Optional[Ring]) -> Outcome:
    """ Generates and evaluates instance `index`; a generator crash is a failing outcome. """
    try:
        r, inst = fuzz_instance(prop, seed, index, ring)
    except Exception as e:
        return Outcome(index, prop.id, ring.N if ring else 0, "fail", 0, 0, "",
                       f"instance generation failed: {type(e).__name__}: {e}", None, None)
    return evaluate(prop, index, r, inst)
