"""
One function per computing subcommand. Object arguments are either names
of the loaded manifest or inline JSON; every command prints a readable
summary followed by the canonical JSON of its result.
"""
from dataclasses import dataclass, field
import json
from typing import Any, Callable, Optional

from homext.chaincx import (ChainComplex, ChainMap, ClassKind, ComplexClassKind, class_membership,
                            cokernel_cx, homology, kernel_cx, pullback_cx, pushout_cx)
from homext.errors import MalformedInputError, UnsupportedError
from homext.exactlin import snf
from homext.extalg import (Extension, baer_sum, complex_ext_group, ext_group, free_resolution, phi, psi,
                           relative_members, relative_ext_subgroup)
from homext.gorenstein import GorensteinContext, complex_gext_order, gext
from homext.modcat import (Module, Morphism, Ring, TestClass, cokernel, hom_group, kernel, pullback,
                           pushout)

from cli.manifest import Manifest, canonical


@dataclass
class Context:
    """ The ring and the named objects a command can refer to. """
    manifest: Optional[Manifest]

    @property
    def ring(self) -> Ring:
        if self.manifest is None:
            raise MalformedInputError("no ring given; pass --ring or --manifest", "ring")
        return self.manifest.ring

    def value(self, text: Optional[str], types: type | tuple[type, ...], flag: str) -> Any:
        """ A manifest name or an inline JSON object of the given type(s). """
        if text is None:
            raise MalformedInputError("missing argument", flag)
        manifest = self.manifest or Manifest(self.ring)
        if text in manifest:
            return manifest.expect(text, types, flag)
        try:
            raw = json.loads(text)
        except json.JSONDecodeError:
            raise MalformedInputError(f"neither a known name nor valid JSON: {text!r}", flag)
        return manifest.expect(raw, types, flag)


@dataclass
class Output:
    summary: list[str]
    data: Any

    def render(self) -> str:
        return "\n".join(self.summary + [canonical(self.data)])


@dataclass
class Subcommand:
    name: str
    help: str
    run: Callable[[Context, Any], Output]
    # (flags, argparse keyword arguments)
    arguments: list[tuple[tuple[str, ...], dict[str, Any]]] = field(default_factory=list)


COMMANDS: dict[str, Subcommand] = {}


def subcommand(name: str, help: str, *arguments: tuple[tuple[str, ...], dict[str, Any]]):
    def register(fn: Callable[[Context, Any], Output]):
        COMMANDS[name] = Subcommand(name, help, fn, list(arguments))
        return fn
    return register


def arg(*flags: str, **kwargs: Any) -> tuple[tuple[str, ...], dict[str, Any]]:
    return flags, kwargs


def _factored(ring: Ring, orders: tuple[int, ...] | list[int]) -> str:
    return str(Module.from_orders(ring, list(orders)))


# |-----------------------------------------------------------------|
# |                    Linear algebra and modules                   |
# |-----------------------------------------------------------------|

@subcommand("snf", "Smith normal form of an integer matrix",
            arg("-M", "--matrix", required=True, help="JSON list of rows"))
def cmd_snf(ctx: Context, args) -> Output:
    try:
        rows = json.loads(args.matrix)
    except json.JSONDecodeError:
        raise MalformedInputError("invalid JSON", "matrix")
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise MalformedInputError("expected a list of rows", "matrix")
    res = snf(rows)
    data = {"diagonal": [int(d) for d in res.diagonal], "U": res.U.tolist(), "D": res.D.tolist(),
            "V": res.V.tolist()}
    return Output([f"diagonal {data['diagonal']}"], data)


@subcommand("hom", "Hom(A, B) with its generators",
            arg("-A", required=True), arg("-B", required=True))
def cmd_hom(ctx: Context, args) -> Output:
    a = ctx.value(args.A, Module, "A")
    b = ctx.value(args.B, Module, "B")
    group = hom_group(a, b)
    data = {"orders": list(group.invariants()), "generators": [g.to_json() for g in group.generators]}
    return Output([_factored(ctx.ring, group.orders)], data)


def _arrow(ctx: Context, text: str, flag: str) -> Morphism | ChainMap:
    return ctx.value(text, (Morphism, ChainMap), flag)


@subcommand("kernel", "kernel of a morphism or chain map", arg("-f", required=True))
def cmd_kernel(ctx: Context, args) -> Output:
    f = _arrow(ctx, args.f, "f")
    obj, incl = kernel(f) if isinstance(f, Morphism) else kernel_cx(f)
    return Output([str(obj)], {"object": obj.to_json(), "inclusion": incl.to_json()})


@subcommand("cokernel", "cokernel of a morphism or chain map", arg("-f", required=True))
def cmd_cokernel(ctx: Context, args) -> Output:
    f = _arrow(ctx, args.f, "f")
    obj, proj = cokernel(f) if isinstance(f, Morphism) else cokernel_cx(f)
    return Output([str(obj)], {"object": obj.to_json(), "projection": proj.to_json()})


def _same_kind(f: Morphism | ChainMap, g: Morphism | ChainMap):
    if type(f) is not type(g):
        raise MalformedInputError("expected two morphisms or two chain maps", "g")


@subcommand("pullback", "pullback of a cospan A -f-> C <-g- B",
            arg("-f", required=True), arg("-g", required=True))
def cmd_pullback(ctx: Context, args) -> Output:
    f, g = _arrow(ctx, args.f, "f"), _arrow(ctx, args.g, "g")
    _same_kind(f, g)
    pb = pullback(f, g) if isinstance(f, Morphism) else pullback_cx(f, g)
    return Output([str(pb.obj)], {"object": pb.obj.to_json(), "p_a": pb.p_a.to_json(), "p_b": pb.p_b.to_json()})


@subcommand("pushout", "pushout of a span A <-f- C -g-> B",
            arg("-f", required=True), arg("-g", required=True))
def cmd_pushout(ctx: Context, args) -> Output:
    f, g = _arrow(ctx, args.f, "f"), _arrow(ctx, args.g, "g")
    _same_kind(f, g)
    po = pushout(f, g) if isinstance(f, Morphism) else pushout_cx(f, g)
    return Output([str(po.obj)], {"object": po.obj.to_json(), "i_a": po.i_a.to_json(), "i_b": po.i_b.to_json()})


# |-----------------------------------------------------------------|
# |                              Ext                                |
# |-----------------------------------------------------------------|

@subcommand("ext", "Ext^i(C, D) of modules, or Ext^1 of complexes",
            arg("-C", required=True), arg("-D", required=True),
            arg("-i", type=int, default=1, help="degree"),
            arg("--extra-rank", type=int, default=0, help="idle generators per step of the free resolution"))
def cmd_ext(ctx: Context, args) -> Output:
    c = ctx.value(args.C, (Module, ChainComplex), "C")
    d = ctx.value(args.D, type(c), "D")
    if isinstance(c, ChainComplex):
        if args.i != 1:
            raise UnsupportedError("Ext of complexes is computed in degree 1 only")
        group = complex_ext_group(c, d)
        data = {**group.to_json(), "generators": [g.cocycle.to_json() for g in group.generators]}
        return Output([str(group)], data)
    if args.extra_rank < 0:
        raise MalformedInputError("must not be negative", "extra-rank")
    res = free_resolution(c, args.i + 1, args.extra_rank) if args.extra_rank else None
    group = ext_group(args.i, c, d, res)
    return Output([str(group)], group.to_json())


@subcommand("gext", "Gorenstein GExt^i(M, N), or the order of GExt^1 of complexes",
            arg("-M", required=True), arg("-N", required=True), arg("-i", type=int, default=1))
def cmd_gext(ctx: Context, args) -> Output:
    m = ctx.value(args.M, (Module, ChainComplex), "M")
    n = ctx.value(args.N, type(m), "N")
    gctx = GorensteinContext(ctx.ring)
    if isinstance(m, ChainComplex):
        order = complex_gext_order(m, n, gctx)
        return Output([f"order {order}"], {"degree": 1, "order": order})
    group = gext(args.i, m, n, gctx)
    return Output([str(group)], {"degree": args.i, "orders": list(group.orders)})


@subcommand("relext", "the Hom(F, -)-exact (or Hom(-, F)-exact) classes of Ext^1(C, D)",
            arg("-C", required=True), arg("-D", required=True), arg("-F", required=True),
            arg("-i", type=int, default=1), arg("--right", action="store_true"))
def cmd_relext(ctx: Context, args) -> Output:
    c = ctx.value(args.C, (Module, ChainComplex), "C")
    d = ctx.value(args.D, type(c), "D")
    f = ctx.value(args.F, TestClass, "F")
    if isinstance(c, ChainComplex):
        if args.i != 1:
            raise UnsupportedError("relative subgroups are enumerated in degree 1 only")
        sub = relative_members(complex_ext_group(c, d), f, args.right)
    else:
        sub = relative_ext_subgroup(args.i, c, d, f, args.right)
    data = {"order": sub.order, "invariants": list(sub.invariants()), "group": list(sub.group.orders),
            "members": sorted(list(k) for k in sub.coords)}
    return Output([f"{_factored(ctx.ring, sub.invariants())} in {sub.group}"], data)


def _classify(e) -> str:
    return "split" if e.is_zero else "nonsplit"


@subcommand("baer", "Baer sum of two extensions", arg("-S", required=True), arg("-T", required=True))
def cmd_baer(ctx: Context, args) -> Output:
    s = ctx.value(args.S, Extension, "S")
    t = ctx.value(args.T, Extension, "T")
    total = baer_sum(s, t)
    e = phi(total)
    return Output([_classify(e), str(total)], {"extension": total.to_json(), "class": list(e.coords)})


@subcommand("phi", "the cocycle class of an extension", arg("-S", required=True))
def cmd_phi(ctx: Context, args) -> Output:
    e = phi(ctx.value(args.S, Extension, "S"))
    return Output([f"{e} in {e.parent}", _classify(e)], {"group": list(e.parent.orders), **e.to_json()})


@subcommand("psi", "the extension realizing a class of Ext^1(C, D)",
            arg("-C", required=True), arg("-D", required=True),
            arg("--coords", required=True, help="JSON list of coordinates"))
def cmd_psi(ctx: Context, args) -> Output:
    c = ctx.value(args.C, (Module, ChainComplex), "C")
    d = ctx.value(args.D, type(c), "D")
    try:
        coords = json.loads(args.coords)
    except json.JSONDecodeError:
        raise MalformedInputError("invalid JSON", "coords")
    if not isinstance(coords, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in coords):
        raise MalformedInputError("expected a list of integers", "coords")
    group = ext_group(1, c, d) if isinstance(c, Module) else complex_ext_group(c, d)
    if len(coords) != len(group.orders):
        raise MalformedInputError(f"expected {len(group.orders)} coordinates", "coords")
    s = psi(group.element(coords))
    return Output([str(s)], s.to_json())


# |-----------------------------------------------------------------|
# |                           Complexes                             |
# |-----------------------------------------------------------------|

@subcommand("homology", "homology of a complex in every degree of its support", arg("-X", required=True))
def cmd_homology(ctx: Context, args) -> Output:
    x = ctx.value(args.X, ChainComplex, "X")
    groups = {m: homology(x, m) for m in x.support}
    summary = [f"H_{m} = {h}" for m, h in groups.items()]
    return Output(summary, {str(m): h.to_json() for m, h in groups.items()})


@subcommand("membership", "membership of a complex in dwF~, F~ or dgF~",
            arg("-X", required=True), arg("-F", required=True),
            arg("--kind", choices=[k.value for k in ClassKind], default=ClassKind.DEGREEWISE.value))
def cmd_membership(ctx: Context, args) -> Output:
    x = ctx.value(args.X, ChainComplex, "X")
    f = ctx.value(args.F, TestClass, "F")
    answer = class_membership(x, ComplexClassKind(ClassKind(args.kind), f))
    text = {True: "member", False: "not a member", None: "undecided"}[answer]
    return Output([text], {"kind": args.kind, "member": answer})


@subcommand("resolve", "free resolution of a module",
            arg("-C", required=True), arg("--depth", type=int, default=2),
            arg("--extra-rank", type=int, default=0))
def cmd_resolve(ctx: Context, args) -> Output:
    c = ctx.value(args.C, Module, "C")
    if args.extra_rank < 0:
        raise MalformedInputError("must not be negative", "extra-rank")
    res = free_resolution(c, args.depth, args.extra_rank)
    summary = [" <- ".join([str(c)] + [str(m) for m in res.modules])]
    return Output(summary, {"modules": [m.to_json() for m in res.modules], "maps": [f.to_json() for f in res.maps]})
