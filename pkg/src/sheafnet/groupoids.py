"""Finite groupoids, gluing functors, and two-way logic transport.

The subobject classifier of a finite groupoid (at the level of subobjects
of the terminal object) is the Boolean algebra of subsets of its set of
connected components.  A functor F: G' -> G transports component sets
forward by image (`lambda_transport`) and backward by preimage
(`tau_transport`); the two are adjoint, the backward transport is a
section of the forward one exactly when F is surjective on components, and
both checks run exhaustively.  Transport on general subobject algebras
Omega^X is out of scope here; the component level is where the flow
statements are finitely checkable.

`check_fibrant_injective` tests diagrams of sets or of groupoids over a
network poset for fibrancy in the injective sense: surjectivity (or the
isofibration condition) along single covering arrows, joint surjectivity
onto the product at every confluence.
"""

from dataclasses import dataclass, field
from itertools import product as iproduct

from .errors import BoundExceeded, GroupoidError
from .presheaf import Presheaf

DEFAULT_MORPHISM_BOUND = 200
DEFAULT_GROUP_BOUND = 10_000


# ---------------------------------------------------------------------------
# FiniteGroupoid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteGroupoid:
    objects: tuple
    morphisms: tuple                    # ids
    src: dict = field(compare=False)
    dst: dict = field(compare=False)
    comp: dict = field(compare=False)   # (g, f) -> g after f, when dst(f) == src(g)
    inv: dict = field(compare=False)
    ident: dict = field(compare=False)  # object -> identity morphism id

    @staticmethod
    def from_tables(objects, src, dst, comp, inv, ident):
        g = FiniteGroupoid(tuple(objects), tuple(src), dict(src), dict(dst),
                           dict(comp), dict(inv), dict(ident))
        g.validate()
        return g

    def validate(self):
        for o in self.objects:
            e = self.ident.get(o)
            if e is None or self.src[e] != o or self.dst[e] != o:
                raise GroupoidError(f"missing or ill-typed identity at {o!r}")
        for f in self.morphisms:
            if self.src[f] not in self.objects or self.dst[f] not in self.objects:
                raise GroupoidError(f"morphism {f!r} has unknown endpoints")
            fi = self.inv.get(f)
            if fi is None:
                raise GroupoidError(f"morphism {f!r} has no inverse")
            if self.comp[(fi, f)] != self.ident[self.src[f]]:
                raise GroupoidError(f"inverse law fails at {f!r}")
            if self.comp[(f, fi)] != self.ident[self.dst[f]]:
                raise GroupoidError(f"inverse law fails at {f!r}")
        for f in self.morphisms:
            for g in self.morphisms:
                if self.dst[f] == self.src[g]:
                    h = self.comp.get((g, f))
                    if h is None or self.src[h] != self.src[f] or self.dst[h] != self.dst[g]:
                        raise GroupoidError(f"composition missing or ill-typed for ({g!r}, {f!r})")
        for f in self.morphisms:
            for g in self.morphisms:
                if self.dst[f] != self.src[g]:
                    continue
                for h in self.morphisms:
                    if self.dst[g] != self.src[h]:
                        continue
                    if self.comp[(h, self.comp[(g, f)])] != self.comp[(self.comp[(h, g)], f)]:
                        raise GroupoidError("associativity failure")
        return self

    def hom(self, x, y):
        return tuple(f for f in self.morphisms if self.src[f] == x and self.dst[f] == y)

    # -- components ---------------------------------------------------------

    def components(self):
        """Partition of the objects under "there exists a morphism"."""
        parent = {o: o for o in self.objects}

        def find(o):
            while parent[o] != o:
                parent[o] = parent[parent[o]]
                o = parent[o]
            return o

        for f in self.morphisms:
            a, b = find(self.src[f]), find(self.dst[f])
            if a != b:
                parent[a] = b
        groups = {}
        for o in self.objects:
            groups.setdefault(find(o), []).append(o)
        return tuple(tuple(sorted(g, key=str)) for g in
                     sorted(groups.values(), key=lambda c: str(min(c, key=str))))

    def component_of(self, obj):
        for comp in self.components():
            if obj in comp:
                return comp
        raise GroupoidError(f"unknown object {obj!r}")


def connected_components(g):
    return g.components()


# -- constructors -------------------------------------------------------------

def discrete_groupoid(objects):
    objects = tuple(objects)
    ident = {o: ("id", o) for o in objects}
    morphisms = tuple(ident.values())
    src = {m: m[1] for m in morphisms}
    dst = dict(src)
    comp = {(m, m): m for m in morphisms}
    inv = {m: m for m in morphisms}
    return FiniteGroupoid(objects, morphisms, src, dst, comp, inv, ident)


def pair_groupoid(objects):
    """The codiscrete groupoid: exactly one morphism between any two objects."""
    objects = tuple(objects)
    morphisms = tuple((a, b) for a in objects for b in objects)
    src = {m: m[0] for m in morphisms}
    dst = {m: m[1] for m in morphisms}
    comp = {((b, c), (a, b2)): (a, c)
            for a in objects for b2 in objects for b in objects for c in objects
            if b2 == b}
    inv = {(a, b): (b, a) for a, b in morphisms}
    ident = {o: (o, o) for o in objects}
    return FiniteGroupoid(objects, morphisms, src, dst, comp, inv, ident)


def group_as_groupoid(generators, bound=DEFAULT_MORPHISM_BOUND):
    """One-object groupoid on the closure of permutation generators.

    ``generators``: dict name -> permutation dict on a common finite set.
    """
    elements = close_permutation_group(generators, bound)
    obj = "*"
    morphisms = tuple(sorted(elements))
    src = {m: obj for m in morphisms}
    dst = {m: obj for m in morphisms}
    comp = {(g, f): _compose_key(elements, g, f) for g in morphisms for f in morphisms}
    ident_key = min(k for k, p in elements.items() if all(a == b for a, b in p))
    inv = {}
    for m in morphisms:
        pm = dict(elements[m])
        target = {v: k for k, v in pm.items()}
        inv[m] = next(k for k, p in elements.items() if dict(p) == target)
    return FiniteGroupoid((obj,), morphisms, src, dst, comp, inv, {obj: ident_key})


def _compose_key(elements, g, f):
    pg, pf = dict(elements[g]), dict(elements[f])
    gf = tuple(sorted((x, pg[pf[x]]) for x in pf))
    return next(k for k, p in elements.items() if p == gf)


def close_permutation_group(generators, bound=DEFAULT_GROUP_BOUND):
    """All group elements as canonical tuples, keyed by a deterministic name."""
    domain = None
    gens = {}
    for name, p in generators.items():
        p = dict(p)
        if domain is None:
            domain = sorted(p, key=str)
        if sorted(p, key=str) != domain or sorted(p.values(), key=str) != domain:
            raise GroupoidError(f"generator {name!r} is not a bijection of the domain")
        gens[name] = tuple(sorted(p.items(), key=lambda kv: str(kv[0])))
    ident = tuple(sorted(((x, x) for x in domain), key=lambda kv: str(kv[0])))
    found = {ident: "e"}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            pd = dict(p)
            for name, q in gens.items():
                qd = dict(q)
                comp = tuple(sorted(((x, qd[pd[x]]) for x in pd), key=lambda kv: str(kv[0])))
                if comp not in found:
                    found[comp] = f"g{len(found)}"
                    nxt.append(comp)
                    if len(found) > bound:
                        raise BoundExceeded(f"group closure exceeds bound {bound}")
        frontier = nxt
    return {name: perm for perm, name in found.items()}


def disjoint_union(g1, g2, tags=("L", "R")):
    def tag(t, x):
        return (t, x)

    objects = tuple(tag(tags[0], o) for o in g1.objects) + tuple(tag(tags[1], o) for o in g2.objects)
    morphisms = tuple(tag(tags[0], m) for m in g1.morphisms) + tuple(tag(tags[1], m) for m in g2.morphisms)
    src, dst, inv, ident, comp = {}, {}, {}, {}, {}
    for t, g in ((tags[0], g1), (tags[1], g2)):
        for m in g.morphisms:
            src[tag(t, m)] = tag(t, g.src[m])
            dst[tag(t, m)] = tag(t, g.dst[m])
            inv[tag(t, m)] = tag(t, g.inv[m])
        for o in g.objects:
            ident[tag(t, o)] = tag(t, g.ident[o])
        for (a, b), c in g.comp.items():
            comp[(tag(t, a), tag(t, b))] = tag(t, c)
    return FiniteGroupoid(objects, morphisms, src, dst, comp, inv, ident)


def product_groupoid(g1, g2):
    objects = tuple(iproduct(g1.objects, g2.objects))
    morphisms = tuple(iproduct(g1.morphisms, g2.morphisms))
    src = {(m, n): (g1.src[m], g2.src[n]) for m, n in morphisms}
    dst = {(m, n): (g1.dst[m], g2.dst[n]) for m, n in morphisms}
    inv = {(m, n): (g1.inv[m], g2.inv[n]) for m, n in morphisms}
    ident = {(a, b): (g1.ident[a], g2.ident[b]) for a, b in objects}
    comp = {}
    for m, n in morphisms:
        for m2, n2 in morphisms:
            if g1.dst[m2] == g1.src[m] and g2.dst[n2] == g2.src[n]:
                comp[((m, n), (m2, n2))] = (g1.comp[(m, m2)], g2.comp[(n, n2)])
    return FiniteGroupoid(objects, morphisms, src, dst, comp, inv, ident)


# ---------------------------------------------------------------------------
# Functors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupoidFunctor:
    source: FiniteGroupoid
    target: FiniteGroupoid
    object_map: dict = field(compare=False)
    morphism_map: dict = field(compare=False)

    @staticmethod
    def of(source, target, object_map, morphism_map):
        f = GroupoidFunctor(source, target, dict(object_map), dict(morphism_map))
        f.validate()
        return f

    def validate(self):
        om, mm = self.object_map, self.morphism_map
        for o in self.source.objects:
            if om.get(o) not in self.target.objects:
                raise GroupoidError(f"object map undefined or foreign at {o!r}")
        for m in self.source.morphisms:
            fm = mm.get(m)
            if fm not in self.target.morphisms:
                raise GroupoidError(f"morphism map undefined or foreign at {m!r}")
            if self.target.src[fm] != om[self.source.src[m]] or \
               self.target.dst[fm] != om[self.source.dst[m]]:
                raise GroupoidError(f"functor breaks source/target at {m!r}")
        for o in self.source.objects:
            if mm[self.source.ident[o]] != self.target.ident[om[o]]:
                raise GroupoidError(f"functor breaks identity at {o!r}")
        for (g, f), h in self.source.comp.items():
            if self.target.comp[(mm[g], mm[f])] != mm[h]:
                raise GroupoidError(f"functor breaks composition at ({g!r}, {f!r})")
        return self

    def component_image(self, comp):
        return self.target.component_of(self.object_map[comp[0]])


def identity_functor(g):
    return GroupoidFunctor.of(g, g, {o: o for o in g.objects},
                              {m: m for m in g.morphisms})


def constant_functor(source, target, obj):
    return GroupoidFunctor.of(
        source, target,
        {o: obj for o in source.objects},
        {m: target.ident[obj] for m in source.morphisms})


# ---------------------------------------------------------------------------
# Logic transport on component algebras
# ---------------------------------------------------------------------------

def lambda_transport(functor, comps):
    """Feed-forward transport: the image of a component set."""
    comps = frozenset(comps)
    known = set(functor.source.components())
    if not comps <= known:
        raise GroupoidError("unknown component in lambda_transport")
    return frozenset(functor.component_image(c) for c in comps)


def tau_transport(functor, comps):
    """Feedback transport: the saturated preimage of a component set."""
    comps = frozenset(comps)
    known = set(functor.target.components())
    if not comps <= known:
        raise GroupoidError("unknown component in tau_transport")
    return frozenset(c for c in functor.source.components()
                     if functor.component_image(c) in comps)


@dataclass(frozen=True)
class AdjunctionReport:
    adjunction_ok: bool
    unit_ok: bool
    surjective_on_components: bool
    section_ok: bool            # lambda o tau = Id on the target algebra
    failures: tuple = ()

    @property
    def ok(self):
        return self.adjunction_ok and self.unit_ok and \
            (self.section_ok or not self.surjective_on_components)


def powerset(items):
    items = list(items)
    for mask in range(2 ** len(items)):
        yield frozenset(x for i, x in enumerate(items) if (mask >> i) & 1)


def check_adjunction_and_section(functor, component_bound=8):
    """Exhaustively verify lambda -| tau, the unit, and whether the forward
    transport retracts the backward one (it must iff the functor is
    surjective on components)."""
    src_comps = functor.source.components()
    dst_comps = functor.target.components()
    if len(src_comps) > component_bound or len(dst_comps) > component_bound:
        raise BoundExceeded("too many components for the exhaustive check")
    failures = []
    adj = unit = True
    for p in powerset(src_comps):
        lam = lambda_transport(functor, p)
        if not p <= tau_transport(functor, lam):
            unit = False
            failures.append(("unit", p))
        for q in powerset(dst_comps):
            left = lam <= q
            right = p <= tau_transport(functor, q)
            if left != right:
                adj = False
                failures.append(("adjunction", p, q))
    image = {functor.component_image(c) for c in src_comps}
    surjective = image == set(dst_comps)
    section = True
    for q in powerset(dst_comps):
        if lambda_transport(functor, tau_transport(functor, q)) != q:
            section = False
            failures.append(("section", q))
    return AdjunctionReport(adj, unit, surjective, section, tuple(failures[:8]))


# ---------------------------------------------------------------------------
# Fibrations
# ---------------------------------------------------------------------------

def is_fibration(functor):
    """Isofibration: every target morphism starting at the image of an
    object lifts to a morphism starting at that object."""
    g, h = functor.source, functor.target
    for x in g.objects:
        fx = functor.object_map[x]
        for phi in h.morphisms:
            if h.src[phi] != fx:
                continue
            if not any(g.src[m] == x and functor.morphism_map[m] == phi
                       for m in g.morphisms):
                return False
    return True


def pairing_functor(functors):
    """G -> product of the targets, from a family of functors on one source."""
    src = functors[0].source
    if any(f.source is not src and f.source != src for f in functors):
        raise GroupoidError("pairing needs a common source")
    prod = functors[0].target
    for f in functors[1:]:
        prod = product_groupoid(prod, f.target)

    def nest(values):
        out = values[0]
        for v in values[1:]:
            out = (out, v)
        return out

    omap = {o: nest([f.object_map[o] for f in functors]) for o in src.objects}
    mmap = {m: nest([f.morphism_map[m] for f in functors]) for m in src.morphisms}
    return GroupoidFunctor.of(src, prod, omap, mmap)


def is_multifibration(functors):
    """A family of functors with common source is a multi-fibration when the
    pairing into the product groupoid is a fibration."""
    return is_fibration(pairing_functor(list(functors)))


# ---------------------------------------------------------------------------
# Stacks over posets and the fibrancy checker
# ---------------------------------------------------------------------------

class StackOverPoset:
    """A contravariant assignment of groupoids to poset elements: a fiber per
    element, a gluing functor fiber(y) -> fiber(x) per covering pair x < y."""

    def __init__(self, poset, fibers, glue):
        self.poset = poset
        self.fibers = dict(fibers)
        self.glue = {}
        covering = poset.covering()
        for pair in covering:
            if pair not in glue:
                raise GroupoidError(f"missing gluing functor for covering pair {pair!r}")
        for pair, f in glue.items():
            if pair not in covering:
                raise GroupoidError(f"{pair!r} is not a covering pair")
            x, y = pair
            if f.source != self.fibers[y] or f.target != self.fibers[x]:
                raise GroupoidError(f"gluing functor for {pair!r} has wrong endpoints")
            self.glue[pair] = f
        self._check_composites()

    def _check_composites(self):
        poset = self.poset
        full = {}
        for x in poset.elements:
            full[(x, x)] = identity_functor(self.fibers[x])
        order = poset.linear_extension()
        pos = {e: i for i, e in enumerate(order)}
        pairs = sorted(((x, y) for x in poset.elements for y in poset.elements
                        if x != y and poset.leq(x, y)),
                       key=lambda p: pos[p[1]] - pos[p[0]])
        for x, y in pairs:
            candidate = None
            for z in poset.lower_covers(y):
                if not poset.leq(x, z):
                    continue
                step = self.glue[(z, y)]
                lower = full[(x, z)]
                omap = {o: lower.object_map[step.object_map[o]]
                        for o in self.fibers[y].objects}
                mmap = {m: lower.morphism_map[step.morphism_map[m]]
                        for m in self.fibers[y].morphisms}
                if candidate is None:
                    candidate = (omap, mmap)
                elif candidate != (omap, mmap):
                    raise GroupoidError(
                        f"gluing functors do not compose functorially between {x!r} and {y!r}")
            full[(x, y)] = GroupoidFunctor.of(self.fibers[y], self.fibers[x], *candidate)
        self._full = full

    def restriction(self, x, y):
        return self._full[(x, y)]


@dataclass(frozen=True)
class FibrancyReport:
    fibrant: bool
    verdicts: dict = field(compare=False)

    def as_dict(self):
        return {"fibrant": self.fibrant,
                "verdicts": {str(k): v for k, v in sorted(self.verdicts.items(), key=str)}}


def check_fibrant_injective(diagram):
    """Fibrancy of a set- or groupoid-valued diagram over a network poset.

    At every element with one covered predecessor the restriction must be
    surjective (sets) or an isofibration (groupoids); at every confluence
    (two or more covered predecessors) the pairing into the product must be
    surjective, resp. a fibration.  Verdicts are reported per element.
    """
    if isinstance(diagram, Presheaf):
        return _check_fibrant_sets(diagram)
    if isinstance(diagram, StackOverPoset):
        return _check_fibrant_stack(diagram)
    raise GroupoidError("diagram must be a Presheaf or a StackOverPoset")


def _check_fibrant_sets(p):
    poset = p.poset
    verdicts = {}
    fibrant = True
    for y in poset.elements:
        preds = poset.lower_covers(y)
        entry = {"confluence": len(preds) >= 2, "nonempty": len(p.carriers[y]) > 0}
        if not preds:
            entry["ok"] = True
        elif len(preds) == 1:
            x = preds[0]
            image = {p.restrict(x, y, s) for s in p.carriers[y]}
            entry["ok"] = image == set(p.carriers[x])
            entry["why"] = "restriction surjective" if entry["ok"] else \
                f"restriction to {x!r} misses {sorted(map(str, set(p.carriers[x]) - image))}"
        else:
            image = {tuple(p.restrict(x, y, s) for x in preds) for s in p.carriers[y]}
            target = set(iproduct(*(p.carriers[x] for x in preds)))
            entry["ok"] = image == target
            entry["why"] = "onto the product" if entry["ok"] else \
                f"misses {len(target - image)} tuples of the product"
        fibrant = fibrant and entry["ok"]
        verdicts[y] = entry
    return FibrancyReport(fibrant, verdicts)


def _check_fibrant_stack(stack):
    poset = stack.poset
    verdicts = {}
    fibrant = True
    for y in poset.elements:
        preds = poset.lower_covers(y)
        entry = {"confluence": len(preds) >= 2}
        if not preds:
            entry["ok"] = True
        elif len(preds) == 1:
            entry["ok"] = is_fibration(stack.glue[(preds[0], y)])
            entry["why"] = "isofibration" if entry["ok"] else "lift missing"
        else:
            entry["ok"] = is_multifibration([stack.glue[(x, y)] for x in preds])
            entry["why"] = "multi-fibration onto the product" if entry["ok"] else \
                "pairing into the product is not a fibration"
        fibrant = fibrant and entry["ok"]
        verdicts[y] = entry
    return FibrancyReport(fibrant, verdicts)


# ---------------------------------------------------------------------------
# Group actions on finite sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitReport:
    group_order: int
    orbits: tuple          # tuple of (sorted orbit tuple, stabilizer order)

    def sizes(self):
        return tuple(len(o) for o, _ in self.orbits)

    def as_dict(self):
        return {
            "group_order": self.group_order,
            "orbits": [{"size": len(o), "stabilizer": s, "members": [str(x) for x in o]}
                       for o, s in self.orbits],
        }


def group_action_orbits(generators, points, bound=DEFAULT_GROUP_BOUND):
    """Orbits and stabilizer orders of the group generated by permutations.

    ``generators``: dict name -> dict point -> point.  The orbit-stabilizer
    identity |orbit| * |stabilizer| = |G| is verified on every orbit.
    """
    points = list(points)
    for name, p in generators.items():
        if sorted(map(str, p)) != sorted(map(str, points)) or \
           sorted(map(str, p.values())) != sorted(map(str, points)):
            raise GroupoidError(f"generator {name!r} is not a bijection of the point set")
    elements = close_permutation_group(generators, bound)
    order = len(elements)
    perms = [dict(p) for p in elements.values()]
    seen, orbits = set(), []
    for x in points:
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g in generators.values():
                z = g[y]
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        seen |= orbit
        rep = min(orbit, key=str)
        stab = sum(1 for p in perms if p[rep] == rep)
        if len(orbit) * stab != order:
            raise GroupoidError("orbit-stabilizer identity failed; generators inconsistent")
        orbits.append((tuple(sorted(orbit, key=str)), stab))
    orbits.sort(key=lambda o: (len(o[0]), o[0]))
    return OrbitReport(order, tuple(orbits))
