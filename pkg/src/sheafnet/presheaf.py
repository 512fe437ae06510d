"""Finite-set-valued presheaves over finite posets.

A presheaf assigns a finite carrier to every poset element and a
restriction map F(y) -> F(x) to every covering pair x < y; composites along
order paths must agree (validated at construction).  Global sections (the
limit H0) are enumerated exactly by backtracking over the maximal
elements.  `sheafify_at_forks` extends a presheaf on the star-free poset to
the full fork site, putting the product of the tip carriers on each star;
`cats_manifold` restricts the section set by a predicate on the output
layers via the terminal-fork extension of the site.

Subobjects (stable families of subsets) form a Heyting algebra; the
implication is pointwise and `subobject_oracle_implies` recomputes it as a
literal supremum for cross-checking.
"""

from dataclasses import dataclass
from itertools import product as iproduct

from .arch_site import FinitePoset, build_poset
from .errors import BoundExceeded, PresheafError

DEFAULT_SECTION_BOUND = 10**6


class Presheaf:
    def __init__(self, poset, carriers, maps):
        """``carriers``: element -> iterable of states.  ``maps``: for every
        covering pair (x, y) with x < y a dict sending each state of F(y)
        to a state of F(x)."""
        self.poset = poset
        self.carriers = {x: tuple(carriers[x]) for x in poset.elements}
        for x, states in self.carriers.items():
            if len(set(states)) != len(states):
                raise PresheafError(f"carrier at {x!r} has repeated states")
        self.maps = {}
        covering = poset.covering()
        for pair in covering:
            if pair not in maps:
                raise PresheafError(f"missing restriction map for covering pair {pair!r}")
        for pair, m in maps.items():
            if pair not in covering:
                raise PresheafError(f"{pair!r} is not a covering pair")
            x, y = pair
            m = dict(m)
            missing = set(self.carriers[y]) - set(m)
            if missing:
                raise PresheafError(f"map {pair!r} undefined on {sorted(map(str, missing))}")
            bad = set(m.values()) - set(self.carriers[x])
            if bad:
                raise PresheafError(f"map {pair!r} lands outside F({x!r})")
            self.maps[pair] = m
        self._restrictions = self._close()

    def _close(self):
        """Full restriction maps for every x <= y, checking functoriality."""
        poset = self.poset
        full = {}
        for x in poset.elements:
            full[(x, x)] = {s: s for s in self.carriers[x]}
        # walk pairs in increasing order-distance so composites are ready
        order = poset.linear_extension()
        pos = {e: i for i, e in enumerate(order)}
        pairs = sorted(
            ((x, y) for x in poset.elements for y in poset.elements
             if x != y and poset.leq(x, y)),
            key=lambda p: pos[p[1]] - pos[p[0]])
        for x, y in pairs:
            candidate = None
            for z in poset.lower_covers(y):
                if not poset.leq(x, z):
                    continue
                step = self.maps[(z, y)]
                lower = full[(x, z)]
                composed = {s: lower[step[s]] for s in self.carriers[y]}
                if candidate is None:
                    candidate = composed
                elif candidate != composed:
                    raise PresheafError(
                        f"functoriality failure between {x!r} and {y!r}: "
                        "two order paths compose to different maps")
            full[(x, y)] = candidate
        return full

    def restrict(self, x, y, state):
        """Image of ``state`` in F(x) along x <= y."""
        return self._restrictions[(x, y)][state]

    def restriction_map(self, x, y):
        return dict(self._restrictions[(x, y)])

    # -- sections ----------------------------------------------------------

    def sections(self, bound=DEFAULT_SECTION_BOUND):
        """Exact enumeration of the limit over the poset.

        Backtracks over the maximal elements, propagating restrictions down
        and pruning on the first clash; raises BoundExceeded once more than
        ``bound`` candidate states have been tried."""
        poset = self.poset
        maximal = list(poset.maximal())
        below = {m: [x for x in poset.elements if x != m and poset.leq(x, m)]
                 for m in maximal}
        out = []
        explored = [0]

        def extend(i, assignment):
            if i == len(maximal):
                out.append(dict(assignment))
                return
            m = maximal[i]
            for s in self.carriers[m]:
                explored[0] += 1
                if explored[0] > bound:
                    raise BoundExceeded(
                        f"section search explored more than {bound} candidates")
                conflict = False
                touched = []
                for x in below[m]:
                    v = self._restrictions[(x, m)][s]
                    if x in assignment:
                        if assignment[x] != v:
                            conflict = True
                            break
                    else:
                        assignment[x] = v
                        touched.append(x)
                if not conflict:
                    assignment[m] = s
                    extend(i + 1, assignment)
                    del assignment[m]
                for x in touched:
                    del assignment[x]

        extend(0, {})
        out.sort(key=lambda s: tuple(str(s[x]) for x in poset.elements))
        return SectionSet(tuple(poset.elements), tuple(out))


@dataclass(frozen=True)
class SectionSet:
    elements: tuple
    tuples: tuple

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def project(self, elements):
        elements = tuple(elements)
        return [tuple(s[e] for e in elements) for s in self.tuples]


def sections(presheaf, bound=DEFAULT_SECTION_BOUND):
    return presheaf.sections(bound)


def constant_presheaf(poset, states):
    states = tuple(states)
    ident = {s: s for s in states}
    return Presheaf(poset, {x: states for x in poset.elements},
                    {pair: dict(ident) for pair in poset.covering()})


# ---------------------------------------------------------------------------
# Fork-site machinery
# ---------------------------------------------------------------------------

def star_site_poset(fg):
    """The poset on all fork-graph vertices, stars included."""
    stars = set(fg.stars())
    tangs = set(fg.tangs())
    rel = []
    for s, d in fg.arrows:
        if d in stars:
            rel.append((s, d))        # tip <= star
        elif s in stars:
            rel.append((s, d))        # star <= tang
        elif s in tangs:
            rel.append((d, s))        # handle <= tang
        else:
            rel.append((d, s))        # receiver <= sender
    return FinitePoset(fg.vertices, rel, fork_graph=fg)


def sheafify_at_forks(presheaf, fg):
    """Extend a presheaf on the star-free poset to the full fork site.

    The star value is the product of the tip values; the tang-to-star map
    is the product of the tang-to-tip restrictions; everything else is
    untouched.  A constant presheaf picks up the diagonal map at each fork.
    """
    base = presheaf.poset
    if set(base.elements) != {v for v in fg.vertices if fg.kind[v] != "star"}:
        raise PresheafError("presheaf poset does not match the fork graph")
    big = star_site_poset(fg)
    carriers = {}
    for v in big.elements:
        if fg.kind[v] == "star":
            tang = fg.successors(v)[0]
            tips = fg.tips_of(tang)
            carriers[v] = tuple(iproduct(*(presheaf.carriers[t] for t in tips)))
        else:
            carriers[v] = presheaf.carriers[v]
    star_of = {f.star: f for f in fg.forks}
    maps = {}
    for x, y in big.covering():
        if fg.kind[x] == "star":                      # star < tang: the product map
            f = star_of[x]
            if y != f.tang:
                raise PresheafError("unexpected covering above a star")
            maps[(x, y)] = {
                s: tuple(presheaf.restrict(t, f.tang, s) for t in f.tips)
                for s in presheaf.carriers[f.tang]}
        elif fg.kind[y] == "star":                   # tip < star: the projection
            f = star_of[y]
            pos = f.tips.index(x)
            maps[(x, y)] = {tup: tup[pos] for tup in carriers[y]}
        else:
            maps[(x, y)] = presheaf.restriction_map(x, y)
    return Presheaf(big, carriers, maps)


def standard_feedforward_presheaf(fg, carriers, edge_maps, handle_maps):
    """The sheaf of a functioning network: product carriers on the tangs,
    projections to the tips, supplied dynamics everywhere else.

    ``carriers``: states per non-star, non-tang vertex.  ``edge_maps``: per
    ordinary data-flow edge (u, v) a dict F(u) -> F(v).  ``handle_maps``:
    per tang a dict from tip-state tuples (in ``fg.tips_of`` order) to
    handle states.  Tips minted by input duplication inherit the input's
    carrier with the identity map when left unspecified.
    """
    poset = build_poset(fg)
    tangs = set(fg.tangs())
    carriers = dict(carriers)
    edge_maps = dict(edge_maps)
    for v in poset.elements:
        if v in tangs or v in carriers:
            continue
        preds = fg.predecessors(v)
        if len(preds) == 1 and preds[0] in carriers and v.startswith(preds[0]):
            carriers[v] = tuple(carriers[preds[0]])
            edge_maps.setdefault((preds[0], v), {s: s for s in carriers[v]})
    full = {}
    for v in poset.elements:
        if v in tangs:
            full[v] = tuple(iproduct(*(carriers[t] for t in fg.tips_of(v))))
        else:
            full[v] = tuple(carriers[v])
    maps = {}
    for x, y in poset.covering():
        if y in tangs:
            tips = fg.tips_of(y)
            if x in tips:
                pos = tips.index(x)
                maps[(x, y)] = {tup: tup[pos] for tup in full[y]}
            else:                                    # x is the handle
                maps[(x, y)] = {tup: handle_maps[y][tup] for tup in full[y]}
        else:
            maps[(x, y)] = dict(edge_maps[(y, x)])   # data-flow edge y -> x
    return Presheaf(poset, full, maps)


# ---------------------------------------------------------------------------
# Cat's manifolds
# ---------------------------------------------------------------------------

def _output_elements(presheaf):
    fg = presheaf.poset.fork_graph
    if fg is not None:
        roles = fg.role_sets()
        outs = [v for v in presheaf.poset.elements if "output" in roles.get(v, ())]
        if outs:
            return outs
    return list(presheaf.poset.minimal())


def cats_manifold(presheaf, out_predicate, bound=DEFAULT_SECTION_BOUND):
    """Sections whose output components satisfy a predicate.

    ``out_predicate`` maps output elements to the accepted subset of their
    carrier; omitted outputs accept everything.  Implemented by extending
    the site with a terminal fork (product of the outputs, a two-state
    truth layer and a singleton forcing "true") and enumerating the
    sections of the extended presheaf.
    """
    outputs = _output_elements(presheaf)
    for el in out_predicate:
        if el not in outputs:
            raise PresheafError(f"predicate on non-output element {el!r}")
    accepted = {el: frozenset(out_predicate.get(el, presheaf.carriers[el]))
                for el in outputs}
    for el, acc in accepted.items():
        bad = acc - set(presheaf.carriers[el])
        if bad:
            raise PresheafError(f"predicate states {sorted(map(str, bad))} not in F({el!r})")

    poset = presheaf.poset
    b, wb, w1 = "__B", "__wb", "__w1"
    rel = [(x, y) for x in poset.elements for y in poset.elements
           if x != y and poset.leq(x, y)]
    rel += [(o, b) for o in outputs]
    rel += [(wb, b), (wb, w1)]
    big = FinitePoset(list(poset.elements) + [b, wb, w1], rel)
    carriers = {x: presheaf.carriers[x] for x in poset.elements}
    carriers[b] = tuple(iproduct(*(presheaf.carriers[o] for o in outputs)))
    carriers[wb] = (False, True)
    carriers[w1] = ("*",)
    maps = {}
    for x, y in big.covering():
        if y == b:
            if x == wb:
                maps[(x, y)] = {
                    tup: all(s in accepted[o] for o, s in zip(outputs, tup))
                    for tup in carriers[b]}
            else:
                pos = outputs.index(x)
                maps[(x, y)] = {tup: tup[pos] for tup in carriers[b]}
        elif y == w1:
            maps[(x, y)] = {"*": True}
        else:
            maps[(x, y)] = presheaf.restriction_map(x, y)
    extended = Presheaf(big, carriers, maps)
    secs = extended.sections(bound)
    kept = [{x: s[x] for x in poset.elements} for s in secs]
    kept.sort(key=lambda s: tuple(str(s[x]) for x in poset.elements))
    return SectionSet(tuple(poset.elements), tuple(kept))


# ---------------------------------------------------------------------------
# Subobjects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subobject:
    """A stable family of subsets Y(x) of the carriers of a presheaf."""

    parts: tuple  # tuple of frozensets, aligned with poset.elements

    @staticmethod
    def of(presheaf, parts):
        poset = presheaf.poset
        fixed = []
        for x in poset.elements:
            part = frozenset(parts.get(x, ()))
            bad = part - set(presheaf.carriers[x])
            if bad:
                raise PresheafError(f"subobject at {x!r} has foreign states {sorted(map(str, bad))}")
            fixed.append(part)
        sub = Subobject(tuple(fixed))
        sub.validate(presheaf)
        return sub

    def validate(self, presheaf):
        poset = presheaf.poset
        idx = poset.index
        for x, y in poset.covering():
            for s in self.parts[idx[y]]:
                if presheaf.restrict(x, y, s) not in self.parts[idx[x]]:
                    raise PresheafError(
                        f"subobject not stable: restriction of {s!r} from {y!r} "
                        f"leaves the part at {x!r}")
        return self

    def part(self, presheaf, x):
        return self.parts[presheaf.poset.index[x]]


def subobject_top(presheaf):
    return Subobject(tuple(frozenset(presheaf.carriers[x]) for x in presheaf.poset.elements))


def subobject_bottom(presheaf):
    return Subobject(tuple(frozenset() for _ in presheaf.poset.elements))


def subobject_leq(a, b):
    return all(x <= y for x, y in zip(a.parts, b.parts))


def subobject_meet(a, b):
    return Subobject(tuple(x & y for x, y in zip(a.parts, b.parts)))


def subobject_join(a, b):
    return Subobject(tuple(x | y for x, y in zip(a.parts, b.parts)))


def subobject_implies(presheaf, q, t):
    """(Q => T)(x) = states of F(x) all of whose restrictions obey Q -> T."""
    poset = presheaf.poset
    idx = poset.index
    parts = []
    for x in poset.elements:
        keep = []
        for s in presheaf.carriers[x]:
            ok = True
            for y in poset.elements:
                if not poset.leq(y, x):
                    continue
                r = presheaf.restrict(y, x, s)
                if r in q.parts[idx[y]] and r not in t.parts[idx[y]]:
                    ok = False
                    break
            if ok:
                keep.append(s)
        parts.append(frozenset(keep))
    return Subobject(tuple(parts)).validate(presheaf)


def subobject_neg(presheaf, q):
    return subobject_implies(presheaf, q, subobject_bottom(presheaf))


def all_subobjects(presheaf, bound=200_000):
    """Every stable family, by backtracking down a linear extension."""
    poset = presheaf.poset
    idx = poset.index
    space = 1
    for x in poset.elements:
        space *= 2 ** len(presheaf.carriers[x])
    if space > bound:
        raise BoundExceeded(f"subobject space {space} exceeds bound {bound}")
    order = list(reversed(poset.linear_extension()))  # maximal first
    out = []

    def extend(i, parts):
        if i == len(order):
            full = [parts[x] for x in poset.elements]
            out.append(Subobject(tuple(full)))
            return
        x = order[i]
        forced = set()
        for y in order[:i]:
            if poset.leq(x, y):
                forced |= {presheaf.restrict(x, y, s) for s in parts[y]}
        free = [s for s in presheaf.carriers[x] if s not in forced]
        for mask in range(2 ** len(free)):
            extra = {s for k, s in enumerate(free) if (mask >> k) & 1}
            parts[x] = frozenset(forced | extra)
            extend(i + 1, parts)
        del parts[x]

    extend(0, {})
    return out


def subobject_oracle_implies(presheaf, q, t, bound=200_000):
    """Q => T as the literal union of all V with V /\\ Q <= T."""
    acc = subobject_bottom(presheaf)
    for v in all_subobjects(presheaf, bound):
        if subobject_leq(subobject_meet(v, q), t):
            acc = subobject_join(acc, v)
    return acc
