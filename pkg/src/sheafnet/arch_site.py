"""Network architectures as classical directed graphs, fork surgery, and the
canonical finite poset site with its lower Alexandrov topology.

An architecture is a finite directed graph without oriented cycles, at most
one edge per ordered vertex pair and no self-loops.  Every vertex where two
or more layers converge is rewritten by *fork surgery*: the in-edges of a
join vertex ``a`` are rerouted through a fresh star ``a*`` and tang ``a^``
(data flow ``tips -> a* -> a^ -> a``), so that downstream machinery can put
a product of the tip values on the tang.  When an input vertex feeds a join
directly it is duplicated first: the input ``u`` keeps its identity, a tip
``u'`` is inserted (``u -> u'``) and takes over all of u's edges into joins.

The resulting poset orders elements so that data flows from maximal to
minimal: inputs and tangs are maximal, outputs and tips are minimal, and the
lower Alexandrov opens (downward closed subsets) are exactly the "already
determined" stages of a forward pass.
"""

from dataclasses import dataclass, field

from .errors import ArchitectureError, BoundExceeded, PosetError

import json
import os

ROLES = ("input", "output", "ordinary")

#: Default ceiling for whole-topology enumeration (overridable per call or
#: via the SHEAFNET_BOUND environment variable).
DEFAULT_ENUM_BOUND = 20


def enumeration_bound(bound=None):
    if bound is not None:
        return int(bound)
    env = os.environ.get("SHEAFNET_BOUND")
    return int(env) if env else DEFAULT_ENUM_BOUND


# ---------------------------------------------------------------------------
# SiteGraph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SiteGraph:
    """A classical directed graph with per-vertex role tags."""

    vertices: tuple
    edges: tuple
    roles: dict = field(compare=False)

    @staticmethod
    def build(vertices, edges, roles=None):
        vertices = tuple(vertices)
        edges = tuple((str(s), str(d)) for s, d in edges)
        seen = set()
        for v in vertices:
            if not isinstance(v, str) or not v:
                raise ArchitectureError(f"vertex id must be a non-empty string: {v!r}")
            if "*" in v or "^" in v:
                raise ArchitectureError(f"vertex id may not contain '*' or '^': {v!r}")
            if v in seen:
                raise ArchitectureError(f"duplicate vertex id: {v!r}")
            seen.add(v)
        for s, d in edges:
            if s not in seen or d not in seen:
                raise ArchitectureError(f"edge ({s!r}, {d!r}) references unknown vertex")
            if s == d:
                raise ArchitectureError(f"self-loop at {s!r} is forbidden")
        if len(set(edges)) != len(edges):
            dup = [e for e in set(edges) if edges.count(e) > 1]
            raise ArchitectureError(f"parallel edges are forbidden: {dup}")

        indeg = {v: 0 for v in vertices}
        outdeg = {v: 0 for v in vertices}
        for s, d in edges:
            outdeg[s] += 1
            indeg[d] += 1
        final = {}
        roles = dict(roles or {})
        for v in vertices:
            role = roles.get(v)
            if role is None:
                role = "input" if indeg[v] == 0 else ("output" if outdeg[v] == 0 else "ordinary")
            if role not in ROLES:
                raise ArchitectureError(f"unknown role {role!r} for vertex {v!r}")
            if role == "input" and indeg[v] > 0:
                raise ArchitectureError(f"input vertex {v!r} has in-degree {indeg[v]}")
            if role == "output" and outdeg[v] > 0:
                raise ArchitectureError(f"output vertex {v!r} has out-degree {outdeg[v]}")
            final[v] = role
        return SiteGraph(vertices, edges, final)

    def successors(self, v):
        return tuple(d for s, d in self.edges if s == v)

    def predecessors(self, v):
        return tuple(s for s, d in self.edges if d == v)

    def in_degree(self, v):
        return sum(1 for _, d in self.edges if d == v)

    def out_degree(self, v):
        return sum(1 for s, _ in self.edges if s == v)

    def inputs(self):
        return tuple(v for v in self.vertices if self.roles[v] == "input")

    def outputs(self):
        return tuple(v for v in self.vertices if self.roles[v] == "output")


def parse_architecture(document):
    """Parse an architecture description into a validated :class:`SiteGraph`.

    ``document`` may be a JSON string or an already-decoded dict with keys
    ``nodes`` (list of ids or of ``{"id":..., "role":...}`` objects) and
    ``edges`` (list of ``[src, dst]`` pairs).  Role tags are inferred from
    vertex degrees when absent.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ArchitectureError(f"malformed JSON document: {exc}") from exc
    if not isinstance(document, dict):
        raise ArchitectureError("architecture document must be a JSON object")
    if "nodes" not in document or "edges" not in document:
        raise ArchitectureError("architecture document needs 'nodes' and 'edges'")
    vertices, roles = [], {}
    for node in document["nodes"]:
        if isinstance(node, dict):
            if "id" not in node:
                raise ArchitectureError(f"node object without 'id': {node!r}")
            vertices.append(str(node["id"]))
            if node.get("role") is not None:
                roles[str(node["id"])] = node["role"]
        else:
            vertices.append(str(node))
    edges = []
    for e in document["edges"]:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise ArchitectureError(f"edge must be a [src, dst] pair: {e!r}")
        edges.append((str(e[0]), str(e[1])))
    return SiteGraph.build(vertices, edges, roles)


def load_architecture(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_architecture(fh.read())


# ---------------------------------------------------------------------------
# Classical-directedness check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalReport:
    ok: bool
    cycles: tuple = ()
    parallel_edges: tuple = ()
    self_loops: tuple = ()

    def as_dict(self):
        return {
            "ok": self.ok,
            "cycles": [list(c) for c in self.cycles],
            "parallel_edges": [list(e) for e in self.parallel_edges],
            "self_loops": list(self.self_loops),
        }


def check_classical_directed(vertices, edges=None):
    """Report whether a digraph is classical and directed.

    Accepts a :class:`SiteGraph` or raw ``(vertices, edges)``.  Violations
    (oriented cycles, parallel edges, self-loops) are returned, not raised.
    """
    if edges is None:
        g = vertices
        vertices, edges = g.vertices, g.edges
    edges = tuple(edges)
    self_loops = tuple(s for s, d in edges if s == d)
    seen, parallel = set(), []
    for e in edges:
        if e in seen:
            parallel.append(e)
        seen.add(e)
    cycle = _find_cycle(vertices, edges)
    cycles = (tuple(cycle),) if cycle else ()
    ok = not (self_loops or parallel or cycles)
    return ClassicalReport(ok, cycles, tuple(parallel), self_loops)


def _find_cycle(vertices, edges):
    succ = {v: [] for v in vertices}
    for s, d in edges:
        if s != d:
            succ[s].append(d)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in vertices}
    stack_path = []

    def dfs(v):
        color[v] = GREY
        stack_path.append(v)
        for w in succ[v]:
            if color[w] == GREY:
                return stack_path[stack_path.index(w):] + [w]
            if color[w] == WHITE:
                found = dfs(w)
                if found:
                    return found
        stack_path.pop()
        color[v] = BLACK
        return None

    for v in vertices:
        if color[v] == WHITE:
            found = dfs(v)
            if found:
                return found
    return None


# ---------------------------------------------------------------------------
# Fork surgery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fork:
    star: str
    tang: str
    handle: str
    tips: tuple


@dataclass(frozen=True)
class ForkGraph:
    """A surgered graph: data-flow arrows plus the star/tang bookkeeping.

    Arrows are stored in data-flow orientation (``tips -> star -> tang ->
    handle``); the site orientation reverses ordinary and tang->handle
    arrows and keeps the tine and socket arrows.
    """

    vertices: tuple
    arrows: tuple
    kind: dict = field(compare=False)   # vertex -> "star"|"tang"|"plain"
    forks: tuple = ()                   # one Fork per tang, in creation order
    origin: SiteGraph = None

    def successors(self, v):
        return tuple(d for s, d in self.arrows if s == v)

    def predecessors(self, v):
        return tuple(s for s, d in self.arrows if d == v)

    def stars(self):
        return tuple(v for v in self.vertices if self.kind[v] == "star")

    def tangs(self):
        return tuple(v for v in self.vertices if self.kind[v] == "tang")

    def tips_of(self, tang):
        for f in self.forks:
            if f.tang == tang:
                return f.tips
        raise ArchitectureError(f"{tang!r} is not a tang")

    def role_sets(self):
        """Full role set per vertex: subset of
        {input, output, tip, tang, star, handle, ordinary}."""
        indeg = {v: 0 for v in self.vertices}
        outdeg = {v: 0 for v in self.vertices}
        for s, d in self.arrows:
            outdeg[s] += 1
            indeg[d] += 1
        tangs = set(self.tangs())
        stars = set(self.stars())
        feeds_star = {s for s, d in self.arrows if d in stars}
        from_tang = {d for s, d in self.arrows if s in tangs}
        out = {}
        for v in self.vertices:
            roles = set()
            if v in stars:
                roles.add("star")
            elif v in tangs:
                roles.add("tang")
            else:
                if indeg[v] == 0:
                    roles.add("input")
                if outdeg[v] == 0:
                    roles.add("output")
                if v in feeds_star:
                    roles.add("tip")
                if v in from_tang:
                    roles.add("handle")
                if not roles:
                    roles.add("ordinary")
            out[v] = frozenset(roles)
        return out


def _fresh(name, taken):
    while name in taken:
        name += "'"
    return name


def fork_surgery(g):
    """Insert a fork at every vertex with two or more in-edges.

    Accepts a :class:`SiteGraph` (or a :class:`ForkGraph`, in which case
    only joins not already coded as star/tang are forked, so the operation
    is idempotent in effect).  Input vertices feeding a join are duplicated
    first, keeping the original id with a primed suffix for the tip.
    """
    if isinstance(g, ForkGraph):
        vertices = list(g.vertices)
        edges = list(g.arrows)
        kind = dict(g.kind)
        forks = list(g.forks)
        origin = g.origin
    else:
        report = check_classical_directed(g)
        if not report.ok:
            raise ArchitectureError(f"graph is not classical directed: {report.as_dict()}")
        vertices = list(g.vertices)
        edges = list(g.edges)
        kind = {v: "plain" for v in vertices}
        forks = []
        origin = g

    def indeg(v):
        return sum(1 for _, d in edges if d == v)

    joins = [v for v in vertices if kind[v] == "plain" and indeg(v) >= 2]

    # Duplicate inputs that feed a join directly (one tip per input).
    if origin is not None:
        input_roles = {v for v in origin.vertices if origin.roles.get(v) == "input"}
    else:
        input_roles = set()
    join_set = set(joins)
    for u in list(vertices):
        if u not in input_roles or kind[u] != "plain":
            continue
        fed_joins = [(s, d) for s, d in edges if s == u and d in join_set]
        if not fed_joins:
            continue
        tip = _fresh(u + "'", set(vertices))
        vertices.append(tip)
        kind[tip] = "plain"
        edges = [e for e in edges if e not in fed_joins]
        edges.append((u, tip))
        edges.extend((tip, d) for _, d in fed_joins)

    for a in joins:
        star = _fresh(a + "*", set(vertices))
        vertices.append(star)
        kind[star] = "star"
        tang = _fresh(a + "^", set(vertices))
        vertices.append(tang)
        kind[tang] = "tang"
        incoming = [(s, d) for s, d in edges if d == a]
        tips = tuple(s for s, _ in incoming)
        edges = [e for e in edges if e not in incoming]
        edges.extend((s, star) for s in tips)
        edges.append((star, tang))
        edges.append((tang, a))
        forks.append(Fork(star, tang, a, tips))

    fg = ForkGraph(tuple(vertices), tuple(edges), kind, tuple(forks), origin)
    _validate_fork_graph(fg)
    return fg


def _validate_fork_graph(fg):
    for f in fg.forks:
        if fg.successors(f.star) != (f.tang,):
            raise ArchitectureError(f"star {f.star!r} must point only to its tang")
        preds = set(fg.predecessors(f.tang))
        if preds != {f.star}:
            raise ArchitectureError(f"tang {f.tang!r} must receive only from its star")
        if fg.successors(f.tang) != (f.handle,):
            raise ArchitectureError(f"tang {f.tang!r} must feed exactly its handle")


# ---------------------------------------------------------------------------
# FinitePoset
# ---------------------------------------------------------------------------

class FinitePoset:
    """A finite poset with O(1) order queries via cached down-set bit masks."""

    def __init__(self, elements, relations, fork_graph=None):
        """``relations`` is an iterable of pairs (x, y) meaning x <= y; the
        reflexive-transitive closure is taken and antisymmetry verified."""
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise PosetError("duplicate elements")
        n = len(self.elements)
        up = [0] * n          # up[i] bit j set <=> elements[i] <= elements[j]
        for x, y in relations:
            if x not in self.index or y not in self.index:
                raise PosetError(f"relation ({x!r}, {y!r}) references unknown element")
            up[self.index[x]] |= 1 << self.index[y]
        for i in range(n):
            up[i] |= 1 << i
        # transitive closure (iterate to fixpoint; n is desk-scale)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = up[i]
                m = acc
                while m:
                    j = (m & -m).bit_length() - 1
                    m &= m - 1
                    acc |= up[j]
                if acc != up[i]:
                    up[i] = acc
                    changed = True
        for i in range(n):
            for j in range(i + 1, n):
                if (up[i] >> j) & 1 and (up[j] >> i) & 1:
                    raise PosetError(
                        "antisymmetry violation: "
                        f"{self.elements[i]!r} <= {self.elements[j]!r} <= {self.elements[i]!r}"
                    )
        self._up = up
        self._down = [0] * n
        for i in range(n):
            m = up[i]
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                self._down[j] |= 1 << i
        self.fork_graph = fork_graph

    # -- order queries ------------------------------------------------------

    def leq(self, x, y):
        return (self._up[self.index[x]] >> self.index[y]) & 1 == 1

    def down_mask(self, x):
        return self._down[self.index[x]]

    def mask_of(self, subset):
        m = 0
        for x in subset:
            m |= 1 << self.index[x]
        return m

    def set_of(self, mask):
        return frozenset(self.elements[i] for i in range(len(self.elements)) if (mask >> i) & 1)

    def down_set(self, x):
        """U_x = {y : y <= x}, the basis open at x."""
        return self.set_of(self.down_mask(x))

    def minimal(self):
        return tuple(x for i, x in enumerate(self.elements) if self._down[i] == (1 << i))

    def maximal(self):
        return tuple(x for i, x in enumerate(self.elements) if self._up[i] == (1 << i))

    def covering(self):
        """Transitive reduction as a tuple of (lower, upper) pairs."""
        out = []
        n = len(self.elements)
        for i in range(n):
            ups = self._up[i] & ~(1 << i)
            m = ups
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                between = self._up[i] & self._down[j] & ~(1 << i) & ~(1 << j)
                if between == 0:
                    out.append((self.elements[i], self.elements[j]))
        return tuple(out)

    def lower_covers(self, y):
        j = self.index[y]
        out = []
        for i in range(len(self.elements)):
            if i != j and (self._up[i] >> j) & 1:
                between = self._up[i] & self._down[j] & ~(1 << i) & ~(1 << j)
                if between == 0:
                    out.append(self.elements[i])
        return tuple(out)

    def linear_extension(self):
        """Elements ordered so that smaller elements come first."""
        return tuple(sorted(self.elements, key=lambda x: (bin(self.down_mask(x)).count("1"), x)))

    def as_dict(self):
        leq = [[x, y] for x in self.elements for y in self.elements if x != y and self.leq(x, y)]
        return {"elements": list(self.elements), "leq": sorted(leq)}

    @staticmethod
    def from_dict(doc):
        return FinitePoset(doc["elements"], [tuple(p) for p in doc.get("leq", [])])

    @staticmethod
    def chain(n):
        """The total order 0 <= 1 <= ... <= n."""
        return FinitePoset(range(n + 1), [(i, i + 1) for i in range(n)])


def site_relations(fg):
    """Site-orientation relations x <= y on the non-star vertices.

    Tine and socket arrows keep the data-flow direction; ordinary and
    tang->handle arrows reverse, so outputs and tips end up minimal.
    """
    stars = set(fg.stars())
    tangs = set(fg.tangs())
    star_to_tang = {f.star: f.tang for f in fg.forks}
    rel = []
    for s, d in fg.arrows:
        if d in stars:
            rel.append((s, star_to_tang[d]))      # tip <= tang (through the star)
        elif s in stars:
            pass                                   # star -> tang handled above
        elif s in tangs:
            rel.append((d, s))                     # handle <= tang
        else:
            rel.append((d, s))                     # receiver <= sender
    return rel


def build_poset(fg):
    """The canonical poset on the non-star vertices of a fork graph."""
    elements = [v for v in fg.vertices if fg.kind[v] != "star"]
    try:
        return FinitePoset(elements, site_relations(fg), fork_graph=fg)
    except PosetError as exc:
        raise PosetError(f"hidden oriented cycle in the architecture: {exc}") from exc


# ---------------------------------------------------------------------------
# Vertex classification
# ---------------------------------------------------------------------------

_PRIMARY_ORDER = ("tang", "input", "output", "handle", "tip", "ordinary")


@dataclass(frozen=True)
class Classification:
    primary: dict
    roles: dict
    minimal_ok: bool
    maximal_ok: bool
    forest_ok: bool

    @property
    def ok(self):
        return self.minimal_ok and self.maximal_ok and self.forest_ok

    def as_dict(self):
        return {
            "tags": dict(sorted(self.primary.items())),
            "roles": {k: sorted(v) for k, v in sorted(self.roles.items())},
            "minimal_ok": self.minimal_ok,
            "maximal_ok": self.maximal_ok,
            "forest_ok": self.forest_ok,
        }


def classify_vertices(poset):
    """Tag every poset element and check the structural theorem:

    minimal elements are outputs or tips, maximal ones inputs or tangs, and
    deleting tangs (and stars) from the surgered graph leaves a forest.
    """
    fg = poset.fork_graph
    if fg is None:
        raise PosetError("classification needs a poset built from a fork graph")
    role_sets = fg.role_sets()
    primary = {}
    for v in poset.elements:
        roles = role_sets[v]
        for tag in _PRIMARY_ORDER:
            if tag in roles:
                primary[v] = tag
                break
    minimal_ok = all(role_sets[v] & {"output", "tip"} for v in poset.minimal())
    maximal_ok = all(role_sets[v] & {"input", "tang"} for v in poset.maximal())
    removed = set(fg.stars()) | set(fg.tangs())
    kept = [v for v in fg.vertices if v not in removed]
    kept_edges = [(s, d) for s, d in fg.arrows if s not in removed and d not in removed]
    forest_ok = _is_forest(kept, kept_edges)
    if not (minimal_ok and maximal_ok):
        raise PosetError("classification contradiction: extremal element with wrong role")
    return Classification(primary, role_sets, minimal_ok, maximal_ok, forest_ok)


def _is_forest(vertices, edges):
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for s, d in edges:
        rs, rd = find(s), find(d)
        if rs == rd:
            return False
        parent[rs] = rd
    return True


# ---------------------------------------------------------------------------
# Alexandrov opens
# ---------------------------------------------------------------------------

def open_masks(poset, bound=None):
    """All downward-closed subsets as bit masks, smallest mask first."""
    n = len(poset.elements)
    if n > enumeration_bound(bound):
        raise BoundExceeded(f"{n} elements exceeds enumeration bound {enumeration_bound(bound)}")
    order = sorted(range(n), key=lambda i: bin(poset._down[i]).count("1"))
    opens = [0]
    for i in order:
        need = poset._down[i] & ~(1 << i)
        opens += [m | (1 << i) for m in opens if m & need == need]
    return sorted(opens)


def lower_open_sets(poset, bound=None):
    """The lower Alexandrov topology: every downward-closed subset."""
    return [poset.set_of(m) for m in open_masks(poset, bound)]


def basis(poset, x):
    """U_x = {y : y <= x}; unbounded, works for any poset size."""
    return poset.down_set(x)


def is_open(poset, subset):
    m = poset.mask_of(subset)
    down = 0
    for x in subset:
        down |= poset.down_mask(x)
    return down == m


# ---------------------------------------------------------------------------
# Loop rank
# ---------------------------------------------------------------------------

def loop_rank(g):
    """First Betti number |E| - |V| + #components of the underlying
    undirected graph."""
    edges = g.arrows if isinstance(g, ForkGraph) else g.edges
    vertices = g.vertices
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    comps = len(vertices)
    for s, d in edges:
        rs, rd = find(s), find(d)
        if rs != rd:
            parent[rs] = rd
            comps -= 1
    return len(edges) - len(vertices) + comps


def site_report(g):
    """The full JSON-able analysis of one architecture."""
    fg = fork_surgery(g)
    poset = build_poset(fg)
    cls = classify_vertices(poset)
    return {
        "poset": poset.as_dict(),
        "classification": cls.as_dict(),
        "loop_rank": loop_rank(g),
        "tangs": sorted(fg.tangs()),
        "minimal": sorted(poset.minimal()),
        "maximal": sorted(poset.maximal()),
    }
