"""Weighted feed-forward dynamics, path-sum gradients, memory cells and the
cusp geometry of cubic cells.

A WeightedNetwork evaluates a DAG of vector-valued nodes; a node with
several parents consumes the tuple (concatenation) of their values, which
is the fork semantics.  The gradient of the loss with respect to a node's
weight block is the sum over all directed paths from that node to the
output of the chain-rule Jacobian product; `backprop_paths` computes it
literally and `reverse_mode` / `finite_difference` are the cross-checks.

Memory cells (LSTM, GRU, MGU2, cubic) are implemented from their update
formulas with explicit weight matrices and no biases, so the parameter
counts are the sums of the array sizes.  The cubic cell's unfolding
parameters (u, v) classify through the discriminant 4u^3 + 27v^2, whose
sign separates the one-root and three-root regimes of z^3 + u z + v.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArchitectureError, NondifferentiablePoint

SATURATION_THRESHOLD = 4.0


# ---------------------------------------------------------------------------
# Activations
# ---------------------------------------------------------------------------

def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


ACTIVATIONS = {
    "identity": (lambda z: z, lambda z: np.ones_like(z)),
    "sigmoid": (_sigmoid, lambda z: _sigmoid(z) * (1.0 - _sigmoid(z))),
    "tanh": (np.tanh, lambda z: 1.0 - np.tanh(z) ** 2),
    "relu": (lambda z: np.maximum(z, 0.0),
             lambda z: (z > 0).astype(float)),
}

_KINKED = {"relu"}


# ---------------------------------------------------------------------------
# WeightedNetwork
# ---------------------------------------------------------------------------

@dataclass
class Node:
    name: str
    op: str                      # "input" | "affine" | "hadamard" | "hadsum"
    dim: int
    parents: tuple = ()
    activation: str = "identity"
    weight: np.ndarray = None    # affine only: dim x sum(parent dims)
    bias: np.ndarray = None      # affine only, optional


class WeightedNetwork:
    def __init__(self, nodes):
        self.nodes = {n.name: n for n in nodes}
        self.order = [n.name for n in nodes]
        if len(self.nodes) != len(nodes):
            raise ArchitectureError("duplicate node names")
        seen = set()
        for n in nodes:
            for p in n.parents:
                if p not in seen:
                    raise ArchitectureError(f"node {n.name!r} used before parent {p!r}")
            seen.add(n.name)
            if n.op == "affine":
                want = sum(self.nodes[p].dim for p in n.parents)
                if n.weight.shape != (n.dim, want):
                    raise ArchitectureError(f"weight shape mismatch at {n.name!r}")
                if n.bias is not None and n.bias.shape != (n.dim,):
                    raise ArchitectureError(f"bias shape mismatch at {n.name!r}")
            elif n.op in ("hadamard", "hadsum"):
                dims = {self.nodes[p].dim for p in n.parents}
                if len(n.parents) != 2 or dims != {n.dim}:
                    raise ArchitectureError(f"{n.op} node {n.name!r} needs two parents of its dimension")
        self.inputs = [n.name for n in nodes if n.op == "input"]
        used = {p for n in nodes for p in n.parents}
        outs = [n.name for n in nodes if n.name not in used]
        if len(outs) != 1:
            raise ArchitectureError(f"expected exactly one output node, found {outs}")
        self.output = outs[0]

    # -- evaluation ----------------------------------------------------------

    def _concat(self, node, acts):
        return np.concatenate([acts[p] for p in node.parents])

    def feedforward(self, inputs):
        """Activations per node; the unique section determined by the inputs."""
        acts, pre = {}, {}
        for name in self.order:
            n = self.nodes[name]
            if n.op == "input":
                v = np.asarray(inputs[name], dtype=float)
                if v.shape != (n.dim,):
                    raise ArchitectureError(f"input {name!r} has wrong dimension")
                acts[name] = v
            elif n.op == "affine":
                z = n.weight @ self._concat(n, acts)
                if n.bias is not None:
                    z = z + n.bias
                pre[name] = z
                acts[name] = ACTIVATIONS[n.activation][0](z)
            elif n.op == "hadamard":
                a, b = (acts[p] for p in n.parents)
                acts[name] = a * b
            else:
                a, b = (acts[p] for p in n.parents)
                acts[name] = a + b
        return acts, pre

    def join_value(self, name, acts):
        """The tuple of parent activations consumed by a node."""
        return self._concat(self.nodes[name], acts)

    def _edge_jacobians(self, acts, pre):
        """J[(child, parent)] = d child / d parent at the evaluated point."""
        jac = {}
        saturated = []
        for name in self.order:
            n = self.nodes[name]
            if n.op == "input":
                continue
            if n.op == "affine":
                z = pre[name]
                if n.activation in _KINKED and np.any(np.abs(z) <= 1e-9):
                    raise NondifferentiablePoint(
                        f"kink of {n.activation} at node {name!r}")
                if n.activation in ("sigmoid", "tanh") and \
                        np.any(np.abs(z) > SATURATION_THRESHOLD):
                    saturated.append(name)
                d = ACTIVATIONS[n.activation][1](z)
                offset = 0
                for p in n.parents:
                    w = n.weight[:, offset:offset + self.nodes[p].dim]
                    jac[(name, p)] = d[:, None] * w
                    offset += self.nodes[p].dim
            elif n.op == "hadamard":
                a, b = n.parents
                jac[(name, a)] = np.diag(acts[b])
                jac[(name, b)] = np.diag(acts[a])
            else:
                for p in n.parents:
                    jac[(name, p)] = np.eye(n.dim)
        return jac, saturated

    def _paths_to_output(self, start):
        """All directed paths from ``start`` to the output node."""
        children = {name: [] for name in self.order}
        for name in self.order:
            for p in self.nodes[name].parents:
                children[p].append(name)
        paths = []

        def walk(node, path):
            if node == self.output:
                paths.append(tuple(path))
                return
            for c in children[node]:
                walk(c, path + [c])

        walk(start, [start])
        return paths

    def backprop_paths(self, inputs, loss):
        """Gradients per affine weight block via the literal path sum."""
        acts, pre = self.feedforward(inputs)
        jac, saturated = self._edge_jacobians(acts, pre)
        dF = loss.grad(acts[self.output])
        grads = {}
        path_counts = {}
        for name in self.order:
            n = self.nodes[name]
            if n.op != "affine":
                continue
            paths = self._paths_to_output(name)
            path_counts[name] = len(paths)
            total = np.zeros((self.nodes[self.output].dim, n.dim))
            for path in paths:
                m = np.eye(n.dim)
                for a, b in zip(path, path[1:]):
                    m = jac[(b, a)] @ m
                total += m
            g = (total.T @ dF) * ACTIVATIONS[n.activation][1](pre[name])
            inp = self._concat(n, acts)
            gw = np.outer(g, inp)
            gb = g if n.bias is not None else None
            grads[name] = (gw, gb)
        return BackpropResult(grads, tuple(saturated), path_counts,
                              float(loss.value(acts[self.output])))

    def reverse_mode(self, inputs, loss):
        """Standard adjoint accumulation; must agree with the path sum."""
        acts, pre = self.feedforward(inputs)
        jac, _ = self._edge_jacobians(acts, pre)
        adj = {name: np.zeros(self.nodes[name].dim) for name in self.order}
        adj[self.output] = loss.grad(acts[self.output])
        for name in reversed(self.order):
            n = self.nodes[name]
            for p in n.parents:
                adj[p] = adj[p] + jac[(name, p)].T @ adj[name]
        grads = {}
        for name in self.order:
            n = self.nodes[name]
            if n.op != "affine":
                continue
            g = adj[name] * ACTIVATIONS[n.activation][1](pre[name])
            grads[name] = (np.outer(g, self._concat(n, acts)),
                           g if n.bias is not None else None)
        return grads

    def finite_difference(self, inputs, loss, h=1e-5):
        """Central differences on every affine weight entry."""
        grads = {}
        for name in self.order:
            n = self.nodes[name]
            if n.op != "affine":
                continue
            gw = np.zeros_like(n.weight)
            for idx in np.ndindex(*n.weight.shape):
                keep = n.weight[idx]
                n.weight[idx] = keep + h
                up = loss.value(self.feedforward(inputs)[0][self.output])
                n.weight[idx] = keep - h
                down = loss.value(self.feedforward(inputs)[0][self.output])
                n.weight[idx] = keep
                gw[idx] = (up - down) / (2 * h)
            gb = None
            if n.bias is not None:
                gb = np.zeros_like(n.bias)
                for i in range(n.bias.shape[0]):
                    keep = n.bias[i]
                    n.bias[i] = keep + h
                    up = loss.value(self.feedforward(inputs)[0][self.output])
                    n.bias[i] = keep - h
                    down = loss.value(self.feedforward(inputs)[0][self.output])
                    n.bias[i] = keep
                    gb[i] = (up - down) / (2 * h)
            grads[name] = (gw, gb)
        return grads


@dataclass(frozen=True)
class BackpropResult:
    grads: dict
    saturated: tuple
    path_counts: dict = field(compare=False)
    loss: float = 0.0


class SumLoss:
    """F(y) = sum of the output coordinates."""

    def value(self, y):
        return float(np.sum(y))

    def grad(self, y):
        return np.ones_like(y)


class QuadraticLoss:
    """F(y) = 0.5 |y - target|^2."""

    def __init__(self, target):
        self.target = np.asarray(target, dtype=float)

    def value(self, y):
        return float(0.5 * np.sum((y - self.target) ** 2))

    def grad(self, y):
        return y - self.target


def gradient_agreement(net, inputs, loss, h=1e-5):
    """Max relative error of the path sum against reverse mode and against
    central finite differences."""
    paths = net.backprop_paths(inputs, loss)
    reverse = net.reverse_mode(inputs, loss)
    fd = net.finite_difference(inputs, loss, h)
    vs_reverse = 0.0
    vs_fd = 0.0
    for name, (gw, gb) in paths.grads.items():
        for mine, other in ((gw, reverse[name][0]), (gb, reverse[name][1])):
            if mine is None:
                continue
            scale = max(1.0, float(np.max(np.abs(mine))))
            vs_reverse = max(vs_reverse, float(np.max(np.abs(mine - other))) / scale)
        for mine, other in ((gw, fd[name][0]), (gb, fd[name][1])):
            if mine is None:
                continue
            scale = max(1.0, float(np.max(np.abs(mine))))
            vs_fd = max(vs_fd, float(np.max(np.abs(mine - other))) / scale)
    return vs_reverse, vs_fd, paths


def random_fork_network(rng, max_layers=6, max_units=4, activations=("tanh", "sigmoid")):
    """A random layered DAG with joins, smooth activations, scalar output."""
    n_layers = rng.randint(2, max_layers)
    nodes = [Node("in0", "input", rng.randint(1, max_units))]
    previous = ["in0"]
    if rng.random() < 0.5:
        nodes.append(Node("in1", "input", rng.randint(1, max_units)))
        previous.append("in1")
    used = set()
    for layer in range(n_layers):
        width = rng.randint(1, 2)
        current = []
        for k in range(width):
            n_par = rng.randint(1, min(2, len(previous)))
            parents = tuple(rng.sample(previous, n_par))
            used.update(parents)
            dim = rng.randint(1, max_units)
            total = sum(n.dim for n in nodes if n.name in parents)
            name = f"h{layer}_{k}"
            nodes.append(Node(name, "affine", dim, parents,
                              rng.choice(list(activations)),
                              weight=np.array([[rng.uniform(-1.5, 1.5)
                                                for _ in range(total)]
                                               for _ in range(dim)])))
            current.append(name)
        previous = current
    # the readout consumes every dangling node so the output is unique
    dangling = tuple(n.name for n in nodes if n.name not in used)
    total = sum(n.dim for n in nodes if n.name in dangling)
    nodes.append(Node("out", "affine", 1, dangling, "identity",
                      weight=np.array([[rng.uniform(-1.5, 1.5)
                                        for _ in range(total)]])))
    return WeightedNetwork(nodes)


# ---------------------------------------------------------------------------
# Memory cells
# ---------------------------------------------------------------------------

def _mat(rng, rows, cols, scale=0.5):
    return np.array([[rng.uniform(-scale, scale) for _ in range(cols)]
                     for _ in range(rows)])


@dataclass
class LSTMParams:
    """Gates i, f, o and the combine gate, each with an input and a
    recurrent matrix; multiplicity m is shared by h, c and every gate."""

    m: int
    n: int
    W_i: np.ndarray
    U_i: np.ndarray
    W_f: np.ndarray
    U_f: np.ndarray
    W_o: np.ndarray
    U_o: np.ndarray
    W_h: np.ndarray
    U_h: np.ndarray

    @staticmethod
    def init(m, n, rng=None, zero=False):
        make = (lambda r, c: np.zeros((r, c))) if zero else \
            (lambda r, c: _mat(rng, r, c))
        return LSTMParams(m, n, *(make(m, d) for d in (n, m, n, m, n, m, n, m)))

    @property
    def n_parameters(self):
        return sum(w.size for w in (self.W_i, self.U_i, self.W_f, self.U_f,
                                    self.W_o, self.U_o, self.W_h, self.U_h))


def lstm_param_count(m, n):
    return 4 * m * m + 4 * m * n


def lstm_step(p, x, h_prev, c_prev):
    """c = c_prev . sigma_f + sigma_i . tanh_h ; h = sigma_o . tanh(c)."""
    x, h_prev, c_prev = (np.asarray(v, dtype=float) for v in (x, h_prev, c_prev))
    if x.shape != (p.n,) or h_prev.shape != (p.m,) or c_prev.shape != (p.m,):
        raise ArchitectureError("lstm_step dimension mismatch")
    s_i = _sigmoid(p.W_i @ x + p.U_i @ h_prev)
    s_f = _sigmoid(p.W_f @ x + p.U_f @ h_prev)
    s_o = _sigmoid(p.W_o @ x + p.U_o @ h_prev)
    t_h = np.tanh(p.W_h @ x + p.U_h @ h_prev)
    c = c_prev * s_f + s_i * t_h
    h = s_o * np.tanh(c)
    return h, c


@dataclass
class GRUParams:
    m: int
    n: int
    W_z: np.ndarray
    U_z: np.ndarray
    W_r: np.ndarray
    U_r: np.ndarray
    W_x: np.ndarray
    U_x: np.ndarray

    @staticmethod
    def init(m, n, rng=None, zero=False):
        make = (lambda r, c: np.zeros((r, c))) if zero else \
            (lambda r, c: _mat(rng, r, c))
        return GRUParams(m, n, *(make(m, d) for d in (n, m, n, m, n, m)))

    @property
    def n_parameters(self):
        return sum(w.size for w in (self.W_z, self.U_z, self.W_r, self.U_r,
                                    self.W_x, self.U_x))


def gru_param_count(m, n):
    return 3 * m * m + 3 * m * n


def gru_step(p, x, h_prev):
    """h = (1 - sigma_z) . h_prev + sigma_z . tanh(W x + U (sigma_r . h_prev))."""
    x, h_prev = np.asarray(x, dtype=float), np.asarray(h_prev, dtype=float)
    if x.shape != (p.n,) or h_prev.shape != (p.m,):
        raise ArchitectureError("gru_step dimension mismatch")
    s_z = _sigmoid(p.W_z @ x + p.U_z @ h_prev)
    s_r = _sigmoid(p.W_r @ x + p.U_r @ h_prev)
    cand = np.tanh(p.W_x @ x + p.U_x @ (s_r * h_prev))
    return (1.0 - s_z) * h_prev + s_z * cand


@dataclass
class MGU2Params:
    """Single gate, recurrent-only and bias-free."""

    m: int
    n: int
    U_z: np.ndarray
    W_x: np.ndarray
    U_x: np.ndarray

    @staticmethod
    def init(m, n, rng=None, zero=False):
        make = (lambda r, c: np.zeros((r, c))) if zero else \
            (lambda r, c: _mat(rng, r, c))
        return MGU2Params(m, n, make(m, m), make(m, n), make(m, m))

    @property
    def n_parameters(self):
        return self.U_z.size + self.W_x.size + self.U_x.size


def mgu2_param_count(m, n):
    return 2 * m * m + m * n


def mgu2_step(p, x, h_prev):
    x, h_prev = np.asarray(x, dtype=float), np.asarray(h_prev, dtype=float)
    if x.shape != (p.n,) or h_prev.shape != (p.m,):
        raise ArchitectureError("mgu2_step dimension mismatch")
    s_z = _sigmoid(p.U_z @ h_prev)
    cand = np.tanh(p.W_x @ x + p.U_x @ (s_z * h_prev))
    return (1.0 - s_z) * h_prev + s_z * cand


@dataclass
class CubicCellParams:
    """h^a = sigma_alpha(h)^3 + u(x) sigma_alpha(h) + v(x), componentwise."""

    m: int
    n: int
    alpha: np.ndarray
    U: np.ndarray
    V: np.ndarray
    activation: str = "sigmoid"

    @staticmethod
    def init(m, n, rng=None, zero=False, activation="sigmoid"):
        make = (lambda r, c: np.zeros((r, c))) if zero else \
            (lambda r, c: _mat(rng, r, c))
        return CubicCellParams(m, n, make(m, m), make(m, n), make(m, n), activation)

    @property
    def n_parameters(self):
        return self.alpha.size + self.U.size + self.V.size


def cubic_param_count(m, n):
    return m * m + 2 * m * n


def cubic_cell_step(p, x, h_prev):
    x, h_prev = np.asarray(x, dtype=float), np.asarray(h_prev, dtype=float)
    if x.shape != (p.n,) or h_prev.shape != (p.m,):
        raise ArchitectureError("cubic_cell_step dimension mismatch")
    s = ACTIVATIONS[p.activation][0](p.alpha @ h_prev)
    u = np.tanh(p.U @ x)
    v = np.tanh(p.V @ x)
    return s ** 3 + u * s + v


PARAM_COUNTS = {
    "lstm": lstm_param_count,
    "gru": gru_param_count,
    "mgu2": mgu2_param_count,
    "cubic": cubic_param_count,
}

CELLS = {
    "lstm": LSTMParams,
    "gru": GRUParams,
    "mgu2": MGU2Params,
    "cubic": CubicCellParams,
}


# ---------------------------------------------------------------------------
# Cusp geometry
# ---------------------------------------------------------------------------

def discriminant(u, v):
    """Sign classification of 4u^3 + 27v^2 for z^3 + uz + v."""
    delta = 4.0 * u ** 3 + 27.0 * v ** 2
    if delta < 0:
        kind = "three_real_roots"
    elif delta > 0:
        kind = "one_real_root"
    else:
        kind = "boundary"
    return kind, delta


def cubic_roots(u, v, polish=True):
    """Real roots of z^3 + u z + v, with multiplicity, ascending."""
    delta = 4.0 * u ** 3 + 27.0 * v ** 2
    if u == 0.0 and v == 0.0:
        return [0.0, 0.0, 0.0]
    if delta == 0.0:
        double = -3.0 * v / (2.0 * u)
        simple = -2.0 * double
        return sorted([double, double, simple])
    if delta < 0.0:
        # three real roots: trigonometric branch of the Cardan formulas
        r = 2.0 * math.sqrt(-u / 3.0)
        theta = math.acos(max(-1.0, min(1.0, 3.0 * v / (u * r))))
        roots = [r * math.cos(theta / 3.0 - 2.0 * math.pi * k / 3.0)
                 for k in range(3)]
    else:
        s = math.sqrt(delta / 108.0)
        roots = [math.copysign(abs(-v / 2.0 + s) ** (1 / 3), -v / 2.0 + s)
                 + math.copysign(abs(-v / 2.0 - s) ** (1 / 3), -v / 2.0 - s)]
    if polish:
        roots = [_newton_polish(z, u, v) for z in roots]
    return sorted(roots)


def _newton_polish(z, u, v, steps=3):
    for _ in range(steps):
        f = z ** 3 + u * z + v
        df = 3.0 * z ** 2 + u
        if df == 0.0:
            break
        z = z - f / df
    return z


def cubic_residual(z, u, v):
    return abs(z ** 3 + u * z + v)


def cusp_scan(grid=100, extent=2.0):
    """CSV-ready rows (u, v, delta, root_count) over a square grid."""
    rows = []
    for i in range(grid):
        for j in range(grid):
            u = -extent + 2 * extent * i / (grid - 1)
            v = -extent + 2 * extent * j / (grid - 1)
            kind, delta = discriminant(u, v)
            rows.append((u, v, delta, len(cubic_roots(u, v))))
    return rows


# ---------------------------------------------------------------------------
# Braid representation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BraidRep:
    """Two integer 2x2 matrices of determinant one."""

    s1: tuple
    s2: tuple

    @staticmethod
    def of(s1, s2):
        s1 = tuple(tuple(int(x) for x in row) for row in s1)
        s2 = tuple(tuple(int(x) for x in row) for row in s2)
        for m in (s1, s2):
            if _det2(m) != 1:
                raise ArchitectureError("braid matrices must have determinant one")
        return BraidRep(s1, s2)


def default_braid_rep():
    return BraidRep.of(((1, 1), (0, 1)), ((1, 0), (-1, 1)))


def _mul2(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
        for i in range(2))


def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


_ID2 = ((1, 0), (0, 1))
_NEG_ID2 = ((-1, 0), (0, -1))


@dataclass(frozen=True)
class BraidReport:
    relation_holds: bool
    lhs: tuple
    rhs: tuple
    center_cube: tuple
    center_kind: str            # "minus_identity" | "identity" | "other"

    @property
    def ok(self):
        return self.relation_holds

    def as_dict(self):
        return {
            "relation_holds": self.relation_holds,
            "s1s2s1": [list(r) for r in self.lhs],
            "s2s1s2": [list(r) for r in self.rhs],
            "center_cube": [list(r) for r in self.center_cube],
            "center_kind": self.center_kind,
        }


def braid_relation_check(rep):
    """Verify s1 s2 s1 = s2 s1 s2 and classify (s1 s2)^3."""
    lhs = _mul2(_mul2(rep.s1, rep.s2), rep.s1)
    rhs = _mul2(_mul2(rep.s2, rep.s1), rep.s2)
    prod = _mul2(rep.s1, rep.s2)
    cube = _mul2(_mul2(prod, prod), prod)
    kind = "minus_identity" if cube == _NEG_ID2 else \
        ("identity" if cube == _ID2 else "other")
    return BraidReport(lhs == rhs, lhs, rhs, cube, kind)
