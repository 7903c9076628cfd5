"""Unitrivalent diagrams and their relation calculus.

A diagram is a graph whose vertices are trivalent (with a cyclic order on
the three incident half-edges) or univalent, plus an optional oriented
skeleton circle through all univalent vertices.  Diagrams without skeleton
live in the character space (IHX/AS relations); diagrams with skeleton live
in the circle space (STU relations).  The degree is half the vertex count.

Half-edge ("dart") layout: trivalent vertex v owns darts 3v, 3v+1, 3v+2 and
its cyclic order is 3v -> 3v+1 -> 3v+2 -> 3v; univalent vertex u (labelled
nt + j) owns the single dart 3*nt + j.  ``pairing`` is the edge involution
on darts.  ``skel`` is None or the tuple of univalent vertex labels in
circle order (a cyclic sequence; rotations are isomorphic).

Canonical forms: the minimal rooted-traversal encoding over all choices of
root dart and per-vertex orientation (reversing a cyclic order flips the
sign, so canonicalize returns a sign along with the representative).  A
diagram admitting an odd-parity self-encoding equals minus itself and is
zero in the quotient; LinComb drops such terms on insertion.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


class DiagramError(ValueError):
    pass


class Diagram:
    __slots__ = ("nt", "nu", "pairing", "skel", "_canon")

    def __init__(self, nt, nu, pairing, skel=None, check=True):
        self.nt = nt
        self.nu = nu
        self.pairing = tuple(pairing)
        self.skel = None if skel is None else tuple(skel)
        self._canon = None
        if check:
            self._validate()

    # -- structure ---------------------------------------------------------

    @property
    def n_darts(self):
        return 3 * self.nt + self.nu

    @property
    def n_vertices(self):
        return self.nt + self.nu

    @property
    def degree(self):
        return Fraction(self.n_vertices, 2)

    @property
    def legs(self):
        return self.nu

    def dart_vertex(self, d):
        return d // 3 if d < 3 * self.nt else self.nt + (d - 3 * self.nt)

    def vertex_darts(self, v):
        if v < self.nt:
            return (3 * v, 3 * v + 1, 3 * v + 2)
        return (3 * self.nt + (v - self.nt),)

    def sigma(self, d):
        """Next dart in the cyclic order at d's vertex (identity at legs)."""
        if d >= 3 * self.nt:
            return d
        base = 3 * (d // 3)
        return base + (d - base + 1) % 3

    def skel_next(self):
        """Map univalent vertex -> successor around the skeleton."""
        if self.skel is None:
            return {}
        n = len(self.skel)
        return {self.skel[i]: self.skel[(i + 1) % n] for i in range(n)}

    def is_chord_diagram(self):
        return self.skel is not None and self.nt == 0

    def _validate(self):
        nd = self.n_darts
        if len(self.pairing) != nd:
            raise DiagramError("pairing length mismatch")
        for d in range(nd):
            p = self.pairing[d]
            if not (0 <= p < nd) or self.pairing[p] != d or p == d:
                raise DiagramError(f"pairing is not a fixed-point-free involution at dart {d}")
        if self.skel is not None:
            univ = set(range(self.nt, self.nt + self.nu))
            if sorted(self.skel) != sorted(univ):
                raise DiagramError("skeleton must list every univalent vertex exactly once")
        if self.n_vertices % 2 != 0:
            raise DiagramError("vertex count must be even")
        if self.n_vertices and not self._connected():
            raise DiagramError("diagram must be connected (through the skeleton if present)")

    def _connected(self):
        skn = self.skel_next()
        seen = {0}
        stack = [0]
        while stack:
            d = stack.pop()
            for nxt in (self.pairing[d], self.sigma(d)):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
            v = self.dart_vertex(d)
            if v in skn:
                nd = self.vertex_darts(skn[v])[0]
                if nd not in seen:
                    seen.add(nd)
                    stack.append(nd)
        return len(seen) == self.n_darts

    # -- canonicalization -----------------------------------------------------

    def canonical(self):
        """(canonical diagram, sign, zero_by_symmetry) -- cached."""
        if self._canon is None:
            self._canon = _canonicalize(self)
        return self._canon

    def canonical_key(self):
        return self.canonical()[0]._encoding()

    def _encoding(self):
        return (self.nt, self.nu, self.pairing, self.skel)

    def __eq__(self, other):
        return isinstance(other, Diagram) and self._encoding() == other._encoding()

    def __hash__(self):
        return hash(self._encoding())

    # -- serialization -----------------------------------------------------------

    def to_text(self):
        lines = [f"vertices {self.nt} {self.nu}"]
        seen = set()
        for d in range(self.n_darts):
            p = self.pairing[d]
            if (p, d) in seen:
                continue
            seen.add((d, p))
            lines.append(f"edge {d} {p}")
        if self.skel is None:
            lines.append("skeleton none")
        elif not self.skel:
            lines.append("skeleton empty")
        else:
            lines.append("skeleton " + " ".join(str(u) for u in self.skel))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        nt = nu = None
        pairs = []
        skel = None
        for line in text.strip().splitlines():
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "vertices":
                nt, nu = int(parts[1]), int(parts[2])
            elif parts[0] == "edge":
                pairs.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "skeleton":
                if parts[1] == "none":
                    skel = None
                elif parts[1] == "empty":
                    skel = ()
                else:
                    skel = tuple(int(x) for x in parts[1:])
            else:
                raise DiagramError(f"bad line: {line}")
        if nt is None:
            raise DiagramError("missing vertices line")
        nd = 3 * nt + nu
        pairing = [-1] * nd
        for a, b in pairs:
            pairing[a], pairing[b] = b, a
        return cls(nt, nu, pairing, skel)

    def __repr__(self):
        sk = "B" if self.skel is None else "A"
        return f"<Diagram {sk} deg={self.degree} nt={self.nt} legs={self.nu}>"


def empty_circle():
    """The bare skeleton circle (degree 0); evaluates to 1 everywhere."""
    return Diagram(0, 0, (), skel=())


# -- canonical search ------------------------------------------------------------
#
# Lockstep minimal-encoding search.  Candidates are partial relabelings
# (root dart + orientation choices); all candidates emit one token per step
# following the same schedule, and only candidates matching the minimal
# token survive.  Tokens per dart, in label order: its tag, the label of
# its edge partner, the label of the cyclic successor (trivalent only),
# and the label of the skeleton successor's dart (skeleton legs only).
# New labels are assigned in order of first appearance.


class _Cand:
    __slots__ = ("root", "orient", "pos", "order", "parity")

    def __init__(self, root):
        self.root = root
        self.orient = {}
        self.pos = {root: 0}
        self.order = [root]
        self.parity = 0

    def clone(self):
        c = _Cand.__new__(_Cand)
        c.root = self.root
        c.orient = dict(self.orient)
        c.pos = dict(self.pos)
        c.order = list(self.order)
        c.parity = self.parity
        return c

    def label(self, dart):
        if dart in self.pos:
            return self.pos[dart]
        lab = len(self.order)
        self.pos[dart] = lab
        self.order.append(dart)
        return lab


def _canonicalize(d):
    if d.n_darts == 0:
        return d, 1, False
    nt3 = 3 * d.nt
    skn = d.skel_next()

    def tag(dart):
        if dart < nt3:
            return 0
        v = d.dart_vertex(dart)
        return 2 if v in skn else 1

    def sigma_oriented(dart, o):
        base = 3 * (dart // 3)
        step = 1 if o == 1 else 2
        return base + (dart - base + step) % 3

    cands = [_Cand(r) for r in range(d.n_darts)]
    best_tokens = []
    step_schedule_done = False

    i = 0
    emissions = ("tag", "alpha", "sigma", "skel")
    while True:
        if i >= len(cands[0].order):
            break
        for kind in emissions:
            # candidates may branch on orientation during "sigma"
            expanded = []
            scored = []
            for c in cands:
                dart = c.order[i]
                if kind == "tag":
                    expanded.append((tag(dart), c))
                elif kind == "alpha":
                    expanded.append((c.label(d.pairing[dart]), c))
                elif kind == "sigma":
                    if dart >= nt3:
                        expanded.append((-1, c))
                    else:
                        v = dart // 3
                        if v in c.orient:
                            expanded.append((c.label(sigma_oriented(dart, c.orient[v])), c))
                        else:
                            for o in (1, -1):
                                cc = c.clone()
                                cc.orient[v] = o
                                if o == -1:
                                    cc.parity ^= 1
                                expanded.append((cc.label(sigma_oriented(dart, o)), cc))
                else:  # skel
                    v = d.dart_vertex(dart)
                    if v in skn:
                        expanded.append((c.label(d.vertex_darts(skn[v])[0]), c))
                    else:
                        expanded.append((-1, c))
            mn = min(t for t, _ in expanded)
            cands = [c for t, c in expanded if t == mn]
            best_tokens.append(mn)
        i += 1

    parities = {c.parity for c in cands}
    zero = len(parities) == 2
    winner = cands[0]
    sign = -1 if winner.parity else 1

    canon = _rebuild(d, winner)
    return canon, sign, zero


def _rebuild(d, cand):
    """Materialize the canonical diagram described by a winning candidate."""
    nt3 = 3 * d.nt
    order = cand.order
    pos = cand.pos
    # canonical vertices in order of first dart appearance
    triv_of_old = {}
    univ_of_old = {}
    for dart in order:
        v = d.dart_vertex(dart)
        if dart < nt3:
            if v not in triv_of_old:
                triv_of_old[v] = (len(triv_of_old), dart)
        else:
            if v not in univ_of_old:
                univ_of_old[v] = len(univ_of_old)
    nt, nu = len(triv_of_old), len(univ_of_old)

    def new_dart(old):
        v = d.dart_vertex(old)
        if old < nt3:
            nv, first = triv_of_old[v]
            base = 3 * (old // 3)
            o = cand.orient[v]
            step = (old - base) * o - (first - base) * o
            return 3 * nv + step % 3
        return 3 * nt + univ_of_old[v]

    pairing = [-1] * (3 * nt + nu)
    for old in range(d.n_darts):
        pairing[new_dart(old)] = new_dart(d.pairing[old])
    skel = None
    if d.skel is not None:
        relab = [nt + univ_of_old[u] for u in d.skel]
        if relab:
            k = relab.index(min(relab))
            relab = relab[k:] + relab[:k]
        skel = tuple(relab)
    return Diagram(nt, nu, pairing, skel, check=False)


def canonicalize(d):
    """(canonical diagram, sign in {+1, -1}) relating d to its representative."""
    canon, sign, _ = d.canonical()
    return canon, sign


def is_zero_by_symmetry(d):
    return d.canonical()[2]


# -- linear combinations ------------------------------------------------------------


class LinComb:
    """Exact linear combination of canonical diagrams.

    Keys are canonical encodings; adding a diagram canonicalizes it, applies
    the AS sign, and drops diagrams that equal their own negative.
    """

    __slots__ = ("terms",)

    def __init__(self):
        self.terms = {}

    @classmethod
    def of(cls, diagram, coeff=1):
        lc = cls()
        lc.add(diagram, coeff)
        return lc

    def add(self, diagram, coeff=1):
        if not coeff:
            return self
        canon, sign, zero = diagram.canonical()
        if zero:
            return self
        if self.terms:
            ref = next(iter(self.terms.values()))[0]
            if ref.degree != canon.degree or (ref.skel is None) != (canon.skel is None):
                raise DiagramError("terms of one combination must share degree "
                                   "and skeleton presence")
        key = canon._encoding()
        cur = self.terms.get(key)
        val = (cur[1] if cur else 0) + sign * coeff
        if val:
            self.terms[key] = (canon, val)
        else:
            self.terms.pop(key, None)
        return self

    def add_comb(self, other, scale=1):
        for diag, c in other:
            self.add(diag, c * scale)
        return self

    def __iter__(self):
        for key in sorted(self.terms):
            yield self.terms[key]

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def scaled(self, c):
        out = LinComb()
        for diag, v in self:
            out.add(diag, v * c)
        return out

    def __add__(self, other):
        out = LinComb()
        out.add_comb(self)
        out.add_comb(other)
        return out

    def __sub__(self, other):
        out = LinComb()
        out.add_comb(self)
        out.add_comb(other, -1)
        return out

    def coeff(self, diagram):
        canon, sign, zero = diagram.canonical()
        if zero:
            return 0
        got = self.terms.get(canon._encoding())
        return sign * got[1] if got else 0

    def __repr__(self):
        return "LinComb(" + " + ".join(f"({c})*{d!r}" for d, c in self) + ")"


# -- generators -------------------------------------------------------------------


def wheel(k):
    """The k-legged wheel: an inner cycle of k trivalent vertices, one leg
    each, no skeleton.  Cyclic order at hub i: (leg, next, prev)."""
    if k < 2 or k % 2:
        raise DiagramError("wheel needs an even leg count >= 2")
    nt, nu = k, k
    pairing = [-1] * (3 * nt + nu)

    def pair(a, b):
        pairing[a], pairing[b] = b, a

    # darts at hub i: 3i = leg slot, 3i+1 = to next hub, 3i+2 = to previous hub
    for i in range(k):
        pair(3 * i, 3 * nt + i)
        pair(3 * i + 1, 3 * ((i + 1) % k) + 2)
    return Diagram(nt, nu, pairing)


def wheel_on_circle(k):
    """The k-wheel with its legs glued to an oriented skeleton circle in the
    matching cyclic order."""
    w = wheel(k)
    return Diagram(w.nt, w.nu, w.pairing, skel=tuple(range(k, 2 * k)))


def chi_bar(b, coeff=1):
    """Sum over all leg orderings of gluings into an oriented circle.

    Accepts a skeleton-free Diagram or a LinComb of them; a diagram with k
    legs contributes the sum (not average) of its k! glued versions.
    """
    if isinstance(b, Diagram):
        b = LinComb.of(b, coeff)
    out = LinComb()
    for diag, c in b:
        if diag.skel is not None:
            raise DiagramError("chi_bar needs skeleton-free diagrams")
        if diag.nu == 0:
            raise DiagramError("chi_bar is not defined for diagrams without legs")
        legs = list(range(diag.nt, diag.nt + diag.nu))
        for perm in itertools.permutations(legs):
            out.add(Diagram(diag.nt, diag.nu, diag.pairing, skel=perm), c)
    return out


# -- STU ---------------------------------------------------------------------------


def stu_eligible_legs(d):
    """Skeleton vertices whose edge runs to an internal trivalent vertex."""
    if d.skel is None:
        return []
    out = []
    for u in d.skel:
        dart = d.vertex_darts(u)[0]
        if d.pairing[dart] < 3 * d.nt:
            out.append(u)
    return out


def stu_expand(d, u):
    """Resolve the internal vertex attached to skeleton leg u.

    For cyclic order (edge-to-skeleton, x, y) at the internal vertex the
    result is D[..., y-end, x-end, ...] - D[..., x-end, y-end, ...], the two
    ends replacing u in circle order.  Applying repeatedly terminates in
    chord diagrams.
    """
    if d.skel is None:
        raise DiagramError("stu_expand needs a skeleton")
    u_dart = d.vertex_darts(u)[0]
    h = d.pairing[u_dart]
    if h >= 3 * d.nt:
        raise DiagramError(f"leg {u} is a chord end, not STU-eligible")
    t = h // 3
    hx, hy = d.sigma(h), d.sigma(d.sigma(h))
    px, py = d.pairing[hx], d.pairing[hy]

    out = LinComb()
    for first, second, sgn in ((py, px, 1), (px, py, -1)):
        out.add(_resolve(d, t, u, first, second), sgn)
    return out


def _resolve(d, t, u, first_partner, second_partner):
    """Remove internal vertex t and leg u; attach the two cut edges to two
    new skeleton legs at u's position, ``first_partner`` first in circle
    order."""
    nt, nu = d.nt, d.nu
    old_nt3 = 3 * nt
    new_nt = nt - 1
    new_nu = nu + 1

    tv_map = {}
    idx = 0
    for v in range(nt):
        if v == t:
            continue
        tv_map[v] = idx
        idx += 1
    uv_map = {}
    idx = 0
    for v in range(nt, nt + nu):
        if v == u:
            continue
        uv_map[v] = idx
        idx += 1
    # two fresh legs occupy the last two univalent slots: A (first) then B
    legA, legB = new_nt + nu - 1, new_nt + nu

    def nd(old):
        if old < old_nt3:
            return 3 * tv_map[old // 3] + (old % 3)
        return 3 * new_nt + uv_map[nt + (old - old_nt3)]

    pairing = [-1] * (3 * new_nt + new_nu)

    def pair(a, b):
        pairing[a], pairing[b] = b, a

    removed = set(d.vertex_darts(t)) | set(d.vertex_darts(u))
    for dart in range(d.n_darts):
        if dart in removed:
            continue
        p = d.pairing[dart]
        if p in removed:
            continue
        pair(nd(dart), nd(p))
    dartA = 3 * new_nt + (legA - new_nt)
    dartB = 3 * new_nt + (legB - new_nt)
    if first_partner in removed and second_partner in removed:
        # both cut edges close onto each other: a chord between the new legs
        pair(dartA, dartB)
    else:
        pair(dartA, nd(first_partner))
        pair(dartB, nd(second_partner))

    skel = []
    for v in d.skel:
        if v == u:
            skel.extend((legA, legB))
        else:
            skel.append(uv_map[v] + new_nt)
    return Diagram(new_nt, new_nu, pairing, skel=tuple(skel))


_CHORD_CACHE = {}


def chord_reduce(d):
    """Full STU reduction of a skeleton diagram to chord diagrams (cached)."""
    if isinstance(d, LinComb):
        out = LinComb()
        for diag, c in d:
            out.add_comb(chord_reduce(diag), c)
        return out
    canon, sign, zero = d.canonical()
    if zero:
        return LinComb()
    key = canon._encoding()
    if key not in _CHORD_CACHE:
        if canon.nt == 0:
            res = LinComb.of(canon)
        else:
            legs = stu_eligible_legs(canon)
            if not legs:
                raise DiagramError("internal part detached from the skeleton")
            res = LinComb()
            for diag, c in stu_expand(canon, legs[0]):
                res.add_comb(chord_reduce(diag), c)
        _CHORD_CACHE[key] = res
    out = LinComb()
    out.add_comb(_CHORD_CACHE[key], sign)
    return out


def chord_endpoints(d):
    """Positions (i, j) along the skeleton of each chord of a chord diagram."""
    if not d.is_chord_diagram():
        raise DiagramError("not a chord diagram")
    posn = {u: i for i, u in enumerate(d.skel)}
    chords = []
    for i, u in enumerate(d.skel):
        du = d.vertex_darts(u)[0]
        v = d.dart_vertex(d.pairing[du])
        j = posn[v]
        if i < j:
            chords.append((i, j))
    return chords


# -- skeleton-order sorting (the filtration decomposition) ---------------------------


def skeleton_swap(d, i):
    """Rewrite D[..., x, y, ...] = D[..., y, x, ...] - Y where x, y are the
    skeleton vertices at positions i, i+1 and Y fuses them into one leg
    attached to a new internal vertex (one fewer skeleton vertex).

    Returns (swapped diagram, y_term diagram)."""
    if d.skel is None or len(d.skel) < 2:
        raise DiagramError("need at least two skeleton vertices")
    n = len(d.skel)
    x, y = d.skel[i], d.skel[(i + 1) % n]
    skel2 = list(d.skel)
    skel2[i], skel2[(i + 1) % n] = y, x
    swapped = Diagram(d.nt, d.nu, d.pairing, skel=tuple(skel2))

    # Y term: new trivalent vertex t with cyclic (to-skeleton, x-edge, y-edge)
    nt, nu = d.nt, d.nu
    new_nt = nt + 1
    new_nu = nu - 1
    t = nt  # fresh trivalent label
    xv_dart, yv_dart = d.vertex_darts(x)[0], d.vertex_darts(y)[0]
    px, py = d.pairing[xv_dart], d.pairing[yv_dart]

    uv_map = {}
    idx = 0
    for v in range(nt, nt + nu):
        if v in (x, y):
            continue
        uv_map[v] = idx
        idx += 1
    legU = new_nt + new_nu - 1  # fused leg, last univalent slot
    uv_dart = 3 * new_nt + (legU - new_nt)

    def ndart(old):
        if old < 3 * nt:
            return old  # trivalent block unchanged (fresh vertex appended)
        return 3 * new_nt + uv_map[nt + (old - 3 * nt)]

    pairing = [-1] * (3 * new_nt + new_nu)

    def pair(a, b):
        pairing[a], pairing[b] = b, a

    removed = {xv_dart, yv_dart}
    for dart in range(d.n_darts):
        if dart in removed or d.pairing[dart] in removed:
            continue
        pair(ndart(dart), ndart(d.pairing[dart]))
    t0, t1, t2 = 3 * t, 3 * t + 1, 3 * t + 2  # (skeleton, x-edge, y-edge)
    pair(t0, uv_dart)
    if px == yv_dart:  # x and y were chorded together
        pair(t1, t2)
    else:
        pair(t1, ndart(px))
        pair(t2, ndart(py))
    skel = []
    for v in d.skel:
        if v == x:
            skel.append(legU)
        elif v == y:
            continue
        else:
            skel.append(uv_map[v] + new_nt)
    y_term = Diagram(new_nt, new_nu, pairing, skel=tuple(skel))
    return swapped, y_term


def sort_skeleton_to(d, target_order, coeff=1):
    """Express d as coeff * (d with skeleton sorted to target cyclic order)
    plus lower-filtration terms, by repeated STU swaps.

    ``target_order`` is a tuple of d's univalent vertex labels.  Returns
    (sorted LinComb contribution, LinComb of emitted lower terms)."""
    rank = {}
    base = d.skel.index(target_order[0])
    rot = d.skel[base:] + d.skel[:base]
    for pos, v in enumerate(target_order):
        rank[v] = pos

    lower = LinComb()
    cur = Diagram(d.nt, d.nu, d.pairing, skel=rot)
    # bubble sort positions 1..n-1 by rank
    n = len(rot)
    changed = True
    while changed:
        changed = False
        for i in range(1, n - 1):
            if rank[cur.skel[i]] > rank[cur.skel[i + 1]]:
                swapped, y_term = skeleton_swap(cur, i)
                lower.add(y_term, -coeff)
                cur = swapped
                changed = True
    return LinComb.of(cur, coeff), lower


# -- insertion ------------------------------------------------------------------------


class InsertionPiece:
    """Connected skeleton-free diagram with 3 distinguished legs, cyclically
    ordered.

    The legs are marked: the stored representative is the canonical form of
    the diagram with its legs threaded on a directed cycle (leg order is
    defined up to rotation only, never transposition -- an anonymous-leg
    canonicalization would kill the triangle by the odd-wheel symmetry).
    """

    def __init__(self, diagram, legs_cyclic, name=""):
        if diagram.skel is not None:
            raise DiagramError("insertion pieces are built from skeleton-free diagrams")
        if diagram.nu != 3:
            raise DiagramError("insertion pieces have exactly 3 legs")
        marked = Diagram(diagram.nt, diagram.nu, diagram.pairing, skel=tuple(legs_cyclic))
        canon, sign, zero = marked.canonical()
        if zero:
            raise DiagramError("piece is zero by symmetry")
        self.name = name
        self.diagram = canon
        self.sign = sign
        self.legs = canon.skel

    @property
    def degree(self):
        """Degree as an insertion operator: trivalent count minus one, halved
        gives the vertex growth; deg(triangle) = 1."""
        return (self.diagram.nt - 1) // 2


def ladder(r):
    """Caterpillar segment: a path of 2r+1 trivalent vertices folded into two
    rails with r rungs, legs at the two rail starts and at the fold.

    ladder(1) is the triangle realizing the degree-1 insertion element t;
    ladder(d) has insertion degree d.
    """
    if r < 1:
        raise DiagramError("ladder needs r >= 1")
    nt = 2 * r + 1
    nu = 3
    pairing = [-1] * (3 * nt + nu)

    def pair(a, b):
        pairing[a], pairing[b] = b, a

    # path vertices 0..2r (vertex r is the fold); darts (3v, 3v+1, 3v+2) =
    # (path-prev, middle, path-next); middle = rung, or the fold leg at v=r
    for v in range(nt - 1):
        pair(3 * v + 2, 3 * (v + 1))
    for i in range(r):
        pair(3 * i + 1, 3 * (2 * r - i) + 1)
    legA, legB, legC = nt, nt + 1, nt + 2
    pair(3 * 0, 3 * nt + 0)            # rail A start
    pair(3 * (nt - 1) + 2, 3 * nt + 1)  # rail B start (path end)
    pair(3 * r + 1, 3 * nt + 2)         # fold leg
    diag = Diagram(nt, nu, pairing)
    return InsertionPiece(diag, (legA, legB, legC), name=f"ladder({r})")


def triangle():
    p = ladder(1)
    p.name = "triangle"
    return p


def insert_at_vertex(d, v, piece, rotation=0):
    """Replace trivalent vertex v of d by the piece, gluing the three cut
    edges to the piece's legs through a cyclic matching (rotation 0..2).

    Degree grows by the piece degree; leg count and skeleton are untouched.
    """
    if v >= d.nt:
        raise DiagramError("insertion needs a trivalent vertex")
    p = piece.diagram
    pd = [p.pairing[p.vertex_darts(leg)[0]] for leg in piece.legs]  # piece-side glue darts
    cut = list(d.vertex_darts(v))
    cut_partners = [d.pairing[c] for c in cut]

    nt = d.nt - 1 + p.nt
    nu = d.nu
    tv_map = {}
    idx = 0
    for w in range(d.nt):
        if w == v:
            continue
        tv_map[w] = idx
        idx += 1
    p_off = d.nt - 1

    def nd_host(old):
        if old < 3 * d.nt:
            return 3 * tv_map[old // 3] + (old % 3)
        return 3 * nt + (old - 3 * d.nt)

    def nd_piece(old):
        return 3 * (p_off + old // 3) + (old % 3)

    pairing = [-1] * (3 * nt + nu)

    def pair(a, b):
        pairing[a], pairing[b] = b, a

    cutset = set(cut)
    for dart in range(d.n_darts):
        if dart in cutset or d.pairing[dart] in cutset:
            continue
        pair(nd_host(dart), nd_host(d.pairing[dart]))
    removed_piece = {p.vertex_darts(leg)[0] for leg in piece.legs}
    for dart in range(3 * p.nt):
        q = p.pairing[dart]
        if q in removed_piece:
            continue
        pair(nd_piece(dart), nd_piece(q))
    for slot in range(3):
        host = cut_partners[slot]
        glue = pd[(slot + rotation) % 3]
        if host in cutset:
            # v had a self-loop: connect the two glue darts directly
            other_slot = cut.index(host)
            if other_slot > slot:
                pair(nd_piece(glue), nd_piece(pd[(other_slot + rotation) % 3]))
        else:
            pair(nd_host(host), nd_piece(glue))
    skel = None if d.skel is None else tuple(nd_host(d.vertex_darts(u)[0]) - 3 * nt + nt
                                             for u in d.skel)
    out = Diagram(nt, nu, pairing, skel=skel)
    return LinComb.of(out, piece.sign)


# -- IHX saturation and reduction ---------------------------------------------------


def internal_edges(d):
    """Darts h < pairing[h], both ends trivalent, excluding self-loops."""
    out = []
    for h in range(3 * d.nt):
        p = d.pairing[h]
        if h < p < 3 * d.nt and p // 3 != h // 3:
            out.append(h)
    return out


def ihx_relation(d, h):
    """d - d1 - d2 for the internal edge with darts (h, pairing[h]).

    With cyclic orders (e, a, b) and (e', c, d) at the two endpoints,
    d1 rewires to (a, c, e)(e', b, d) and d2 to (b, c, f)(a, f', d).
    """
    p = d.pairing[h]
    u, w = h // 3, p // 3
    a, b = d.sigma(h), d.sigma(d.sigma(h))
    c, dd = d.sigma(p), d.sigma(d.sigma(p))
    rel = LinComb.of(d)
    rel.add(_rewire(d, u, w, (a, c, h), (p, b, dd)), -1)
    rel.add(_rewire(d, u, w, (b, c, h), (a, p, dd)), -1)
    return rel


def _rewire(d, u, w, triple_u, triple_w):
    """Rebuild d with the half-edge triples at trivalent u, w replaced (the
    entries name old darts whose partners are preserved)."""
    old_partner = {}
    slots = {}
    for v, triple in ((u, triple_u), (w, triple_w)):
        for s, old in enumerate(triple):
            slots[old] = 3 * v + s
    for old in list(slots):
        old_partner[old] = d.pairing[old]

    def nd(old):
        return slots.get(old, old)

    pairing = list(d.pairing)
    touched = set(slots) | {d.pairing[o] for o in slots}
    for t in touched:
        pairing[t] = -1

    def pair(x, y):
        pairing[x], pairing[y] = y, x

    done = set()
    for old, target in slots.items():
        if old in done:
            continue
        partner = old_partner[old]
        done.add(old)
        if partner in slots:
            done.add(partner)
            pair(target, slots[partner])
        else:
            pair(target, partner)
    return Diagram(d.nt, d.nu, pairing, skel=d.skel)


def ihx_saturate(seed_diagrams, max_diagrams=4000):
    """Closure of a diagram set under IHX moves, plus the relations."""
    frontier = []
    seen = {}
    for diag in seed_diagrams:
        canon, _, zero = diag.canonical()
        if not zero and canon._encoding() not in seen:
            seen[canon._encoding()] = canon
            frontier.append(canon)
    relations = []
    rel_keys = set()
    while frontier:
        diag = frontier.pop()
        for h in internal_edges(diag):
            rel = ihx_relation(diag, h)
            key = tuple(sorted((k, str(c)) for k, (_, c) in rel.terms.items()))
            if key in rel_keys:
                continue
            rel_keys.add(key)
            if not rel.is_zero():
                relations.append(rel)
            for term, _ in rel:
                k = term._encoding()
                if k not in seen:
                    if len(seen) >= max_diagrams:
                        raise DiagramError("IHX saturation exceeded the configured bound")
                    seen[k] = term
                    frontier.append(term)
    return list(seen.values()), relations


def reduce_B(c, max_diagrams=4000):
    """Coordinates of a LinComb of skeleton-free diagrams modulo AS/IHX.

    The relation span is computed on the IHX saturation of the support (the
    saturated set is relation-closed, so zero/equality tests are exact).
    Returns {canonical encoding: coefficient} after elimination; the zero
    map means the class is zero.
    """
    from .scalars import sparse_rref, as_field

    if isinstance(c, Diagram):
        c = LinComb.of(c)
    support = [diag for diag, _ in c]
    if not support:
        return {}
    diagrams, relations = ihx_saturate(support, max_diagrams=max_diagrams)
    index = {diag._encoding(): i for i, diag in enumerate(sorted(
        (d for d in diagrams), key=lambda x: x._encoding()))}
    rows = []
    for rel in relations:
        rows.append({index[diag._encoding()]: as_field(Fraction(coeff))
                     for diag, coeff in rel})
    pivots, rref = sparse_rref(rows, len(index))
    vec = {index[diag._encoding()]: as_field(Fraction(coeff)) for diag, coeff in c}
    for p, row in zip(pivots, rref):
        f = vec.get(p)
        if f:
            for col, v in row.items():
                s = vec.get(col, 0) - f * v
                if s:
                    vec[col] = s
                else:
                    vec.pop(col, None)
    back = {enc: i for enc, i in index.items()}
    rev = {i: enc for enc, i in back.items()}
    return {rev[i]: v for i, v in vec.items() if v}


def dim_B_piece(degree, legs, max_diagrams=20000):
    """Dimension of the connected (degree, legs) piece modulo AS/IHX, by
    exhaustive enumeration and exact rank computation."""
    from .scalars import matrix_rank

    diagrams = enumerate_connected(degree, legs)
    if not diagrams:
        return 0
    all_diags, relations = ihx_saturate(diagrams, max_diagrams=max_diagrams)
    index = {diag._encoding(): i for i, diag in enumerate(sorted(
        (d for d in all_diags), key=lambda x: x._encoding()))}
    rows = [{index[diag._encoding()]: Fraction(coeff) for diag, coeff in rel}
            for rel in relations]
    return len(index) - matrix_rank(rows, len(index))


def enumerate_connected(degree, legs):
    """All connected skeleton-free diagrams of the given degree and leg
    count, one canonical representative per nonzero AS-class."""
    nt = 2 * degree - legs
    if nt < 0 or (nt + legs) % 2:
        return []
    nd = 3 * nt + legs
    found = {}

    def backtrack(pairing, used):
        free = [i for i in range(nd) if pairing[i] < 0]
        if not free:
            try:
                diag = Diagram(nt, legs, tuple(pairing))
            except DiagramError:
                return
            canon, _, zero = diag.canonical()
            if not zero:
                found.setdefault(canon._encoding(), canon)
            return
        h = free[0]
        seen_fresh_triv = False
        seen_fresh_univ = False
        for p in free[1:]:
            v = p // 3 if p < 3 * nt else nt + (p - 3 * nt)
            if v not in used:
                # fresh vertices of the same kind are interchangeable
                if p < 3 * nt:
                    if seen_fresh_triv:
                        continue
                    seen_fresh_triv = True
                else:
                    if seen_fresh_univ:
                        continue
                    seen_fresh_univ = True
            pairing[h], pairing[p] = p, h
            vh = h // 3 if h < 3 * nt else nt + (h - 3 * nt)
            added = [w for w in (v, vh) if w not in used]
            used.update(added)
            backtrack(pairing, used)
            for w in added:
                used.discard(w)
            pairing[h] = pairing[p] = -1

    backtrack([-1] * nd, set())
    return list(found.values())


# -- chord-diagram space (skeleton side) ----------------------------------------------


def chord_diagram_from_word(pairs, n):
    """Chord diagram on n circle positions from a pairing of positions."""
    nu = n
    pairing = [-1] * nu
    for a, b in pairs:
        pairing[a], pairing[b] = b, a
    return Diagram(0, nu, tuple(pairing), skel=tuple(range(nu)))


def all_chord_diagrams(m):
    """Canonical chord diagrams with m chords."""
    found = {}
    for pairs in _pairings(list(range(2 * m))):
        diag = chord_diagram_from_word(pairs, 2 * m)
        canon, _, zero = diag.canonical()
        if not zero:
            found.setdefault(canon._encoding(), canon)
    return [found[k] for k in sorted(found)]


def _pairings(items):
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        b = items[i]
        rest = items[1:i] + items[i + 1:]
        for tail in _pairings(rest):
            yield [(a, b)] + tail


def one_vertex_diagrams(m):
    """Degree-m skeleton diagrams with exactly one internal vertex (a tripod
    plus m-2 chords), canonical set."""
    n = 2 * m - 1  # skeleton vertices
    found = {}
    for tripod_pos in itertools.combinations(range(n), 3):
        rest = [i for i in range(n) if i not in tripod_pos]
        for pairs in _pairings(rest):
            nt, nu = 1, n
            pairing = [-1] * (3 + nu)

            def pair(a, b, pairing=pairing):
                pairing[a], pairing[b] = b, a

            for s, pos in enumerate(tripod_pos):
                pair(s, 3 + pos)
            for a, b in pairs:
                pair(3 + a, 3 + b)
            diag = Diagram(nt, nu, tuple(pairing), skel=tuple(range(1, 1 + nu)))
            canon, _, zero = diag.canonical()
            if not zero:
                found.setdefault(canon._encoding(), canon)
    return [found[k] for k in sorted(found)]


def dim_A_by_stu(m):
    """dim of the degree-m circle space: chord classes modulo the relations
    induced by resolving one-internal-vertex diagrams along their (up to
    three) eligible edges in all ways."""
    from .scalars import matrix_rank

    classes = all_chord_diagrams(m)
    index = {c._encoding(): i for i, c in enumerate(classes)}
    rows = []
    for diag in one_vertex_diagrams(m):
        legs = stu_eligible_legs(diag)
        expansions = []
        for u in legs:
            exp = LinComb()
            for term, coeff in stu_expand(diag, u):
                exp.add_comb(chord_reduce(term), coeff)
            expansions.append(exp)
        for e1, e2 in itertools.combinations(expansions, 2):
            rel = e1 - e2
            row = {index[t._encoding()]: Fraction(c) for t, c in rel}
            if row:
                rows.append(row)
    rank = matrix_rank(rows, len(classes)) if rows else 0
    return len(classes) - rank


# independent four-term oracle, pure word surgery ------------------------------------


def _word_canonical(pairs, n):
    """Rotation-minimal encoding of a chord pairing on n circle points."""
    best = None
    partner = {}
    for a, b in pairs:
        partner[a], partner[b] = b, a
    for r in range(n):
        code = tuple(sorted(tuple(sorted(((a - r) % n, (b - r) % n))) for a, b in pairs))
        if best is None or code < best:
            best = code
    return best


def dim_A_by_four_term(m):
    """dim of the degree-m circle space from the four-term relations, built
    by direct index surgery on chord words (independent of the Diagram
    machinery)."""
    from .scalars import matrix_rank

    n = 2 * m - 1
    words = {}
    rows = []

    def reg(pairs):
        key = _word_canonical(pairs, 2 * m)
        if key not in words:
            words[key] = len(words)
        return words[key]

    for marked in itertools.permutations(range(n), 3):
        p1, p2, p3 = marked
        rest = [i for i in range(n) if i not in marked]
        for pairs in _pairings(rest):
            row = {}

            def build(double_at, to_first, to_second):
                # expand position double_at into two adjacent points, chorded
                # to the two marked singles; renumber to 2m points
                def shift(x):
                    return x + 1 if x > double_at else x

                out = []
                for a, b in pairs:
                    out.append((shift(a), shift(b)))
                out.append((double_at, shift(to_first)))
                out.append((double_at + 1, shift(to_second)))
                return out

            # D[(P3,P2)@P1] - D[(P2,P3)@P1] - D[(P1,P3)@P2] + D[(P3,P1)@P2]
            for pairs4, sgn in (
                (build(p1, p3, p2), 1),
                (build(p1, p2, p3), -1),
            ):
                idx = reg(pairs4)
                row[idx] = row.get(idx, 0) + sgn
            for first, second, sgn in ((p1, p3, -1), (p3, p1, 1)):
                def shift2(x):
                    return x + 1 if x > p2 else x

                out = [(shift2(a), shift2(b)) for a, b in pairs]
                out.append((p2, shift2(first)))
                out.append((p2 + 1, shift2(second)))
                idx = reg(out)
                row[idx] = row.get(idx, 0) + sgn
            row = {k: Fraction(v) for k, v in row.items() if v}
            if row:
                rows.append(row)

    # count all chord classes with the same independent canonicalizer
    all_words = set()
    for pairs in _pairings(list(range(2 * m))):
        all_words.add(_word_canonical(pairs, 2 * m))
    for key in all_words:
        if key not in words:
            words[key] = len(words)
    rank = matrix_rank(rows, len(words)) if rows else 0
    return len(all_words) - rank


def basis_A(m):
    """Dimension of the degree-m circle space, both routes; they must agree."""
    by_stu = dim_A_by_stu(m)
    by_4t = dim_A_by_four_term(m)
    if by_stu != by_4t:
        raise DiagramError(f"dimension mismatch at degree {m}: {by_stu} vs {by_4t}")
    return by_stu
