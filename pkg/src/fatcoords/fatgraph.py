"""Fat graphs encoded as a pair of permutations on directed edges.

A directed edge (an "end") points into the vertex it is attached to.  ``s0``
rotates ends counterclockwise around their vertex and ``s1`` swaps the two
ends of an edge.  Vertices, edges and faces are the orbits of ``s0``, ``s1``
and ``s2 = s0^-1 s1``.
"""

from collections import deque


class GraphError(ValueError):
    pass


def _orbits(perm):
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        orb = []
        j = i
        while not seen[j]:
            seen[j] = True
            orb.append(j)
            j = perm[j]
        out.append(tuple(orb))
    return out


def _inverse(perm):
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


def _split_name(name):
    if len(name) > 1 and name[-1] in "+-":
        return name[:-1], name[-1]
    return name, None


class FatGraph:
    """Immutable fat graph.

    ``ee`` lists the names of directed edges; ``s0`` and ``s1`` give the
    image index of each one.  ``edge_names`` optionally names the undirected
    edges (ordered by their smallest end index); by default an edge whose
    ends are called ``"x+"`` and ``"x-"`` is called ``"x"``.
    """

    def __init__(self, ee, s0, s1, edge_names=None):
        ee = tuple(str(e) for e in ee)
        s0 = tuple(int(i) for i in s0)
        s1 = tuple(int(i) for i in s1)
        n = len(ee)
        if len(s0) != n or len(s1) != n:
            raise GraphError("s0, s1 and ee must have the same length")
        if len(set(ee)) != n:
            raise GraphError("directed edge names must be distinct")
        for name, p in (("s0", s0), ("s1", s1)):
            if sorted(p) != list(range(n)):
                raise GraphError(f"{name} is not a permutation of the directed edges")
        for i in range(n):
            if s1[i] == i:
                raise GraphError(f"s1 has a fixed point at {ee[i]!r}")
            if s1[s1[i]] != i:
                raise GraphError("s1 is not an involution")
        self.ee = ee
        self.s0 = s0
        self.s1 = s1
        self.s0inv = _inverse(s0)
        self.s2 = tuple(self.s0inv[s1[i]] for i in range(n))

        self.vertices = _orbits(s0)
        self.vertex_of = [0] * n
        for k, orb in enumerate(self.vertices):
            for i in orb:
                self.vertex_of[i] = k

        self.edges = [(i, s1[i]) for i in range(n) if i < s1[i]]
        self.edge_of = [0] * n
        for k, (i, j) in enumerate(self.edges):
            self.edge_of[i] = k
            self.edge_of[j] = k

        self.faces = _orbits(self.s2)
        self.face_of = [0] * n
        for k, orb in enumerate(self.faces):
            for i in orb:
                self.face_of[i] = k

        if edge_names is None:
            edge_names = []
            for i, j in self.edges:
                bi, si = _split_name(ee[i])
                bj, sj = _split_name(ee[j])
                if bi == bj and si and sj and si != sj:
                    edge_names.append(bi)
                else:
                    edge_names.append(f"{ee[i]}|{ee[j]}")
        edge_names = tuple(str(e) for e in edge_names)
        if len(edge_names) != len(self.edges) or len(set(edge_names)) != len(edge_names):
            raise GraphError("edge names must be distinct, one per edge")
        self.edge_names = edge_names
        self._edge_index = {name: k for k, name in enumerate(edge_names)}
        self._end_index = {name: k for k, name in enumerate(ee)}

    # -- basic counts -------------------------------------------------------

    @property
    def n_ends(self):
        return len(self.ee)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_faces(self):
        return len(self.faces)

    def __eq__(self, other):
        return (isinstance(other, FatGraph) and self.ee == other.ee
                and self.s0 == other.s0 and self.s1 == other.s1
                and self.edge_names == other.edge_names)

    def __hash__(self):
        return hash((self.ee, self.s0, self.s1))

    def __repr__(self):
        return (f"FatGraph(V={self.n_vertices}, E={self.n_edges}, "
                f"F={self.n_faces})")

    # -- lookup --------------------------------------------------------------

    def edge_index(self, edge):
        """Edge index from an index or a name."""
        if isinstance(edge, int):
            if not 0 <= edge < self.n_edges:
                raise GraphError(f"no edge with index {edge}")
            return edge
        try:
            return self._edge_index[edge]
        except KeyError:
            raise GraphError(f"unknown edge {edge!r}") from None

    def end_index(self, end):
        if isinstance(end, int):
            if not 0 <= end < self.n_ends:
                raise GraphError(f"no directed edge with index {end}")
            return end
        try:
            return self._end_index[end]
        except KeyError:
            raise GraphError(f"unknown directed edge {end!r}") from None

    def is_trivalent(self):
        return all(len(v) == 3 for v in self.vertices)

    def is_connected(self):
        return len(components(self)) == 1

    def face_ends(self, face):
        """Ends of a face oriented along its counterclockwise boundary.

        For consecutive members ``a, b`` we have ``b = s1 s0^-1 a``; the corner
        of the face at the vertex of ``a`` lies between ``a`` and ``s0^-1 a``.
        """
        return tuple(self.s1[i] for i in self.faces[face])

    def face_multiplicity(self, face):
        """How many times each edge appears on the boundary of a face."""
        m = [0] * self.n_edges
        for i in self.faces[face]:
            m[self.edge_of[i]] += 1
        return m

    def to_json(self):
        return {"ee": list(self.ee), "s0": list(self.s0), "s1": list(self.s1)}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(data["ee"], data["s0"], data["s1"], data.get("edge_names"))
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from None


def build_graph(dir_edges, s0, s1, edge_names=None):
    """Validate permutation data and return a FatGraph.

    ``s0`` and ``s1`` may be index lists or dicts mapping names to names.
    """
    dir_edges = list(dir_edges)
    if isinstance(s0, dict) or isinstance(s1, dict):
        pos = {name: k for k, name in enumerate(dir_edges)}
        try:
            if isinstance(s0, dict):
                s0 = [pos[s0[name]] for name in dir_edges]
            if isinstance(s1, dict):
                s1 = [pos[s1[name]] for name in dir_edges]
        except KeyError as exc:
            raise GraphError(f"inconsistent index set: {exc}") from None
    return FatGraph(dir_edges, s0, s1, edge_names)


def components(g):
    """Connected components as sorted lists of end indices."""
    seen = [False] * g.n_ends
    out = []
    for start in range(g.n_ends):
        if seen[start]:
            continue
        comp = []
        queue = deque([start])
        seen[start] = True
        while queue:
            i = queue.popleft()
            comp.append(i)
            for j in (g.s0[i], g.s1[i], g.s0inv[i]):
                if not seen[j]:
                    seen[j] = True
                    queue.append(j)
        out.append(sorted(comp))
    return out


def surface_type(g):
    """Return ``(genus, holes)`` of the surface thickening a connected graph."""
    if not g.is_connected():
        raise GraphError("graph is disconnected")
    v, e, s = g.n_vertices, g.n_edges, g.n_faces
    twice = 2 - s - v + e
    if twice % 2:
        raise GraphError("non-integer genus")
    genus = twice // 2
    if g.is_trivalent():
        if e != 6 * genus - 6 + 3 * s or v != 4 * genus - 4 + 2 * s:
            raise GraphError("trivalent counts are inconsistent")
    return genus, s


def neighbor(g, end, k):
    """The ends ᾱ(1..4) surrounding the edge of ``end``."""
    i = g.end_index(end)
    if k == 1:
        return g.s0[i]
    if k == 2:
        return g.s0inv[g.s1[i]]
    if k == 3:
        return g.s0[g.s1[i]]
    if k == 4:
        return g.s0inv[i]
    raise GraphError("neighbor index must be 1, 2, 3 or 4")


# -- edge correspondences -----------------------------------------------------


class EdgeCorrespondence:
    """Bijection from the edges of ``src`` to the edges of ``dst``."""

    def __init__(self, src, dst, mapping):
        mapping = tuple(int(k) for k in mapping)
        if len(mapping) != src.n_edges or sorted(mapping) != list(range(dst.n_edges)):
            raise GraphError("edge correspondence is not a bijection")
        self.src = src
        self.dst = dst
        self.mapping = mapping

    def __call__(self, edge):
        return self.mapping[self.src.edge_index(edge)]

    def by_name(self):
        return {self.src.edge_names[k]: self.dst.edge_names[m]
                for k, m in enumerate(self.mapping)}

    def then(self, other):
        """Compose: first ``self``, then ``other``."""
        if other.src != self.dst:
            raise GraphError("correspondences do not compose")
        return EdgeCorrespondence(self.src, other.dst,
                                  [other.mapping[m] for m in self.mapping])

    def inverse(self):
        inv = [0] * len(self.mapping)
        for k, m in enumerate(self.mapping):
            inv[m] = k
        return EdgeCorrespondence(self.dst, self.src, inv)

    def is_identity(self):
        return all(k == m for k, m in enumerate(self.mapping))

    def transport(self, values):
        """Move per-edge values of ``src`` onto ``dst``."""
        out = [None] * len(values)
        for k, m in enumerate(self.mapping):
            out[m] = values[k]
        return out

    def __repr__(self):
        return f"EdgeCorrespondence({self.by_name()})"


def identity_correspondence(g):
    return EdgeCorrespondence(g, g, range(g.n_edges))


# -- dual ----------------------------------------------------------------------


def dual(g):
    """Dual graph on the same ends: rotation ``s0^-1 s1``, same ``s1``."""
    d = FatGraph(g.ee, g.s2, g.s1, g.edge_names)
    return d, EdgeCorrespondence(g, d, range(g.n_edges))


# -- flips ---------------------------------------------------------------------


def _fresh_name(base, taken):
    name = base + "'"
    while name in taken:
        name += "'"
    return name


def flip_quad(g, edge):
    """Ends ``(e, f, a, b, c, d)`` of the quadrilateral around an edge.

    ``e`` and ``f = s1 e`` are the ends of the edge, ``a = s0 e`` and
    ``b = s0^-1 e`` sit at the vertex of ``e``, ``c = s0 f`` and ``d = s0^-1 f``
    at the vertex of ``f``.  Sides ``a`` and ``c`` are opposite, as are
    ``b`` and ``d``.
    """
    k = g.edge_index(edge)
    e, f = g.edges[k]
    if len(g.vertices[g.vertex_of[e]]) != 3 or len(g.vertices[g.vertex_of[f]]) != 3:
        raise GraphError("flip needs trivalent vertices at both ends")
    if g.vertex_of[e] == g.vertex_of[f]:
        raise GraphError(f"edge {g.edge_names[k]!r} is a loop and cannot be flipped")
    return e, f, g.s0[e], g.s0inv[e], g.s0[f], g.s0inv[f]


def flip(g, edge):
    """Whitehead move on a non-loop edge.

    Returns the new graph and the edge correspondence.  End indices are kept;
    the new diagonal reuses the two ends of the old edge under a fresh name.
    Flipping it again gives the original graph with the two ends of the
    edge exchanged.
    """
    e, f, a, b, c, d = flip_quad(g, edge)
    k = g.edge_of[e]
    # before: e -> a -> b -> e and f -> c -> d -> f
    s0 = list(g.s0)
    s0[f], s0[b], s0[c] = b, c, f
    s0[e], s0[d], s0[a] = d, a, e
    new_name = _fresh_name(g.edge_names[k], set(g.edge_names))
    edge_names = list(g.edge_names)
    edge_names[k] = new_name
    ee = list(g.ee)
    taken = set(ee)
    for i, sign in ((e, "-"), (f, "+")):
        name = new_name + sign
        while name in taken:
            name = name[:-1] + "'" + sign
        taken.add(name)
        ee[i] = name
    h = FatGraph(ee, s0, g.s1, edge_names)
    return h, EdgeCorrespondence(g, h, range(g.n_edges))


def flip_sequence(g, edges):
    """Apply flips in order; returns the final graph and the composed correspondence."""
    corr = identity_correspondence(g)
    for edge in edges:
        g, c = flip(g, edge if isinstance(edge, int) else corr.dst.edge_index(edge))
        corr = corr.then(c)
    return g, corr


def shares_vertex(g, e1, e2):
    k1, k2 = g.edge_index(e1), g.edge_index(e2)
    v1 = {g.vertex_of[i] for i in g.edges[k1]}
    v2 = {g.vertex_of[i] for i in g.edges[k2]}
    return bool(v1 & v2)


def pentagon_pairs(g):
    """Ordered pairs of edges spanning a pentagon.

    The edges must share exactly one vertex and have their other ends at two
    further distinct vertices, so the three triangles of the dual
    triangulation glue into an embedded pentagon.
    """
    out = []
    for k1 in range(g.n_edges):
        for k2 in range(g.n_edges):
            if k1 == k2:
                continue
            v1 = [g.vertex_of[i] for i in g.edges[k1]]
            v2 = [g.vertex_of[i] for i in g.edges[k2]]
            if len(set(v1)) < 2 or len(set(v2)) < 2:
                continue
            if len(set(v1) | set(v2)) == 3:
                out.append((k1, k2))
    return out


def pentagon_word(e1, e2):
    return [e1, e2, e1, e2, e1]


# -- coverings -------------------------------------------------------------------


def _check_perm(p, n):
    p = [int(x) for x in p]
    if sorted(p) != list(range(n)):
        raise GraphError(f"{p} is not a permutation of 0..{n - 1}")
    return p


class Cover:
    """A covering graph with its projection onto the base."""

    def __init__(self, base, graph, n_sheets, end_proj):
        self.base = base
        self.graph = graph
        self.n_sheets = n_sheets
        self.end_proj = tuple(end_proj)
        self.edge_proj = tuple(base.edge_of[end_proj[i]] for i, _ in graph.edges)
        self.vertex_proj = tuple(base.vertex_of[end_proj[orb[0]]] for orb in graph.vertices)
        self.face_proj = tuple(base.face_of[end_proj[orb[0]]] for orb in graph.faces)

    def pullback(self, values):
        """Per-edge values of the base lifted to the cover."""
        return [values[k] for k in self.edge_proj]


def build_cover(g, monodromy, n_sheets=None):
    """Unramified cover given by a permutation of sheets for each edge.

    ``monodromy`` maps edge names (or indices) to permutations of
    ``0..N-1``; missing edges get the identity.  The permutation describes
    the passage from the lower-index end of the edge to the other.
    """
    if not g.is_connected():
        raise GraphError("base graph must be connected")
    perms = {}
    for key, p in dict(monodromy).items():
        perms[g.edge_index(key)] = list(p)
    if n_sheets is None:
        n_sheets = len(next(iter(perms.values()))) if perms else 1
    n = int(n_sheets)
    if n < 1:
        raise GraphError("number of sheets must be at least 1")
    for k in range(g.n_edges):
        perms[k] = _check_perm(perms.get(k, range(n)), n)
    m = g.n_ends

    def idx(i, level):
        return i * n + level

    ee, s0, s1, proj = [None] * (m * n), [0] * (m * n), [0] * (m * n), [0] * (m * n)
    for i in range(m):
        k = g.edge_of[i]
        p = perms[k]
        pinv = _inverse(p)
        lower = g.edges[k][0] == i
        for level in range(n):
            ee[idx(i, level)] = f"{g.ee[i]}.{level}"
            s0[idx(i, level)] = idx(g.s0[i], level)
            s1[idx(i, level)] = idx(g.s1[i], p[level] if lower else pinv[level])
            proj[idx(i, level)] = i
    # edge names follow the sheet of the lower end
    names = []
    for i in range(m * n):
        j = s1[i]
        if i < j:
            names.append(f"{g.edge_names[g.edge_of[proj[i]]]}.{i % n}")
    h = FatGraph(ee, s0, s1, names)
    return Cover(g, h, n, proj)


def face_monodromy_orbits(g, monodromy, face, n_sheets):
    """Number of orbits of the sheet permutation obtained going around a face."""
    perm = list(range(n_sheets))
    mono = {g.edge_index(k): list(p) for k, p in dict(monodromy).items()}
    for i in g.faces[face]:
        # s2 = s0^-1 s1 crosses the edge of i
        k = g.edge_of[i]
        p = mono.get(k, list(range(n_sheets)))
        step = p if g.edges[k][0] == i else list(_inverse(p))
        perm = [step[x] for x in perm]
    return len(_orbits(perm))


# -- regularity and isomorphism ----------------------------------------------------


def is_loop(g, edge):
    i, j = g.edges[g.edge_index(edge)]
    return g.vertex_of[i] == g.vertex_of[j]


def is_regular(g):
    """No loops, no multiple edges, every edge between two distinct faces."""
    pairs = set()
    for i, j in g.edges:
        vi, vj = g.vertex_of[i], g.vertex_of[j]
        if vi == vj:
            return False
        key = (min(vi, vj), max(vi, vj))
        if key in pairs:
            return False
        pairs.add(key)
        if g.face_of[i] == g.face_of[j]:
            return False
    return True


def is_regular_face(g, face):
    """Each boundary edge and each corner vertex of the face occurs once."""
    ends = g.faces[face]
    edges = [g.edge_of[i] for i in ends]
    verts = [g.vertex_of[i] for i in ends]
    return len(set(edges)) == len(edges) and len(set(verts)) == len(verts)


def _extend(g1, g2, start1, start2, emap):
    """Grow an end map from one seed; None if it is inconsistent."""
    local = dict()
    queue = deque([(start1, start2)])
    while queue:
        i, j = queue.popleft()
        if i in emap or i in local:
            if emap.get(i, local.get(i)) != j:
                return None
            continue
        local[i] = j
        queue.append((g1.s0[i], g2.s0[j]))
        queue.append((g1.s1[i], g2.s1[j]))
        queue.append((g1.s0inv[i], g2.s0inv[j]))
    used = set(emap.values())
    if len(set(local.values())) != len(local) or used & set(local.values()):
        return None
    return local


def find_isomorphism(g1, g2, edge_map=None):
    """End map commuting with s0 and s1, or None.  Deterministic search.

    With ``edge_map`` (edge index of g1 -> edge index of g2) only
    isomorphisms inducing that map on edges are accepted.
    """
    if (g1.n_ends, g1.n_vertices, g1.n_faces) != (g2.n_ends, g2.n_vertices, g2.n_faces):
        return None
    comps = components(g1)

    def fits(local):
        if edge_map is None:
            return True
        return all(g2.edge_of[j] == edge_map[g1.edge_of[i]] for i, j in local.items())

    def search(ci, emap):
        if ci == len(comps):
            return emap
        seed = comps[ci][0]
        for j in range(g2.n_ends):
            if j in emap.values():
                continue
            local = _extend(g1, g2, seed, j, emap)
            if local is None or not fits(local):
                continue
            found = search(ci + 1, {**emap, **local})
            if found is not None:
                return found
        return None

    return search(0, {})


def graphs_isomorphic(g1, g2, edge_map=None):
    """Edge correspondence of a fat-graph isomorphism, or None."""
    emap = find_isomorphism(g1, g2, edge_map)
    if emap is None:
        return None
    return EdgeCorrespondence(g1, g2, [g2.edge_of[emap[i]] for i, _ in g1.edges])


def same_graph(g1, g2, corr):
    """True if ``corr`` is induced by a fat-graph isomorphism g1 -> g2."""
    return find_isomorphism(g1, g2, corr.mapping) is not None


def automorphisms(g):
    """All end maps of g onto itself (connected graphs)."""
    out = []
    if not g.is_connected():
        raise GraphError("automorphisms are enumerated for connected graphs only")
    for j in range(g.n_ends):
        local = _extend(g, g, 0, j, {})
        if local is not None and len(local) == g.n_ends:
            out.append(local)
    return out


# -- stock graphs ---------------------------------------------------------------------


def _from_rotations(edges, rotations):
    """Build a graph from edges ``name: (tail, head)`` and ccw rotations.

    ``rotations`` maps a vertex to the ccw list of edge ends there, each
    given as ``"x-"`` (tail end) or ``"x+"`` (head end).
    """
    ee = []
    for name in edges:
        ee += [name + "-", name + "+"]
    pos = {name: k for k, name in enumerate(ee)}
    s0 = [None] * len(ee)
    for cyc in rotations.values():
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            s0[pos[a]] = pos[b]
    s1 = [pos[n[:-1] + ("+" if n[-1] == "-" else "-")] for n in ee]
    return FatGraph(ee, s0, s1)


def torus1():
    """One-holed torus: two vertices, edges x, y, z, same rotation at both."""
    return _from_rotations({"x": 0, "y": 0, "z": 0},
                           {"u": ["x-", "z-", "y-"], "v": ["x+", "z+", "y+"]})


def theta():
    """Planar theta graph (pair of pants): rotation reversed at one vertex."""
    return _from_rotations({"x": 0, "y": 0, "z": 0},
                           {"u": ["x-", "y-", "z-"], "v": ["x+", "z+", "y+"]})


def sphere4():
    """Tetrahedron graph, a sphere with four holes; every face a triangle."""
    # vertex 0 in the middle, vertices 1, 2, 3 counterclockwise around it
    return _from_rotations(
        {"a": 0, "b": 0, "c": 0, "d": 0, "e": 0, "f": 0},
        {0: ["a-", "b-", "c-"],
         1: ["d-", "a+", "f+"],
         2: ["e-", "b+", "d+"],
         3: ["f-", "c+", "e+"]})


def sphere5():
    """Triangular prism, a sphere with five holes (two triangles, three squares)."""
    # inner triangle 0,1,2 (edges p,q,r), outer triangle 3,4,5 (edges s,t,w),
    # spokes i,j,k joining 0-3, 1-4, 2-5
    return _from_rotations(
        {"p": 0, "q": 0, "r": 0, "s": 0, "t": 0, "w": 0, "i": 0, "j": 0, "k": 0},
        {0: ["i-", "p-", "r+"],
         1: ["j-", "q-", "p+"],
         2: ["k-", "r-", "q+"],
         3: ["i+", "w+", "s-"],
         4: ["j+", "s+", "t-"],
         5: ["k+", "t+", "w-"]})


def genus2():
    """Genus two surface with one hole: nine edges, six vertices, one face."""
    return _from_rotations(
        {n: 0 for n in "abcdefghi"},
        _GENUS2_ROTATIONS)


# a loop-free graph with one face and no double edges, found by random search
_GENUS2_ROTATIONS = {
    0: ["h-", "d-", "c-"],
    1: ["e-", "i-", "f-"],
    2: ["e+", "a-", "g-"],
    3: ["i+", "c+", "g+"],
    4: ["h+", "b+", "a+"],
    5: ["d+", "b-", "f+"],
}

STOCK = {
    "torus1": torus1,
    "theta": theta,
    "genus2": genus2,
    "sphere4": sphere4,
    "sphere5": sphere5,
}


def stock(name):
    try:
        return STOCK[name]()
    except KeyError:
        raise GraphError(f"unknown stock graph {name!r}; choose from {sorted(STOCK)}") from None


# -- DOT export --------------------------------------------------------------------------


def to_dot(g):
    lines = ["graph fatgraph {"]
    for k, orb in enumerate(g.vertices):
        rot = " ".join(g.ee[i] for i in orb)
        lines.append(f'  v{k} [label="v{k}\\n({rot})"];')
    for k, (i, j) in enumerate(g.edges):
        lines.append(f'  v{g.vertex_of[i]} -- v{g.vertex_of[j]} [label="{g.edge_names[k]}"];')
    for k, orb in enumerate(g.faces):
        bnd = " ".join(g.edge_names[g.edge_of[i]] for i in orb)
        lines.append(f'  // face {k}: {bnd}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def euler_characteristic(g):
    return g.n_vertices - g.n_edges

