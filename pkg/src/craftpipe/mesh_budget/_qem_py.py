"""Quadric edge-collapse decimation, pure-Python kernel.

This is the fallback twin of the compiled kernel in ``_qem_cy.pyx``; both
implement the identical algorithm (same candidate order, same tie-breaking,
same float expression order), so they produce identical output and the
compiled one is selected at import purely for speed.

Algorithm: Garland-Heckbert quadric error metric. Every vertex accumulates
the squared-plane-distance quadric of its incident faces; edges are popped
from a cost heap and contracted at the best of {optimal point, midpoint,
endpoints}. Collapses are rejected when they would pinch topology (link
condition), flip or degenerate a surviving face, or (in the first phase)
touch a mesh boundary; boundary edges become eligible only after interior
collapses are exhausted. The optimal point is only accepted inside the
original bounds plus a small slack so every surviving vertex stays within
the guaranteed 1%-inflated box. Contract:

    decimate_arrays(pos, faces, target) -> (pos', faces', orig) | None

with flat float/int lists, ``orig`` mapping new vertex index -> input vertex
index, and None meaning the target is unreachable without destroying the
mesh.
"""

import heapq
import math

DEGENERATE_AREA = 1e-12  # triangles at or below this area are never emitted
DET_EPS = 1e-12
BOX_SLACK_FRACTION = 0.0025  # optimal-candidate clamp, well inside the 1% bound
_DEGEN_CROSS_SQ = (2.0 * DEGENERATE_AREA) ** 2  # |cross| = 2 * area


def _det3(a11, a12, a13, a21, a22, a23, a31, a32, a33):
    return (
        a11 * (a22 * a33 - a23 * a32)
        - a12 * (a21 * a33 - a23 * a31)
        + a13 * (a21 * a32 - a22 * a31)
    )


class Decimator:
    def __init__(self, pos, faces, target):
        self.pos = list(pos)
        self.faces = list(faces)
        self.target = target
        self.nv = len(pos) // 3
        self.nf = len(faces) // 3

        self.alive = [True] * self.nf
        self.face_count = 0
        for f in range(self.nf):
            a, b, c = faces[3 * f], faces[3 * f + 1], faces[3 * f + 2]
            if a == b or b == c or a == c:
                self.alive[f] = False
            else:
                self.face_count += 1

        self.quad = [0.0] * (10 * self.nv)
        self.vert_faces = [set() for _ in range(self.nv)]
        self.heap = []
        self.edge_version = {}
        self.tick = 0

        lo = [math.inf, math.inf, math.inf]
        hi = [-math.inf, -math.inf, -math.inf]
        for v in range(self.nv):
            for k in range(3):
                c = self.pos[3 * v + k]
                if c < lo[k]:
                    lo[k] = c
                if c > hi[k]:
                    hi[k] = c
        span = 0.0
        for k in range(3):
            if hi[k] - lo[k] > span:
                span = hi[k] - lo[k]
        slack = span * BOX_SLACK_FRACTION
        self.box_lo = [lo[k] - slack for k in range(3)]
        self.box_hi = [hi[k] + slack for k in range(3)]

    # --- setup -----------------------------------------------------------------

    def _accumulate_quadrics(self):
        pos, faces, quad = self.pos, self.faces, self.quad
        for f in range(self.nf):
            if not self.alive[f]:
                continue
            i0, i1, i2 = faces[3 * f], faces[3 * f + 1], faces[3 * f + 2]
            ax, ay, az = pos[3 * i0], pos[3 * i0 + 1], pos[3 * i0 + 2]
            e1x = pos[3 * i1] - ax
            e1y = pos[3 * i1 + 1] - ay
            e1z = pos[3 * i1 + 2] - az
            e2x = pos[3 * i2] - ax
            e2y = pos[3 * i2 + 1] - ay
            e2z = pos[3 * i2 + 2] - az
            nx = e1y * e2z - e1z * e2y
            ny = e1z * e2x - e1x * e2z
            nz = e1x * e2y - e1y * e2x
            norm = math.sqrt(nx * nx + ny * ny + nz * nz)
            if norm <= 2.0 * DEGENERATE_AREA:
                continue
            a = nx / norm
            b = ny / norm
            c = nz / norm
            d = -(a * ax + b * ay + c * az)
            for v in (i0, i1, i2):
                q = 10 * v
                quad[q] += a * a
                quad[q + 1] += a * b
                quad[q + 2] += a * c
                quad[q + 3] += a * d
                quad[q + 4] += b * b
                quad[q + 5] += b * c
                quad[q + 6] += b * d
                quad[q + 7] += c * c
                quad[q + 8] += c * d
                quad[q + 9] += d * d

    def _build_adjacency(self):
        for f in range(self.nf):
            if not self.alive[f]:
                continue
            for k in range(3):
                self.vert_faces[self.faces[3 * f + k]].add(f)

    # --- cost ------------------------------------------------------------------

    def _cost_at(self, q, x, y, z):
        aa, ab, ac, ad, bb, bc, bd, cc, cd, dd = q
        return (aa * x * x + bb * y * y + cc * z * z + dd) + 2.0 * (
            ab * x * y + ac * x * z + bc * y * z + ad * x + bd * y + cd * z
        )

    def _edge_cost(self, u, v):
        """Best contraction position and its quadric error for edge (u, v)."""
        qu, qv, quad = 10 * u, 10 * v, self.quad
        q = [quad[qu + k] + quad[qv + k] for k in range(10)]
        aa, ab, ac, ad, bb, bc, bd, cc, cd, dd = q

        pos = self.pos
        ux, uy, uz = pos[3 * u], pos[3 * u + 1], pos[3 * u + 2]
        vx, vy, vz = pos[3 * v], pos[3 * v + 1], pos[3 * v + 2]

        best_cost = math.inf
        best = (ux, uy, uz)

        det = _det3(aa, ab, ac, ab, bb, bc, ac, bc, cc)
        if abs(det) > DET_EPS:
            r0, r1, r2 = -ad, -bd, -cd
            x = _det3(r0, ab, ac, r1, bb, bc, r2, bc, cc) / det
            y = _det3(aa, r0, ac, ab, r1, bc, ac, r2, cc) / det
            z = _det3(aa, ab, r0, ab, bb, r1, ac, bc, r2) / det
            if (
                math.isfinite(x) and math.isfinite(y) and math.isfinite(z)
                and self.box_lo[0] <= x <= self.box_hi[0]
                and self.box_lo[1] <= y <= self.box_hi[1]
                and self.box_lo[2] <= z <= self.box_hi[2]
            ):
                c = self._cost_at(q, x, y, z)
                if math.isfinite(c):
                    best_cost = c
                    best = (x, y, z)

        mx = (ux + vx) / 2.0
        my = (uy + vy) / 2.0
        mz = (uz + vz) / 2.0
        for x, y, z in ((mx, my, mz), (ux, uy, uz), (vx, vy, vz)):
            c = self._cost_at(q, x, y, z)
            if math.isfinite(c) and c < best_cost:
                best_cost = c
                best = (x, y, z)
        if not math.isfinite(best_cost):
            best_cost = math.inf
        return best_cost, best[0], best[1], best[2]

    # --- legality --------------------------------------------------------------

    def _is_boundary_vertex(self, v):
        vf = self.vert_faces[v]
        neighbors = set()
        for f in vf:
            for k in range(3):
                w = self.faces[3 * f + k]
                if w != v:
                    neighbors.add(w)
        for w in neighbors:
            if len(vf & self.vert_faces[w]) == 1:
                return True
        return False

    def _cross_sub(self, f, sub_a, sub_b, x, y, z):
        """Cross product of face f's edges with vertices sub_a/sub_b moved to
        (x, y, z)."""
        pos, faces = self.pos, self.faces
        co = []
        for k in range(3):
            w = faces[3 * f + k]
            if w == sub_a or w == sub_b:
                co.append((x, y, z))
            else:
                co.append((pos[3 * w], pos[3 * w + 1], pos[3 * w + 2]))
        (ax, ay, az), (bx, by, bz), (cx, cy, cz) = co
        e1x, e1y, e1z = bx - ax, by - ay, bz - az
        e2x, e2y, e2z = cx - ax, cy - ay, cz - az
        return (
            e1y * e2z - e1z * e2y,
            e1z * e2x - e1x * e2z,
            e1x * e2y - e1y * e2x,
        )

    def _collapse_legal(self, u, v, x, y, z, allow_boundary):
        fu, fv = self.vert_faces[u], self.vert_faces[v]
        shared = fu & fv
        if not shared:
            return False  # edge no longer exists
        if not allow_boundary and (
            self._is_boundary_vertex(u) or self._is_boundary_vertex(v)
        ):
            return False

        # link condition: common neighbors must be exactly the shared faces'
        # opposite vertices, each distinct
        faces = self.faces
        opp = []
        for f in sorted(shared):
            for k in range(3):
                w = faces[3 * f + k]
                if w != u and w != v:
                    opp.append(w)
        if len(set(opp)) != len(opp):
            return False
        nu = set()
        for f in fu:
            for k in range(3):
                nu.add(faces[3 * f + k])
        nv = set()
        for f in fv:
            for k in range(3):
                nv.add(faces[3 * f + k])
        nu.discard(u)
        nu.discard(v)
        nv.discard(u)
        nv.discard(v)
        if (nu & nv) != set(opp):
            return False

        # surviving faces must stay unique (a tetrahedron must not fold into
        # a doubled triangle), keep positive area, and must not flip
        seen = set()
        for f in sorted((fu | fv) - shared):
            merged = sorted(
                u if faces[3 * f + k] == v else faces[3 * f + k] for k in range(3)
            )
            key = (merged[0], merged[1], merged[2])
            if key in seen:
                return False
            seen.add(key)
            ox, oy, oz = self._cross_sub(f, -1, -1, 0.0, 0.0, 0.0)
            nx, ny, nz = self._cross_sub(f, u, v, x, y, z)
            new_sq = nx * nx + ny * ny + nz * nz
            if new_sq <= _DEGEN_CROSS_SQ:
                return False
            old_sq = ox * ox + oy * oy + oz * oz
            if old_sq > _DEGEN_CROSS_SQ and (ox * nx + oy * ny + oz * nz) <= 0.0:
                return False
        return True

    # --- mutation --------------------------------------------------------------

    def _do_collapse(self, u, v, x, y, z):
        pos, faces, quad = self.pos, self.faces, self.quad
        pos[3 * u] = x
        pos[3 * u + 1] = y
        pos[3 * u + 2] = z
        for k in range(10):
            quad[10 * u + k] += quad[10 * v + k]

        shared = sorted(self.vert_faces[u] & self.vert_faces[v])
        for f in shared:
            for k in range(3):
                self.vert_faces[faces[3 * f + k]].discard(f)
            self.alive[f] = False
            self.face_count -= 1

        for f in sorted(self.vert_faces[v]):
            for k in range(3):
                if faces[3 * f + k] == v:
                    faces[3 * f + k] = u
            self.vert_faces[u].add(f)
        self.vert_faces[v] = set()

    def _push_edge(self, a, b):
        cost, x, y, z = self._edge_cost(a, b)
        version = self.edge_version.get((a, b), 0) + 1
        self.edge_version[(a, b)] = version
        heapq.heappush(self.heap, (cost, self.tick, version, a, b, x, y, z))
        self.tick += 1

    def _push_edges_of(self, u):
        neighbors = set()
        for f in self.vert_faces[u]:
            for k in range(3):
                w = self.faces[3 * f + k]
                if w != u:
                    neighbors.add(w)
        for w in sorted(neighbors):
            self._push_edge(min(u, w), max(u, w))

    def _push_all_edges(self):
        edges = set()
        for f in range(self.nf):
            if not self.alive[f]:
                continue
            i0, i1, i2 = self.faces[3 * f], self.faces[3 * f + 1], self.faces[3 * f + 2]
            for a, b in ((i0, i1), (i1, i2), (i2, i0)):
                edges.add((a, b) if a < b else (b, a))
        for a, b in sorted(edges):
            self._push_edge(a, b)

    # --- driver ------------------------------------------------------------------

    def run(self):
        if self.face_count > self.target:
            self._accumulate_quadrics()
            self._build_adjacency()
            self._push_all_edges()
            for phase in (0, 1):
                if phase == 1:
                    # interior collapses exhausted; re-arm every remaining
                    # edge with boundary protection lifted
                    self.heap = []
                    self._push_all_edges()
                allow_boundary = phase == 1
                while self.face_count > self.target and self.heap:
                    cost, _tick, version, a, b, x, y, z = heapq.heappop(self.heap)
                    if self.edge_version.get((a, b)) != version:
                        continue
                    if not self._collapse_legal(a, b, x, y, z, allow_boundary):
                        continue
                    self._do_collapse(a, b, x, y, z)
                    self._push_edges_of(a)
                if self.face_count <= self.target:
                    break
            if self.face_count > self.target:
                return None
        return self._extract()

    def _extract(self):
        pos, faces = self.pos, self.faces
        new_index = {}
        out_pos = []
        out_faces = []
        orig = []
        for f in range(self.nf):
            if not self.alive[f]:
                continue
            i0, i1, i2 = faces[3 * f], faces[3 * f + 1], faces[3 * f + 2]
            ox, oy, oz = self._cross_sub(f, -1, -1, 0.0, 0.0, 0.0)
            if ox * ox + oy * oy + oz * oz <= _DEGEN_CROSS_SQ:
                continue  # never emit a degenerate triangle
            for v in (i0, i1, i2):
                idx = new_index.get(v)
                if idx is None:
                    idx = len(orig)
                    new_index[v] = idx
                    orig.append(v)
                    out_pos.extend((pos[3 * v], pos[3 * v + 1], pos[3 * v + 2]))
                out_faces.append(idx)
        return out_pos, out_faces, orig


def decimate_arrays(pos, faces, target):
    """Collapse edges until at most `target` triangles remain.

    Returns (positions, faces, orig_vertex) as flat lists, or None when the
    target is unreachable without destroying the mesh.
    """
    if target < 1:
        raise ValueError("target must be >= 1")
    return Decimator(pos, faces, target).run()
