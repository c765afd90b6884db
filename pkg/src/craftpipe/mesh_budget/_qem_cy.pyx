# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Quadric edge-collapse decimation, compiled kernel.

Typed twin of ``_qem_py``: the algorithm, candidate order, tie-breaking and
float expression order are identical (the extension is built with
-ffp-contract=off so C arithmetic matches CPython's), only the inner math
runs as C. See _qem_py for the algorithm description.
"""

import heapq

from libc.math cimport fabs, isfinite, sqrt

cdef double DEGENERATE_AREA = 1e-12
cdef double DET_EPS = 1e-12
cdef double BOX_SLACK_FRACTION = 0.0025
cdef double _DEGEN_CROSS_SQ = (2.0 * DEGENERATE_AREA) ** 2


cdef inline double _det3(double a11, double a12, double a13,
                         double a21, double a22, double a23,
                         double a31, double a32, double a33) nogil:
    return (a11 * (a22 * a33 - a23 * a32)
            - a12 * (a21 * a33 - a23 * a31)
            + a13 * (a21 * a32 - a22 * a31))


cdef class Decimator:
    cdef double[::1] pos
    cdef long long[::1] faces
    cdef double[::1] quad
    cdef unsigned char[::1] alive
    cdef Py_ssize_t nv, nf
    cdef long long target, face_count, tick
    cdef double box_lo[3]
    cdef double box_hi[3]
    cdef list vert_faces
    cdef list heap
    cdef dict edge_version

    def __init__(self, pos, faces, target):
        import array

        self.pos = array.array("d", pos)
        self.faces = array.array("q", faces)
        self.target = target
        self.nv = len(pos) // 3
        self.nf = len(faces) // 3

        self.alive = array.array("B", b"\x01" * self.nf) if self.nf else \
            array.array("B")
        self.face_count = 0
        cdef Py_ssize_t f
        cdef long long a, b, c
        for f in range(self.nf):
            a = self.faces[3 * f]
            b = self.faces[3 * f + 1]
            c = self.faces[3 * f + 2]
            if a == b or b == c or a == c:
                self.alive[f] = 0
            else:
                self.face_count += 1

        self.quad = array.array("d", bytes(8 * 10 * self.nv)) if self.nv else \
            array.array("d")
        self.vert_faces = [set() for _ in range(self.nv)]
        self.heap = []
        self.edge_version = {}
        self.tick = 0

        cdef double lo0 = 1e308, lo1 = 1e308, lo2 = 1e308
        cdef double hi0 = -1e308, hi1 = -1e308, hi2 = -1e308
        cdef Py_ssize_t v
        cdef double cx
        for v in range(self.nv):
            cx = self.pos[3 * v]
            if cx < lo0: lo0 = cx
            if cx > hi0: hi0 = cx
            cx = self.pos[3 * v + 1]
            if cx < lo1: lo1 = cx
            if cx > hi1: hi1 = cx
            cx = self.pos[3 * v + 2]
            if cx < lo2: lo2 = cx
            if cx > hi2: hi2 = cx
        cdef double span = 0.0
        if hi0 - lo0 > span: span = hi0 - lo0
        if hi1 - lo1 > span: span = hi1 - lo1
        if hi2 - lo2 > span: span = hi2 - lo2
        cdef double slack = span * BOX_SLACK_FRACTION
        self.box_lo[0] = lo0 - slack
        self.box_lo[1] = lo1 - slack
        self.box_lo[2] = lo2 - slack
        self.box_hi[0] = hi0 + slack
        self.box_hi[1] = hi1 + slack
        self.box_hi[2] = hi2 + slack

    # --- setup -----------------------------------------------------------------

    cdef void _accumulate_quadrics(self):
        cdef Py_ssize_t f
        cdef long long i0, i1, i2, v
        cdef double ax, ay, az, e1x, e1y, e1z, e2x, e2y, e2z
        cdef double nx, ny, nz, norm, a, b, c, d
        cdef Py_ssize_t q
        cdef int k
        cdef long long corners[3]
        for f in range(self.nf):
            if not self.alive[f]:
                continue
            i0 = self.faces[3 * f]
            i1 = self.faces[3 * f + 1]
            i2 = self.faces[3 * f + 2]
            ax = self.pos[3 * i0]
            ay = self.pos[3 * i0 + 1]
            az = self.pos[3 * i0 + 2]
            e1x = self.pos[3 * i1] - ax
            e1y = self.pos[3 * i1 + 1] - ay
            e1z = self.pos[3 * i1 + 2] - az
            e2x = self.pos[3 * i2] - ax
            e2y = self.pos[3 * i2 + 1] - ay
            e2z = self.pos[3 * i2 + 2] - az
            nx = e1y * e2z - e1z * e2y
            ny = e1z * e2x - e1x * e2z
            nz = e1x * e2y - e1y * e2x
            norm = sqrt(nx * nx + ny * ny + nz * nz)
            if norm <= 2.0 * DEGENERATE_AREA:
                continue
            a = nx / norm
            b = ny / norm
            c = nz / norm
            d = -(a * ax + b * ay + c * az)
            corners[0] = i0
            corners[1] = i1
            corners[2] = i2
            for k in range(3):
                v = corners[k]
                q = 10 * v
                self.quad[q] += a * a
                self.quad[q + 1] += a * b
                self.quad[q + 2] += a * c
                self.quad[q + 3] += a * d
                self.quad[q + 4] += b * b
                self.quad[q + 5] += b * c
                self.quad[q + 6] += b * d
                self.quad[q + 7] += c * c
                self.quad[q + 8] += c * d
                self.quad[q + 9] += d * d

    cdef void _build_adjacency(self):
        cdef Py_ssize_t f
        cdef int k
        for f in range(self.nf):
            if not self.alive[f]:
                continue
            for k in range(3):
                (<set>self.vert_faces[self.faces[3 * f + k]]).add(f)

    # --- cost ------------------------------------------------------------------

    cdef inline double _cost_at10(self, double aa, double ab, double ac, double ad,
                                  double bb, double bc, double bd, double cc,
                                  double cd, double dd,
                                  double x, double y, double z) nogil:
        return (aa * x * x + bb * y * y + cc * z * z + dd) + 2.0 * (
            ab * x * y + ac * x * z + bc * y * z + ad * x + bd * y + cd * z
        )

    cdef tuple _edge_cost(self, long long u, long long v):
        cdef Py_ssize_t qu = 10 * u
        cdef Py_ssize_t qv = 10 * v
        cdef double aa = self.quad[qu] + self.quad[qv]
        cdef double ab = self.quad[qu + 1] + self.quad[qv + 1]
        cdef double ac = self.quad[qu + 2] + self.quad[qv + 2]
        cdef double ad = self.quad[qu + 3] + self.quad[qv + 3]
        cdef double bb = self.quad[qu + 4] + self.quad[qv + 4]
        cdef double bc = self.quad[qu + 5] + self.quad[qv + 5]
        cdef double bd = self.quad[qu + 6] + self.quad[qv + 6]
        cdef double cc = self.quad[qu + 7] + self.quad[qv + 7]
        cdef double cd = self.quad[qu + 8] + self.quad[qv + 8]
        cdef double dd = self.quad[qu + 9] + self.quad[qv + 9]

        cdef double ux = self.pos[3 * u]
        cdef double uy = self.pos[3 * u + 1]
        cdef double uz = self.pos[3 * u + 2]
        cdef double vx = self.pos[3 * v]
        cdef double vy = self.pos[3 * v + 1]
        cdef double vz = self.pos[3 * v + 2]

        cdef double best_cost = float("inf")
        cdef double bx = ux, by = uy, bz = uz
        cdef double det, r0, r1, r2, x, y, z, co

        det = _det3(aa, ab, ac, ab, bb, bc, ac, bc, cc)
        if fabs(det) > DET_EPS:
            r0 = -ad
            r1 = -bd
            r2 = -cd
            x = _det3(r0, ab, ac, r1, bb, bc, r2, bc, cc) / det
            y = _det3(aa, r0, ac, ab, r1, bc, ac, r2, cc) / det
            z = _det3(aa, ab, r0, ab, bb, r1, ac, bc, r2) / det
            if (isfinite(x) and isfinite(y) and isfinite(z)
                    and self.box_lo[0] <= x <= self.box_hi[0]
                    and self.box_lo[1] <= y <= self.box_hi[1]
                    and self.box_lo[2] <= z <= self.box_hi[2]):
                co = self._cost_at10(aa, ab, ac, ad, bb, bc, bd, cc, cd, dd, x, y, z)
                if isfinite(co):
                    best_cost = co
                    bx = x
                    by = y
                    bz = z

        cdef double mx = (ux + vx) / 2.0
        cdef double my = (uy + vy) / 2.0
        cdef double mz = (uz + vz) / 2.0
        cdef double cand[9]
        cand[0] = mx; cand[1] = my; cand[2] = mz
        cand[3] = ux; cand[4] = uy; cand[5] = uz
        cand[6] = vx; cand[7] = vy; cand[8] = vz
        cdef int i
        for i in range(3):
            x = cand[3 * i]
            y = cand[3 * i + 1]
            z = cand[3 * i + 2]
            co = self._cost_at10(aa, ab, ac, ad, bb, bc, bd, cc, cd, dd, x, y, z)
            if isfinite(co) and co < best_cost:
                best_cost = co
                bx = x
                by = y
                bz = z
        if not isfinite(best_cost):
            best_cost = float("inf")
        return (best_cost, bx, by, bz)

    # --- legality --------------------------------------------------------------

    cdef bint _is_boundary_vertex(self, long long v):
        cdef set vf = <set>self.vert_faces[v]
        cdef set neighbors = set()
        cdef int k
        cdef long long w
        for f in vf:
            for k in range(3):
                w = self.faces[3 * <Py_ssize_t>f + k]
                if w != v:
                    neighbors.add(w)
        for wobj in neighbors:
            if len(vf & (<set>self.vert_faces[wobj])) == 1:
                return True
        return False

    cdef void _cross_sub(self, Py_ssize_t f, long long sub_a, long long sub_b,
                         double x, double y, double z, double* out):
        cdef double co[9]
        cdef int k
        cdef long long w
        for k in range(3):
            w = self.faces[3 * f + k]
            if w == sub_a or w == sub_b:
                co[3 * k] = x
                co[3 * k + 1] = y
                co[3 * k + 2] = z
            else:
                co[3 * k] = self.pos[3 * w]
                co[3 * k + 1] = self.pos[3 * w + 1]
                co[3 * k + 2] = self.pos[3 * w + 2]
        cdef double e1x = co[3] - co[0]
        cdef double e1y = co[4] - co[1]
        cdef double e1z = co[5] - co[2]
        cdef double e2x = co[6] - co[0]
        cdef double e2y = co[7] - co[1]
        cdef double e2z = co[8] - co[2]
        out[0] = e1y * e2z - e1z * e2y
        out[1] = e1z * e2x - e1x * e2z
        out[2] = e1x * e2y - e1y * e2x

    cdef bint _collapse_legal(self, long long u, long long v,
                              double x, double y, double z, bint allow_boundary):
        cdef set fu = <set>self.vert_faces[u]
        cdef set fv = <set>self.vert_faces[v]
        cdef set shared = fu & fv
        if not shared:
            return False
        if not allow_boundary and (
            self._is_boundary_vertex(u) or self._is_boundary_vertex(v)
        ):
            return False

        cdef list opp = []
        cdef int k
        cdef long long w
        for fobj in sorted(shared):
            for k in range(3):
                w = self.faces[3 * <Py_ssize_t>fobj + k]
                if w != u and w != v:
                    opp.append(w)
        if len(set(opp)) != len(opp):
            return False
        cdef set nu = set()
        for fobj in fu:
            for k in range(3):
                nu.add(self.faces[3 * <Py_ssize_t>fobj + k])
        cdef set nv = set()
        for fobj in fv:
            for k in range(3):
                nv.add(self.faces[3 * <Py_ssize_t>fobj + k])
        nu.discard(u)
        nu.discard(v)
        nv.discard(u)
        nv.discard(v)
        if (nu & nv) != set(opp):
            return False

        # surviving faces must stay unique (a tetrahedron must not fold into
        # a doubled triangle), keep positive area, and must not flip
        cdef double o[3]
        cdef double n[3]
        cdef double new_sq, old_sq
        cdef long long m0, m1, m2, tmp
        cdef Py_ssize_t f
        cdef set seen = set()
        for fobj in sorted((fu | fv) - shared):
            f = <Py_ssize_t>fobj
            m0 = self.faces[3 * f]
            m1 = self.faces[3 * f + 1]
            m2 = self.faces[3 * f + 2]
            if m0 == v: m0 = u
            if m1 == v: m1 = u
            if m2 == v: m2 = u
            if m0 > m1: tmp = m0; m0 = m1; m1 = tmp
            if m1 > m2: tmp = m1; m1 = m2; m2 = tmp
            if m0 > m1: tmp = m0; m0 = m1; m1 = tmp
            key = (m0, m1, m2)
            if key in seen:
                return False
            seen.add(key)
            self._cross_sub(f, -1, -1, 0.0, 0.0, 0.0, o)
            self._cross_sub(f, u, v, x, y, z, n)
            new_sq = n[0] * n[0] + n[1] * n[1] + n[2] * n[2]
            if new_sq <= _DEGEN_CROSS_SQ:
                return False
            old_sq = o[0] * o[0] + o[1] * o[1] + o[2] * o[2]
            if old_sq > _DEGEN_CROSS_SQ and (
                o[0] * n[0] + o[1] * n[1] + o[2] * n[2]
            ) <= 0.0:
                return False
        return True

    # --- mutation --------------------------------------------------------------

    cdef void _do_collapse(self, long long u, long long v,
                           double x, double y, double z):
        self.pos[3 * u] = x
        self.pos[3 * u + 1] = y
        self.pos[3 * u + 2] = z
        cdef int k
        for k in range(10):
            self.quad[10 * u + k] += self.quad[10 * v + k]

        cdef set fu = <set>self.vert_faces[u]
        cdef set fv = <set>self.vert_faces[v]
        cdef Py_ssize_t f
        for fobj in sorted(fu & fv):
            f = <Py_ssize_t>fobj
            for k in range(3):
                (<set>self.vert_faces[self.faces[3 * f + k]]).discard(fobj)
            self.alive[f] = 0
            self.face_count -= 1

        for fobj in sorted(fv):
            f = <Py_ssize_t>fobj
            for k in range(3):
                if self.faces[3 * f + k] == v:
                    self.faces[3 * f + k] = u
            fu.add(fobj)
        self.vert_faces[v] = set()

    cdef void _push_edge(self, long long a, long long b):
        cdef tuple cost = self._edge_cost(a, b)
        key = (a, b)
        version = self.edge_version.get(key, 0) + 1
        self.edge_version[key] = version
        heapq.heappush(
            self.heap,
            (cost[0], self.tick, version, a, b, cost[1], cost[2], cost[3]),
        )
        self.tick += 1

    cdef void _push_edges_of(self, long long u):
        cdef set neighbors = set()
        cdef int k
        cdef long long w
        for fobj in <set>self.vert_faces[u]:
            for k in range(3):
                w = self.faces[3 * <Py_ssize_t>fobj + k]
                if w != u:
                    neighbors.add(w)
        cdef long long ww
        for wobj in sorted(neighbors):
            ww = wobj
            if u < ww:
                self._push_edge(u, ww)
            else:
                self._push_edge(ww, u)

    cdef void _push_all_edges(self):
        cdef set edges = set()
        cdef Py_ssize_t f
        cdef long long i0, i1, i2
        for f in range(self.nf):
            if not self.alive[f]:
                continue
            i0 = self.faces[3 * f]
            i1 = self.faces[3 * f + 1]
            i2 = self.faces[3 * f + 2]
            edges.add((i0, i1) if i0 < i1 else (i1, i0))
            edges.add((i1, i2) if i1 < i2 else (i2, i1))
            edges.add((i2, i0) if i2 < i0 else (i0, i2))
        for e in sorted(edges):
            self._push_edge(e[0], e[1])

    # --- driver ----------------------------------------------------------------

    def run(self):
        cdef int phase
        cdef bint allow_boundary
        cdef long long a, b
        cdef double x, y, z
        if self.face_count > self.target:
            self._accumulate_quadrics()
            self._build_adjacency()
            self._push_all_edges()
            for phase in range(2):
                if phase == 1:
                    # interior collapses exhausted; re-arm every remaining
                    # edge with boundary protection lifted
                    self.heap = []
                    self._push_all_edges()
                allow_boundary = phase == 1
                while self.face_count > self.target and self.heap:
                    entry = heapq.heappop(self.heap)
                    a = entry[3]
                    b = entry[4]
                    if self.edge_version.get((entry[3], entry[4])) != entry[2]:
                        continue
                    x = entry[5]
                    y = entry[6]
                    z = entry[7]
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
        cdef dict new_index = {}
        cdef list out_pos = []
        cdef list out_faces = []
        cdef list orig = []
        cdef Py_ssize_t f
        cdef int k
        cdef long long v
        cdef double o[3]
        cdef long long corners[3]
        for f in range(self.nf):
            if not self.alive[f]:
                continue
            self._cross_sub(f, -1, -1, 0.0, 0.0, 0.0, o)
            if o[0] * o[0] + o[1] * o[1] + o[2] * o[2] <= _DEGEN_CROSS_SQ:
                continue
            corners[0] = self.faces[3 * f]
            corners[1] = self.faces[3 * f + 1]
            corners[2] = self.faces[3 * f + 2]
            for k in range(3):
                v = corners[k]
                idx = new_index.get(v)
                if idx is None:
                    idx = len(orig)
                    new_index[v] = idx
                    orig.append(v)
                    out_pos.append(self.pos[3 * v])
                    out_pos.append(self.pos[3 * v + 1])
                    out_pos.append(self.pos[3 * v + 2])
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
