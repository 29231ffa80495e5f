use super::mesh::TriMesh;
use crate::linalg::Vector;
use alloc::vec::Vec;
use num_traits::Float;
use robust::{orient2d, orient3d, Coord, Coord3D};

const LEAF_SIZE: usize = 4;

type Tri = [Vector<3>; 3];

fn c3(p: &Vector<3>) -> Coord3D<f64> {
    Coord3D {
        x: p[0],
        y: p[1],
        z: p[2],
    }
}

/// `det[a − d, b − d, c − d]`, exact sign.
fn orient(a: &Vector<3>, b: &Vector<3>, c: &Vector<3>, d: &Vector<3>) -> f64 {
    orient3d(c3(a), c3(b), c3(c), c3(d))
}

fn o2(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    orient2d(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
    )
}

fn segments_meet(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let (d1, d2) = (o2(a, b, c), o2(a, b, d));
    let (d3, d4) = (o2(c, d, a), o2(c, d, b));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return true;
    }
    let on = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        r[0] >= p[0].min(q[0])
            && r[0] <= p[0].max(q[0])
            && r[1] >= p[1].min(q[1])
            && r[1] <= p[1].max(q[1])
    };
    (d1 == 0.0 && on(a, b, c))
        || (d2 == 0.0 && on(a, b, d))
        || (d3 == 0.0 && on(c, d, a))
        || (d4 == 0.0 && on(c, d, b))
}

fn inside2(t: &[[f64; 2]; 3], p: [f64; 2]) -> bool {
    let s = [o2(t[0], t[1], p), o2(t[1], t[2], p), o2(t[2], t[0], p)];
    (s.iter().all(|&x| x >= 0.0)) || (s.iter().all(|&x| x <= 0.0))
}

fn coplanar_overlap(a: &Tri, b: &Tri) -> bool {
    let n = crate::linalg::cross3(
        &crate::linalg::sub(&a[1], &a[0]),
        &crate::linalg::sub(&a[2], &a[0]),
    );
    let drop = if n[0].abs() >= n[1].abs() && n[0].abs() >= n[2].abs() {
        0
    } else if n[1].abs() >= n[2].abs() {
        1
    } else {
        2
    };
    let proj = |p: &Vector<3>| match drop {
        0 => [p[1], p[2]],
        1 => [p[0], p[2]],
        _ => [p[0], p[1]],
    };
    let ta = [proj(&a[0]), proj(&a[1]), proj(&a[2])];
    let tb = [proj(&b[0]), proj(&b[1]), proj(&b[2])];
    for i in 0..3 {
        for j in 0..3 {
            if segments_meet(ta[i], ta[(i + 1) % 3], tb[j], tb[(j + 1) % 3]) {
                return true;
            }
        }
    }
    inside2(&ta, tb[0]) || inside2(&tb, ta[0])
}

fn check_min_max(
    p1: &Vector<3>,
    q1: &Vector<3>,
    r1: &Vector<3>,
    p2: &Vector<3>,
    q2: &Vector<3>,
    r2: &Vector<3>,
) -> bool {
    !(orient(q2, p2, p1, q1) > 0.0 || orient(r2, p2, r1, p1) > 0.0)
}

#[allow(clippy::too_many_arguments)]
fn tri_tri_3d(
    p1: &Vector<3>,
    q1: &Vector<3>,
    r1: &Vector<3>,
    p2: &Vector<3>,
    q2: &Vector<3>,
    r2: &Vector<3>,
    dp2: f64,
    dq2: f64,
    dr2: f64,
    a: &Tri,
    b: &Tri,
) -> bool {
    if dp2 > 0.0 {
        if dq2 > 0.0 {
            check_min_max(p1, r1, q1, r2, p2, q2)
        } else if dr2 > 0.0 {
            check_min_max(p1, r1, q1, q2, r2, p2)
        } else {
            check_min_max(p1, q1, r1, p2, q2, r2)
        }
    } else if dp2 < 0.0 {
        if dq2 < 0.0 {
            check_min_max(p1, q1, r1, r2, p2, q2)
        } else if dr2 < 0.0 {
            check_min_max(p1, q1, r1, q2, r2, p2)
        } else {
            check_min_max(p1, r1, q1, p2, q2, r2)
        }
    } else if dq2 < 0.0 {
        if dr2 >= 0.0 {
            check_min_max(p1, r1, q1, q2, r2, p2)
        } else {
            check_min_max(p1, q1, r1, p2, q2, r2)
        }
    } else if dq2 > 0.0 {
        if dr2 > 0.0 {
            check_min_max(p1, r1, q1, p2, q2, r2)
        } else {
            check_min_max(p1, q1, r1, q2, r2, p2)
        }
    } else if dr2 > 0.0 {
        check_min_max(p1, q1, r1, r2, p2, q2)
    } else if dr2 < 0.0 {
        check_min_max(p1, r1, q1, r2, p2, q2)
    } else {
        coplanar_overlap(a, b)
    }
}

/// Whether two closed triangles share a point (Guigue–Devillers, with
/// exact orientation predicates).
pub fn triangles_intersect(a: &Tri, b: &Tri) -> bool {
    let [p1, q1, r1] = a;
    let [p2, q2, r2] = b;
    let dp1 = orient(p1, p2, q2, r2);
    let dq1 = orient(q1, p2, q2, r2);
    let dr1 = orient(r1, p2, q2, r2);
    if dp1 * dq1 > 0.0 && dp1 * dr1 > 0.0 {
        return false;
    }
    let dp2 = orient(p2, p1, q1, r1);
    let dq2 = orient(q2, p1, q1, r1);
    let dr2 = orient(r2, p1, q1, r1);
    if dp2 * dq2 > 0.0 && dp2 * dr2 > 0.0 {
        return false;
    }
    let t = |p1, q1, r1, p2, q2, r2, dp2, dq2, dr2| {
        tri_tri_3d(p1, q1, r1, p2, q2, r2, dp2, dq2, dr2, a, b)
    };
    if dp1 > 0.0 {
        if dq1 > 0.0 {
            t(r1, p1, q1, p2, r2, q2, dp2, dr2, dq2)
        } else if dr1 > 0.0 {
            t(q1, r1, p1, p2, r2, q2, dp2, dr2, dq2)
        } else {
            t(p1, q1, r1, p2, q2, r2, dp2, dq2, dr2)
        }
    } else if dp1 < 0.0 {
        if dq1 < 0.0 {
            t(r1, p1, q1, p2, q2, r2, dp2, dq2, dr2)
        } else if dr1 < 0.0 {
            t(q1, r1, p1, p2, q2, r2, dp2, dq2, dr2)
        } else {
            t(p1, q1, r1, p2, r2, q2, dp2, dr2, dq2)
        }
    } else if dq1 < 0.0 {
        if dr1 >= 0.0 {
            t(q1, r1, p1, p2, r2, q2, dp2, dr2, dq2)
        } else {
            t(p1, q1, r1, p2, q2, r2, dp2, dq2, dr2)
        }
    } else if dq1 > 0.0 {
        if dr1 > 0.0 {
            t(p1, q1, r1, p2, r2, q2, dp2, dr2, dq2)
        } else {
            t(q1, r1, p1, p2, q2, r2, dp2, dq2, dr2)
        }
    } else if dr1 > 0.0 {
        t(r1, p1, q1, p2, q2, r2, dp2, dq2, dr2)
    } else if dr1 < 0.0 {
        t(r1, p1, q1, p2, r2, q2, dp2, dr2, dq2)
    } else {
        coplanar_overlap(a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Aabb {
    lo: Vector<3>,
    hi: Vector<3>,
}

impl Aabb {
    fn of(t: &Tri) -> Self {
        let mut b = Self { lo: t[0], hi: t[0] };
        for p in &t[1..] {
            for k in 0..3 {
                b.lo[k] = b.lo[k].min(p[k]);
                b.hi[k] = b.hi[k].max(p[k]);
            }
        }
        b
    }

    fn join(&self, o: &Self) -> Self {
        Self {
            lo: core::array::from_fn(|k| self.lo[k].min(o.lo[k])),
            hi: core::array::from_fn(|k| self.hi[k].max(o.hi[k])),
        }
    }

    fn overlaps(&self, o: &Self) -> bool {
        (0..3).all(|k| self.lo[k] <= o.hi[k] && o.lo[k] <= self.hi[k])
    }

    fn shifted(&self, s: &Vector<3>) -> Self {
        Self {
            lo: core::array::from_fn(|k| self.lo[k] + s[k]),
            hi: core::array::from_fn(|k| self.hi[k] + s[k]),
        }
    }
}

enum Node {
    Leaf {
        bounds: Aabb,
        items: Vec<usize>,
    },
    Inner {
        bounds: Aabb,
        left: usize,
        right: usize,
    },
}

/// Bounding-volume hierarchy over triangle boxes (median split on the
/// widest centroid axis).
pub struct Bvh {
    nodes: Vec<Node>,
    boxes: Vec<Aabb>,
}

impl Bvh {
    fn build(boxes: Vec<Aabb>) -> Self {
        let mut bvh = Self {
            nodes: Vec::new(),
            boxes,
        };
        let items: Vec<usize> = (0..bvh.boxes.len()).collect();
        if !items.is_empty() {
            bvh.build_node(items);
        }
        bvh
    }

    fn build_node(&mut self, mut items: Vec<usize>) -> usize {
        let bounds = items[1..]
            .iter()
            .fold(self.boxes[items[0]], |b, &i| b.join(&self.boxes[i]));
        if items.len() <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { bounds, items });
            return self.nodes.len() - 1;
        }
        let centre = |b: &Aabb, k: usize| b.lo[k] + b.hi[k];
        let ext: [f64; 3] = core::array::from_fn(|k| bounds.hi[k] - bounds.lo[k]);
        let axis = if ext[0] >= ext[1] && ext[0] >= ext[2] {
            0
        } else if ext[1] >= ext[2] {
            1
        } else {
            2
        };
        let mid = items.len() / 2;
        let boxes = &self.boxes;
        items.select_nth_unstable_by(mid, |&a, &b| {
            centre(&boxes[a], axis).total_cmp(&centre(&boxes[b], axis))
        });
        let right_items = items.split_off(mid);
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf {
            bounds,
            items: Vec::new(),
        });
        let left = self.build_node(items);
        let right = self.build_node(right_items);
        self.nodes[slot] = Node::Inner {
            bounds,
            left,
            right,
        };
        slot
    }

    fn query(&self, q: &Aabb, out: &mut Vec<usize>) {
        if self.nodes.is_empty() {
            return;
        }
        let mut stack = alloc::vec![0usize];
        while let Some(n) = stack.pop() {
            match &self.nodes[n] {
                Node::Leaf { bounds, items } => {
                    if bounds.overlaps(q) {
                        out.extend(items.iter().copied().filter(|&i| self.boxes[i].overlaps(q)));
                    }
                }
                Node::Inner {
                    bounds,
                    left,
                    right,
                } => {
                    if bounds.overlaps(q) {
                        stack.push(*left);
                        stack.push(*right);
                    }
                }
            }
        }
    }
}

/// An intersecting pair: triangle `b` translated by `shift` periods meets `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntersectingPair {
    pub a: usize,
    pub b: usize,
    pub shift: [i32; 3],
}

fn shifts(mesh: &TriMesh, tris: &[Tri]) -> Vec<[i32; 3]> {
    let mut range = [0i32; 3];
    for k in 0..3 {
        if let Some(p) = mesh.periods[k] {
            let (lo, hi) = tris
                .iter()
                .flatten()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                    (l.min(v[k]), h.max(v[k]))
                });
            range[k] = ((hi - lo) / p).ceil() as i32 + 1;
        }
    }
    let mut out = Vec::new();
    for i in -range[0]..=range[0] {
        for j in -range[1]..=range[1] {
            for k in -range[2]..=range[2] {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// All pairs of triangles that meet, except pairs sharing a vertex in place
/// (shift zero). Periodic coordinates are handled by testing translated
/// copies. Sorted and deduplicated.
pub fn self_intersect(mesh: &TriMesh) -> Vec<IntersectingPair> {
    let tris: Vec<Tri> = (0..mesh.triangles.len())
        .map(|t| mesh.triangle_points(t))
        .collect();
    let bvh = Bvh::build(tris.iter().map(Aabb::of).collect());
    let mut pairs = Vec::new();
    let mut hits = Vec::new();
    for s in shifts(mesh, &tris) {
        let offset: Vector<3> =
            core::array::from_fn(|k| mesh.periods[k].map_or(0.0, |p| p * s[k] as f64));
        let zero = s == [0, 0, 0];
        for (a, ta) in tris.iter().enumerate() {
            // b + offset meets a  ⇔  b meets a − offset
            hits.clear();
            bvh.query(&Aabb::of(ta).shifted(&offset.map(|x| -x)), &mut hits);
            for &b in &hits {
                if zero && b <= a {
                    continue;
                }
                if !zero && a == b {
                    continue;
                }
                if zero
                    && mesh.triangles[a]
                        .iter()
                        .any(|v| mesh.triangles[b].contains(v))
                {
                    continue;
                }
                let tb: Tri =
                    core::array::from_fn(|i| core::array::from_fn(|k| tris[b][i][k] + offset[k]));
                if triangles_intersect(ta, &tb) {
                    pairs.push(IntersectingPair { a, b, shift: s });
                }
            }
        }
    }
    // (a, b, s) and (b, a, −s) describe the same contact
    for p in &mut pairs {
        if p.a > p.b {
            *p = IntersectingPair {
                a: p.b,
                b: p.a,
                shift: p.shift.map(|x| -x),
            };
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> Tri {
        [a, b, c]
    }

    #[test]
    fn orient_sign_convention() {
        let d = orient(
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0],
            &[0.0, 0.0, -1.0],
        );
        assert!(d > 0.0);
    }

    #[test]
    fn crossing_triangles_intersect() {
        let a = tri([0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 2.0, 0.0]);
        let b = tri([0.5, 0.5, -1.0], [0.5, 0.5, 1.0], [3.0, 3.0, 0.5]);
        assert!(triangles_intersect(&a, &b));
        assert!(triangles_intersect(&b, &a));
    }

    #[test]
    fn separated_triangles_do_not() {
        let a = tri([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let b = tri([0.0, 0.0, 0.1], [1.0, 0.0, 0.1], [0.0, 1.0, 0.1]);
        assert!(!triangles_intersect(&a, &b));
        let c = tri([2.0, 2.0, -1.0], [2.0, 2.0, 1.0], [3.0, 2.0, 0.0]);
        assert!(!triangles_intersect(&a, &c));
        // plane of b crosses a's plane but outside a
        let d = tri([1.0, 1.0, -1.0], [1.0, 1.0, 1.0], [2.0, 0.5, 0.0]);
        assert!(!triangles_intersect(&a, &d));
    }

    #[test]
    fn coplanar_cases() {
        let a = tri([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let inside = tri([0.1, 0.1, 0.0], [0.3, 0.1, 0.0], [0.1, 0.3, 0.0]);
        let apart = tri([2.0, 2.0, 0.0], [3.0, 2.0, 0.0], [2.0, 3.0, 0.0]);
        assert!(triangles_intersect(&a, &inside));
        assert!(!triangles_intersect(&a, &apart));
    }

    #[test]
    fn periodic_copy_is_detected() {
        // two vertical strips that overlap only after shifting y by the period
        let m = TriMesh::new(
            alloc::vec![
                [0.0, 9.0, -1.0],
                [0.0, 9.0, 1.0],
                [0.0, 11.0, 0.0],
                [-1.0, 0.5, 0.0],
                [1.0, 0.5, 0.0],
                [0.0, 0.5, 2.0],
            ],
            alloc::vec![[0, 1, 2], [3, 4, 5]],
        );
        assert!(self_intersect(&m).is_empty());
        let m = m.with_periods([None, Some(10.0), None]);
        assert_eq!(self_intersect(&m).len(), 1);
    }
}
