//! Hand-built diagrams used by tests and the CLI demos.

use super::{DiagramBuilder, Dart, DiskDiagram};
use crate::words::{Letter, Word};

const A: Letter = Letter(0);
const B: Letter = Letter(2);

/// Polygon with one face reading `w`.
pub fn single_face(w: &Word, sides: Vec<usize>) -> DiskDiagram {
    let n = w.len();
    let mut b = DiagramBuilder::new(n);
    let darts: Vec<Dart> = (0..n).map(|i| b.edge(i, (i + 1) % n, w.0[i])).collect();
    b.face(darts.clone());
    b.boundary(darts, sides);
    b.build()
}

/// Two faces sharing the first edge of `first`; `second` must begin with
/// its inverse letter.
pub fn glued_pair_with(first: &Word, second: &Word) -> DiskDiagram {
    assert_eq!(second.0[0], first.0[0].inverse());
    let n = first.len();
    let mut b = DiagramBuilder::new(n);
    let f1: Vec<Dart> = (0..n).map(|i| b.edge(i, (i + 1) % n, first.0[i])).collect();
    let tail = b.path(0, 1, &second.0[1..]);
    b.face(f1.clone());
    let mut f2 = vec![-f1[0]];
    f2.extend(&tail);
    b.face(f2);
    let mut boundary = f1[1..].to_vec();
    boundary.extend(tail);
    b.boundary(boundary, vec![]);
    b.build()
}

/// `r` glued to the rotation of `r` that starts with the inverse of `r[0]`.
pub fn glued_pair(r: &Word) -> DiskDiagram {
    let k = (0..r.len()).find(|&k| r.0[k] == r.0[0].inverse()).expect("letter and inverse both occur");
    glued_pair_with(r, &r.rotate(k))
}

/// Chain of `k` faces between two sides of length `k·seg`; rungs are single
/// edges and the end faces hold the corners.
pub fn ladder(k: usize, seg: usize) -> DiskDiagram {
    let l = k * seg;
    let mut b = DiagramBuilder::new(2);
    let (p, q) = (0, 1);
    let mut top = vec![p];
    let mut bottom = vec![p];
    for _ in 1..l {
        top.push(b.vertex());
        bottom.push(b.vertex());
    }
    top.push(q);
    bottom.push(q);
    let bot: Vec<Dart> = (0..l).map(|i| b.edge(bottom[i], bottom[i + 1], A)).collect();
    let tp: Vec<Dart> = (0..l).map(|i| b.edge(top[i], top[i + 1], A)).collect();
    let rung: Vec<Dart> = (0..=k).map(|j| if j == 0 || j == k { 0 } else { b.edge(bottom[j * seg], top[j * seg], B) }).collect();
    for j in 0..k {
        let mut f: Vec<Dart> = bot[j * seg..(j + 1) * seg].to_vec();
        if j + 1 < k {
            f.push(rung[j + 1]);
        }
        f.extend(tp[j * seg..(j + 1) * seg].iter().rev().map(|&d| -d));
        if j > 0 {
            f.push(-rung[j]);
        }
        b.face(f);
    }
    let mut boundary = bot;
    boundary.extend(tp.iter().rev().map(|&d| -d));
    b.boundary(boundary, vec![0, l]);
    b.build()
}

/// `k` triangles around an interior vertex, as a bigon.
pub fn wheel(k: usize) -> DiskDiagram {
    let mut b = DiagramBuilder::new(k + 1);
    let spoke: Vec<Dart> = (0..k).map(|i| b.edge(0, i + 1, B)).collect();
    let rim: Vec<Dart> = (0..k).map(|i| b.edge(i + 1, (i + 1) % k + 1, A)).collect();
    for i in 0..k {
        b.face(vec![rim[i], -spoke[(i + 1) % k], spoke[i]]);
    }
    b.boundary(rim, vec![0, k / 2]);
    b.build()
}

/// Interior `m`-gon ringed by `m` boundary faces, as a bigon.
pub fn flower(m: usize) -> DiskDiagram {
    let mut b = DiagramBuilder::new(2 * m);
    let inner: Vec<Dart> = (0..m).map(|i| b.edge(i, (i + 1) % m, A)).collect();
    let rim: Vec<Dart> = (0..m).map(|i| b.edge(m + i, m + (i + 1) % m, A)).collect();
    let spoke: Vec<Dart> = (0..m).map(|i| b.edge(i, m + i, B)).collect();
    b.face(inner);
    for i in 0..m {
        b.face(vec![rim[i], -spoke[(i + 1) % m], -(i as Dart + 1), spoke[i]]);
    }
    b.boundary(rim, vec![0, m / 2]);
    b.build()
}

/// Bigon whose first face meets one side in a single arc and has three
/// interior arcs.
pub fn fan() -> DiskDiagram {
    let (p, u1, u2, q, t2, t1, x, y) = (0, 1, 2, 3, 4, 5, 6, 7);
    let mut b = DiagramBuilder::new(8);
    let e: Vec<Dart> = [
        (p, u1, A),
        (u1, u2, A),
        (u2, q, A),
        (q, t2, A),
        (t2, t1, A),
        (t1, p, A),
        (u1, x, B),
        (u2, y, B),
        (x, y, A),
        (x, t1, B),
        (y, t2, B),
    ]
    .into_iter()
    .map(|(s, t, l)| b.edge(s, t, l))
    .collect();
    let d = |i: usize| e[i - 1];
    b.face(vec![d(2), d(8), -d(9), -d(7)]);
    b.face(vec![d(1), d(7), d(10), d(6)]);
    b.face(vec![d(9), d(11), d(5), -d(10)]);
    b.face(vec![d(3), d(4), -d(11), -d(8)]);
    b.boundary((1..=6).map(d).collect(), vec![0, 3]);
    b.build()
}

/// Two triangles meeting at one vertex.
pub fn wedge() -> DiskDiagram {
    let mut b = DiagramBuilder::new(5);
    let t1 = vec![b.edge(0, 1, A), b.edge(1, 2, B), b.edge(2, 0, A)];
    let t2 = vec![b.edge(0, 3, B), b.edge(3, 4, A), b.edge(4, 0, B)];
    b.face(t1.clone());
    b.face(t2.clone());
    let mut boundary = t1;
    boundary.extend(t2);
    b.boundary(boundary, vec![0, 3]);
    b.build()
}
