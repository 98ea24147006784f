/// A point of a simplicial tree with unit edges: the vertex reached by
/// following `path` from the root, moved back towards its parent so that it
/// sits at fraction `t ∈ (0, 1]` of the last edge. The root is `([], 0)`.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct TreePoint {
    pub path: Vec<u32>,
    pub t: f64,
}

impl TreePoint {
    pub fn root() -> Self {
        Self {
            path: Vec::new(),
            t: 0.0,
        }
    }

    pub fn vertex(path: Vec<u32>) -> Self {
        let t = if path.is_empty() { 0.0 } else { 1.0 };
        Self { path, t }
    }

    /// Normalises `t = 0` to the parent vertex.
    pub fn new(mut path: Vec<u32>, t: f64) -> Self {
        if path.is_empty() {
            return Self::root();
        }
        if t <= 0.0 {
            path.pop();
            return Self::vertex(path);
        }
        Self { path, t: t.min(1.0) }
    }

    /// Distance from the root.
    pub fn depth(&self) -> f64 {
        if self.path.is_empty() {
            0.0
        } else {
            (self.path.len() - 1) as f64 + self.t
        }
    }

    /// Point at distance `s` from the root on the root-to-`end` geodesic;
    /// `end` must be a vertex or a point deeper than `s`.
    pub fn along(end: &[u32], s: f64) -> Self {
        if s <= 0.0 {
            return Self::root();
        }
        let k = s.ceil() as usize;
        if k > end.len() {
            return Self::vertex(end.to_vec());
        }
        let t = s - (k - 1) as f64;
        Self::new(end[..k].to_vec(), t)
    }
}

pub fn tree_distance(p: &TreePoint, q: &TreePoint) -> f64 {
    let c = p
        .path
        .iter()
        .zip(&q.path)
        .take_while(|(a, b)| a == b)
        .count();
    let (dp, dq) = (p.depth(), q.depth());
    if c == p.path.len() || c == q.path.len() {
        // one point lies on the root path of the other
        return (dp - dq).abs();
    }
    (dp - c as f64) + (dq - c as f64)
}

/// Point at distance `s` from `p` towards `q`.
pub fn tree_toward(p: &TreePoint, q: &TreePoint, s: f64) -> TreePoint {
    let d = tree_distance(p, q);
    if s >= d {
        return q.clone();
    }
    if s <= 0.0 {
        return p.clone();
    }
    let c = p
        .path
        .iter()
        .zip(&q.path)
        .take_while(|(a, b)| a == b)
        .count() as f64;
    let (dp, dq) = (p.depth(), q.depth());
    // depth of the branch point along the geodesic
    let m = if c as usize >= p.path.len() || c as usize >= q.path.len() {
        dp.min(dq)
    } else {
        c
    };
    let up = dp - m;
    if s <= up {
        TreePoint::along(&p.path, dp - s)
    } else {
        TreePoint::along(&q.path, m + (s - up))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances() {
        let a = TreePoint::vertex(vec![0, 1, 2]);
        let b = TreePoint::vertex(vec![0, 1, 2, 0, 0, 0]);
        assert_eq!(tree_distance(&a, &b), 3.0);
        let c = TreePoint::vertex(vec![1]);
        assert_eq!(tree_distance(&a, &c), 4.0);
        let half = TreePoint::new(vec![0, 1], 0.5);
        assert_eq!(tree_distance(&half, &a), 1.5);
        assert_eq!(tree_distance(&half, &c), 2.5);
        assert_eq!(TreePoint::new(vec![3], 0.0), TreePoint::root());
    }

    #[test]
    fn walking() {
        let a = TreePoint::vertex(vec![0, 1, 2]);
        let c = TreePoint::vertex(vec![1, 1]);
        let d = tree_distance(&a, &c);
        for k in 0..=10 {
            let s = d * k as f64 / 10.0;
            let m = tree_toward(&a, &c, s);
            assert!((tree_distance(&a, &m) - s).abs() < 1e-12);
            assert!((tree_distance(&m, &c) - (d - s)).abs() < 1e-12);
        }
    }
}
